#pragma once

#include <string>
#include <vector>

namespace keller {

struct SelfCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Fast invariant suite behind `kellerctl selftest`.
std::vector<SelfCheck> run_selftest();

} // namespace keller
