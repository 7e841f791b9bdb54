#pragma once

#include "keller/bipoly.hpp"

#include <optional>
#include <variant>

namespace keller {

struct Keller {
    Scalar J;
};
struct NotKellerVerdict {
    /// A nonconstant monomial of J(F, G), or zero when J vanishes identically.
    BiPoly witness;
};
using KellerVerdict = std::variant<Keller, NotKellerVerdict>;

KellerVerdict is_keller(const PolyMap& M);

/// Top-degree homogeneous form of F.
BiPoly leading_part(const BiPoly& F);

struct Certificate {
    bool support_in_triangle = false;
    bool leading_is_power = false;
    bool jacobian_one = false;
    bool all() const { return support_in_triangle && leading_is_power && jacobian_one; }
};

Certificate certify(const PolyMap& M);

struct NormalizedPair {
    PolyMap map;
    int m = 0;
    /// Exponent of the variable change; 0 when no change was applied.
    int ell = 0;
    Scalar scale{1};
    Certificate certificate;
};

/// Brings a Keller pair to the form supp F in the triangle (0, (m,0), (0,m)),
/// F_L = (x+y)^m and J = 1. `forced_ell` pins the exponent of the change.
NormalizedPair normalize_keller(const PolyMap& M, std::optional<int> forced_ell = std::nullopt);

} // namespace keller
