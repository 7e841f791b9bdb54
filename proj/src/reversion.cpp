#include "keller/reversion.hpp"

namespace keller {

Rational multinomial(const Rational& k, const std::vector<long>& lambda) {
    long total = 0;
    Rational r = 1;
    for (long l : lambda) {
        if (l < 0) throw DomainError("negative multiplicity");
        for (long t = 1; t <= l; ++t) r /= t;
        total += l;
    }
    for (long t = 0; t < total; ++t) r *= k - t;
    return r;
}

namespace {

void partitions_rec(long remaining, long max_part, std::vector<long>& lam, std::vector<std::vector<long>>& out) {
    if (remaining == 0) {
        out.push_back(lam);
        return;
    }
    for (long k = std::min(remaining, max_part); k >= 1; --k) {
        ++lam[static_cast<std::size_t>(k - 1)];
        partitions_rec(remaining - k, k, lam, out);
        --lam[static_cast<std::size_t>(k - 1)];
    }
}

} // namespace

std::vector<std::vector<long>> partitions(long d) {
    std::vector<std::vector<long>> out;
    if (d < 0) return out;
    std::vector<long> lam(static_cast<std::size_t>(d), 0);
    partitions_rec(d, d, lam, out);
    return out;
}

} // namespace keller
