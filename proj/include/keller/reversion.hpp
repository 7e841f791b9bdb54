#pragma once

#include "keller/series.hpp"

#include <map>
#include <vector>

namespace keller {

/// C(k; l_1..l_n) = k(k-1)...(k-|l|+1) / (l_1! ... l_n!).
Rational multinomial(const Rational& k, const std::vector<long>& lambda);

/// Partitions of d as multiplicity vectors: lambda[k-1] = number of parts equal to k.
std::vector<std::vector<long>> partitions(long d);

/// z as a series in w = F(z): coeffs[i] is the coefficient of w^i (coeffs[0] = 0).
template <class T>
struct ReversionResult {
    std::vector<T> coeffs;

    /// The inverse as a series in w, known through w^N.
    Laurent<T> series() const {
        return Laurent<T>::truncated(0, coeffs, static_cast<long>(coeffs.size()));
    }
};

/// Reversion of F = f_1 z + f_2 z^2 + ... through order N by comparing
/// coefficients of z^i in z = sum_j b_j F^j:
///   b_i = -f_1^(-i) sum_{j<i} b_j f_1^j sum_{lambda |- i-j} C(j; lambda) prod g_k^lambda_k,
/// with g_k = f_(k+1)/f_1 and lambda running over partitions of i-j.
template <class T>
ReversionResult<T> formal_inverse(const Laurent<T>& F, int N) {
    if (!F.is_power_series() || (!F.is_zero() && F.alpha() < 1))
        throw PreconditionError("series to invert must have zero constant term");
    const T f1 = F.coeff(1);
    if (is_zero_coeff(f1)) throw ZeroLinearTerm("linear coefficient vanishes");
    const T inv_f1 = T(1) / f1;

    std::vector<T> g(static_cast<std::size_t>(N) + 1, T(0));
    for (int k = 1; k < N; ++k) g[static_cast<std::size_t>(k)] = F.coeff(k + 1) * inv_f1;

    // S[d][l] = sum over partitions of d with l parts of l!/prod(lambda!) prod g^lambda
    std::vector<std::map<long, T>> S(static_cast<std::size_t>(N) + 1);
    for (long d = 1; d < N; ++d) {
        for (const auto& lam : partitions(d)) {
            long parts = 0;
            T prod(1);
            bool zero = false;
            for (std::size_t k = 0; k < lam.size() && !zero; ++k) {
                if (lam[k] == 0) continue;
                parts += lam[k];
                if (is_zero_coeff(g[k + 1])) {
                    zero = true;
                    break;
                }
                prod *= field_pow(g[k + 1], lam[k]);
            }
            if (zero) continue;
            T w = from_rational<T>(multinomial(Rational(parts), lam)) * prod;
            auto [it, inserted] = S[static_cast<std::size_t>(d)].try_emplace(parts, w);
            if (!inserted) it->second += w;
        }
    }

    std::vector<T> f1pow(static_cast<std::size_t>(N) + 1, T(1));
    for (int k = 1; k <= N; ++k) f1pow[static_cast<std::size_t>(k)] = f1pow[static_cast<std::size_t>(k - 1)] * f1;

    ReversionResult<T> out;
    out.coeffs.assign(static_cast<std::size_t>(N) + 1, T(0));
    if (N >= 1) out.coeffs[1] = inv_f1;
    for (int i = 2; i <= N; ++i) {
        T acc(0);
        for (int j = 1; j < i; ++j) {
            const T& bj = out.coeffs[static_cast<std::size_t>(j)];
            if (is_zero_coeff(bj)) continue;
            T inner(0);
            for (const auto& [parts, s] : S[static_cast<std::size_t>(i - j)])
                if (parts <= j) inner += from_rational<T>(binomial(Rational(j), parts)) * s;
            if (!is_zero_coeff(inner)) acc += bj * f1pow[static_cast<std::size_t>(j)] * inner;
        }
        out.coeffs[static_cast<std::size_t>(i)] = -(acc * field_pow(inv_f1, i));
    }
    return out;
}

} // namespace keller
