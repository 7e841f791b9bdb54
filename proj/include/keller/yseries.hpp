#pragma once

#include "keller/series.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace keller {

/// Truncated Laurent series in y with rational-function-in-x coefficients.
using YSeries = Laurent<RatFunc>;
/// Series with constant (Gaussian rational) coefficients.
using CSeries = Laurent<Scalar>;

inline constexpr int kDefaultOrder = 16;

/// P^beta = p0^beta y^(alpha*beta) sum_j C(beta, j) h^j with h = P/(p0 y^alpha) - 1,
/// keeping the terms i = 0..N. `lead_root` supplies p0^beta when p0 != 1 and
/// beta is not an integer; it is verified exactly.
template <class T>
Laurent<T> pow_rational(const Laurent<T>& P, const Rational& beta, int N,
                        const std::optional<T>& lead_root = std::nullopt) {
    if (P.is_zero()) {
        if (sgn(beta) > 0) return Laurent<T>::zero(P.precision());
        throw DomainError("non-positive power of a zero series");
    }
    Rational ab = beta * P.alpha();
    if (ab.get_den() != 1) throw ExponentError("alpha*beta = " + to_string(ab) + " is not an integer");
    const bool integral = beta.get_den() == 1;
    const long shift = ab.get_num().get_si();

    if (integral && sgn(beta) >= 0 && P.is_exact()) return P.pow_int(beta.get_num().get_si(), INT_MAX / 4);

    const T& p0 = P.lead();
    T lead(1);
    if (integral) {
        lead = field_pow(p0, beta.get_num().get_si());
    } else if (is_one_coeff(p0)) {
        lead = T(1);
    } else if (lead_root) {
        long q = beta.get_den().get_si();
        long p = beta.get_num().get_si();
        if (!(field_pow(*lead_root, q) == field_pow(p0, p)))
            throw BranchError("supplied leading root does not match p0^beta");
        lead = *lead_root;
    } else {
        throw BranchError("leading coefficient is not 1 and beta is not an integer");
    }

    long relprec = P.is_exact() ? kExact : P.precision() - P.alpha();
    std::size_t n = static_cast<std::size_t>(std::min<long>(N + 1, relprec));
    const T inv0 = T(1) / p0;
    std::vector<T> h(n, T(0));
    for (std::size_t i = 1; i < n && i < P.coeffs().size(); ++i) h[i] = P.coeffs()[i] * inv0;

    std::vector<T> sum(n, T(0));
    std::vector<T> hj(n, T(0));
    if (n > 0) {
        sum[0] = T(1);
        hj[0] = T(1);
    }
    for (std::size_t j = 1; j < n; ++j) {
        // hj <- hj * h; the lowest nonzero index of h^j is >= j
        std::vector<T> next(n, T(0));
        for (std::size_t a = j - 1; a < n; ++a) {
            if (is_zero_coeff(hj[a])) continue;
            for (std::size_t b = 1; a + b < n; ++b)
                if (!is_zero_coeff(h[b])) next[a + b] += hj[a] * h[b];
        }
        hj = std::move(next);
        T c = from_rational<T>(binomial(beta, static_cast<long>(j)));
        if (is_zero_coeff(c)) break;
        for (std::size_t k = j; k < n; ++k)
            if (!is_zero_coeff(hj[k])) sum[k] += c * hj[k];
    }
    for (auto& s : sum) s *= lead;
    return Laurent<T>::truncated(static_cast<int>(shift), std::move(sum), shift + static_cast<long>(n));
}

/// Coefficients b_i with Q = sum_i b_i P^((beta+i)/alpha), beta = val(Q), alpha = val(P).
template <class T>
std::vector<T> rebase_coeff(const Laurent<T>& Q, const Laurent<T>& P, int count) {
    if (P.is_zero() || P.alpha() == 0) throw PreconditionError("P must have nonzero leading exponent");
    const long alpha = P.alpha();
    const long beta = Q.is_zero() ? 0 : Q.alpha();
    std::vector<T> b;
    b.reserve(static_cast<std::size_t>(count));
    Laurent<T> R = Q;
    for (int i = 0; i < count; ++i) {
        long e = beta + i;
        Rational ex(e, alpha);
        ex.canonicalize();
        Laurent<T> Pe = pow_rational(P, ex, count - i);
        T bi = R.coeff(e) / Pe.lead();
        b.push_back(bi);
        if (!is_zero_coeff(bi)) R -= Pe * bi;
    }
    return b;
}

/// Re-expansion sum_i b_i P^((beta+i)/alpha) used by the round-trip check.
template <class T>
Laurent<T> rebase_expand(const std::vector<T>& b, long beta, const Laurent<T>& P) {
    const long alpha = P.alpha();
    const int count = static_cast<int>(b.size());
    Laurent<T> sum = Laurent<T>::zero();
    for (int i = 0; i < count; ++i) {
        if (is_zero_coeff(b[static_cast<std::size_t>(i)])) continue;
        Rational ex(beta + i, alpha);
        ex.canonicalize();
        sum += pow_rational(P, ex, count - i) * b[static_cast<std::size_t>(i)];
    }
    return sum.truncate(beta + count);
}

using SeriesArg = std::variant<Scalar, YSeries>;

/// P with x -> Q1 and y -> Q2. Scalar arguments for both yield a Scalar
/// (the partial sum of the known terms). `N` bounds the number of terms of
/// intermediate inverses.
std::variant<Scalar, YSeries> compose_series(const YSeries& P, const SeriesArg& Q1, const SeriesArg& Q2,
                                             int N = kDefaultOrder);

/// |p_i(x0)| <= C r^i for every index i past the stored terms.
struct TailBound {
    Rational C;
    Rational r;
};

struct CertifiedValue {
    Scalar value;
    bool certified = false;
    /// Upper bound on the omitted remainder; absent when no bound is available.
    std::optional<double> remainder_bound;
};

inline constexpr double kDefaultEvalTol = 1e-3;

CertifiedValue eval_certified(const YSeries& P, const Scalar& x0, const Scalar& y0,
                              const std::optional<TailBound>& tail = std::nullopt,
                              double tol = kDefaultEvalTol);

/// Floating evaluation of the known terms.
Complex eval_series(const YSeries& P, Complex x0, Complex y0);
/// Coefficients evaluated at x0, giving a constant-coefficient series.
CSeries specialize(const YSeries& P, const Scalar& x0);
YSeries lift(const CSeries& P);

/// d/dx applied coefficient-wise.
YSeries derivative_x(const YSeries& P);

} // namespace keller
