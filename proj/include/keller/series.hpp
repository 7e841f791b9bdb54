#pragma once

#include "keller/errors.hpp"
#include "keller/ratfunc.hpp"
#include "keller/scalar.hpp"

#include <algorithm>
#include <climits>
#include <optional>
#include <string>
#include <vector>

namespace keller {

/// Coefficient-field helpers shared by Rational, Scalar and RatFunc.
inline bool is_zero_coeff(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero_coeff(const Scalar& s) { return s.is_zero(); }
inline bool is_zero_coeff(const RatFunc& f) { return f.is_zero(); }
inline bool is_one_coeff(const Rational& q) { return q == 1; }
inline bool is_one_coeff(const Scalar& s) { return s.is_one(); }
inline bool is_one_coeff(const RatFunc& f) { return f.is_one(); }

template <class T>
T from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else
        return T(Scalar(q));
}

template <class T>
T field_pow(const T& a, long n) {
    if (n < 0) return field_pow<T>(T(T(1) / a), -n);
    T result(1);
    T base = a;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

/// Precision value of an exact (finite, fully known) series.
inline constexpr long kExact = LONG_MAX / 4;

/// Truncated Laurent series sum_i c_i y^(alpha+i). Every exponent below
/// `precision()` is known; for exact series the precision is kExact.
template <class T>
class Laurent {
public:
    Laurent() = default;

    static Laurent exact(int alpha, std::vector<T> coeffs) {
        return Laurent(alpha, std::move(coeffs), kExact);
    }
    static Laurent truncated(int alpha, std::vector<T> coeffs, long precision) {
        return Laurent(alpha, std::move(coeffs), precision);
    }
    static Laurent monomial(const T& c, int e) { return exact(e, {c}); }
    static Laurent constant(const T& c) { return exact(0, {c}); }
    /// The zero series known up to (but excluding) y^precision.
    static Laurent zero(long precision = kExact) { return Laurent(0, {}, precision); }

    int alpha() const { return alpha_; }
    const std::vector<T>& coeffs() const { return c_; }
    long precision() const { return prec_; }
    bool is_exact() const { return prec_ >= kExact; }
    bool is_zero() const { return c_.empty(); }
    /// Exponent of the last stored term plus one.
    long end() const { return alpha_ + static_cast<long>(c_.size()); }
    const T& lead() const {
        if (c_.empty()) throw ZeroLeading("leading coefficient of a zero series");
        return c_.front();
    }
    /// Coefficient of y^e; throws if e is beyond the known precision.
    T coeff(long e) const {
        if (e >= prec_) throw IllDefined("coefficient of y^" + std::to_string(e) + " is not determined");
        if (e < alpha_ || e >= end()) return T(0);
        return c_[static_cast<std::size_t>(e - alpha_)];
    }
    /// True if every y^k with k < 0 has zero coefficient.
    bool is_power_series() const { return c_.empty() || alpha_ >= 0; }
    /// True if every stored term has a negative exponent (a polynomial in 1/y).
    bool is_inverse_polynomial() const { return is_exact() && (c_.empty() || end() <= 0); }

    /// Multiplication by y^e.
    Laurent shift(long e) const {
        return Laurent(alpha_ + static_cast<int>(e), c_, is_exact() ? kExact : prec_ + e);
    }

    /// Keep only terms with exponent < precision.
    Laurent truncate(long precision) const {
        Laurent r = *this;
        r.prec_ = std::min(prec_, precision);
        r.normalize();
        return r;
    }

    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        std::vector<U> out;
        out.reserve(c_.size());
        for (const auto& c : c_) out.push_back(f(c));
        return Laurent<U>::truncated(alpha_, std::move(out), prec_);
    }

    /// d/dy.
    Laurent derivative() const {
        std::vector<T> out;
        out.reserve(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k)
            out.push_back(c_[k] * T(static_cast<long>(alpha_) + static_cast<long>(k)));
        long p = is_exact() ? kExact : prec_ - 1;
        return Laurent(alpha_ - 1, std::move(out), p);
    }

    /// Multiplicative inverse with `terms` coefficients (fewer if this series is truncated).
    Laurent inverse(int terms) const {
        if (c_.empty()) throw DomainError("inverse of a zero series");
        long v = alpha_;
        long p = -v + terms;
        if (!is_exact()) p = std::min(p, prec_ - 2 * v);
        std::size_t n = static_cast<std::size_t>(std::max<long>(p + v, 0));
        std::vector<T> out(n, T(0));
        T inv0 = T(1) / c_[0];
        for (std::size_t k = 0; k < n; ++k) {
            T acc = k == 0 ? T(1) : T(0);
            for (std::size_t j = 1; j <= k && j < c_.size(); ++j)
                if (!is_zero_coeff(c_[j])) acc -= c_[j] * out[k - j];
            out[k] = acc * inv0;
        }
        if (is_exact() && c_.size() == 1) return exact(-alpha_, {inv0});
        return Laurent(-alpha_, std::move(out), p);
    }

    Laurent pow_int(long n, int terms) const {
        if (n < 0) return inverse(terms).pow_int(-n, terms);
        Laurent result = constant(T(1));
        Laurent base = *this;
        while (n > 0) {
            if (n & 1) result = (result * base).cap(terms);
            n >>= 1;
            if (n) base = (base * base).cap(terms);
        }
        return result;
    }

    /// For exact series with many terms, drop terms beyond `terms` relative
    /// to the valuation (turning it into a truncated series).
    Laurent cap(int terms) const {
        if (c_.empty()) return *this;
        long limit = alpha_ + terms;
        if (end() <= limit && prec_ <= limit) return *this;
        if (end() <= limit && is_exact()) return *this;
        return truncate(limit);
    }

    Laurent& operator+=(const Laurent& o) { return *this = combine(*this, o, false); }
    Laurent& operator-=(const Laurent& o) { return *this = combine(*this, o, true); }
    Laurent& operator*=(const Laurent& o) { return *this = multiply(*this, o); }
    Laurent& operator*=(const T& s) {
        if (is_zero_coeff(s)) {
            c_.clear();
            alpha_ = 0;
            return *this;
        }
        for (auto& c : c_) c *= s;
        return *this;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) { return combine(a, b, false); }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return combine(a, b, true); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) { return multiply(a, b); }
    friend Laurent operator*(Laurent a, const T& s) { return a *= s; }
    friend Laurent operator*(const T& s, Laurent a) { return a *= s; }
    friend Laurent operator-(Laurent a) { return a *= T(-1); }

    /// Equality of known coefficients up to the common precision.
    bool agrees_with(const Laurent& o) const {
        long p = std::min(prec_, o.prec_);
        long lo = std::min<long>(c_.empty() ? p : alpha_, o.c_.empty() ? p : o.alpha_);
        long hi = std::min(p, std::max(end(), o.end()));
        for (long e = lo; e < hi; ++e)
            if (!(coeff(e) == o.coeff(e))) return false;
        return true;
    }
    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.prec_ == b.prec_ && a.alpha_ == b.alpha_ && a.c_ == b.c_;
    }

private:
    Laurent(int alpha, std::vector<T> coeffs, long precision)
        : alpha_(alpha), c_(std::move(coeffs)), prec_(precision) {
        normalize();
    }

    void normalize() {
        if (!is_exact() && end() > prec_) {
            long keep = std::max<long>(prec_ - alpha_, 0);
            c_.resize(static_cast<std::size_t>(keep));
        }
        std::size_t lead = 0;
        while (lead < c_.size() && is_zero_coeff(c_[lead])) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            alpha_ = 0;
            return;
        }
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            alpha_ += static_cast<int>(lead);
        }
        while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
    }

    static Laurent combine(const Laurent& a, const Laurent& b, bool subtract) {
        long p = std::min(a.prec_, b.prec_);
        if (a.c_.empty() && b.c_.empty()) return Laurent(0, {}, p);
        long lo = std::min<long>(a.c_.empty() ? b.alpha_ : a.alpha_, b.c_.empty() ? a.alpha_ : b.alpha_);
        long hi = std::max(a.end(), b.end());
        if (p < kExact) hi = std::min(hi, p);
        if (hi <= lo) return Laurent(0, {}, p);
        std::vector<T> out(static_cast<std::size_t>(hi - lo), T(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k) {
            long e = a.alpha_ + static_cast<long>(k);
            if (e < hi) out[static_cast<std::size_t>(e - lo)] += a.c_[k];
        }
        for (std::size_t k = 0; k < b.c_.size(); ++k) {
            long e = b.alpha_ + static_cast<long>(k);
            if (e >= hi) continue;
            if (subtract)
                out[static_cast<std::size_t>(e - lo)] -= b.c_[k];
            else
                out[static_cast<std::size_t>(e - lo)] += b.c_[k];
        }
        return Laurent(static_cast<int>(lo), std::move(out), p);
    }

    static Laurent multiply(const Laurent& a, const Laurent& b) {
        long pa = a.prec_, pb = b.prec_;
        if (a.c_.empty() || b.c_.empty()) {
            // 0 * b is known to precision pa + val(b)
            long p = kExact;
            if (a.c_.empty() && pa < kExact) p = b.c_.empty() ? std::min(pa, pb) : pa + b.alpha_;
            if (b.c_.empty() && pb < kExact) p = std::min(p, a.c_.empty() ? pa : pb + a.alpha_);
            return Laurent(0, {}, p);
        }
        long p = kExact;
        if (pa < kExact) p = std::min(p, pa + b.alpha_);
        if (pb < kExact) p = std::min(p, pb + a.alpha_);
        long lo = static_cast<long>(a.alpha_) + b.alpha_;
        long hi = a.end() + b.end() - 1;
        if (p < kExact) hi = std::min(hi, p);
        if (hi <= lo) return Laurent(0, {}, p);
        std::vector<T> out(static_cast<std::size_t>(hi - lo), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero_coeff(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                std::size_t k = i + j;
                if (static_cast<long>(k) >= hi - lo) break;
                if (is_zero_coeff(b.c_[j])) continue;
                out[k] += a.c_[i] * b.c_[j];
            }
        }
        return Laurent(static_cast<int>(lo), std::move(out), p);
    }

    int alpha_ = 0;
    std::vector<T> c_;
    long prec_ = kExact;
};

} // namespace keller
