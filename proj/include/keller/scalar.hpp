#pragma once

#include <complex>
#include <gmpxx.h>
#include <iosfwd>
#include <string>
#include <string_view>

namespace keller {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Parses "p", "p/q", or a decimal such as "-9.9" / "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Exact conversion of the shortest round-trip decimal form of `v`
/// (so 9.9 becomes 99/10, not the nearest binary fraction).
Rational rational_from_double(double v);

/// Generalized binomial coefficient C(a, i) = a(a-1)...(a-i+1)/i!.
Rational binomial(const Rational& a, long i);

/// Smallest dyadic rational >= v (v finite). Used to round majorant
/// coefficients upward when the true value is irrational.
Rational rational_upper(double v);
Rational rational_lower(double v);

/// Exact Gaussian rational re + im*i.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : re_(v), im_(0) {}
    Scalar(int v) : re_(v), im_(0) {}
    Scalar(Rational re) : re_(std::move(re)), im_(0) {}
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }
    /// Parses "p/q+r/s*i", "i", "-2*i", "3-1/2*i", decimals allowed.
    static Scalar parse(std::string_view text);
    static Scalar from_complex(Complex z);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }
    /// |z|^2, exact.
    Rational norm() const { return re_ * re_ + im_ * im_; }
    double abs() const { return std::abs(to_complex()); }
    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

    Scalar inverse() const;
    /// Exact integer power; negative exponents require a nonzero value.
    Scalar pow(long n) const;
    /// Principal-branch power r^b e^{i b theta}, theta in (-pi, pi]; float only.
    Complex principal_pow(double b) const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend Scalar operator-(const Scalar& a) { return Scalar(-a.re_, -a.im_); }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string str() const;

private:
    Rational re_{0};
    Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Principal-branch power on floats (same convention as Scalar::principal_pow).
Complex principal_pow(Complex a, double b);

/// Rational bounds on |z|: abs_upper(z) >= |z| >= abs_lower(z) >= 0, exact checks.
Rational abs_upper(const Scalar& z);
Rational abs_lower(const Scalar& z);

} // namespace keller
