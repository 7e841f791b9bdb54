#pragma once

#include "keller/scalar.hpp"

#include <string>
#include <utility>
#include <vector>

namespace keller {

/// Dense univariate polynomial in x over Gaussian rationals, lowest degree first.
class UPoly {
public:
    UPoly() = default;
    UPoly(const Scalar& c);
    UPoly(long c) : UPoly(Scalar(c)) {}
    UPoly(int c) : UPoly(Scalar(c)) {}
    explicit UPoly(std::vector<Scalar> coeffs);

    static UPoly x() { return UPoly(std::vector<Scalar>{Scalar(0), Scalar(1)}); }

    const std::vector<Scalar>& coeffs() const { return c_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_constant() const { return c_.size() <= 1; }
    Scalar operator[](int k) const;
    Scalar lead() const { return c_.empty() ? Scalar() : c_.back(); }

    UPoly monic() const;
    UPoly derivative() const;

    Scalar eval(const Scalar& x0) const;
    Complex eval(Complex x0) const;

    UPoly& operator+=(const UPoly& o);
    UPoly& operator-=(const UPoly& o);
    UPoly& operator*=(const UPoly& o);
    UPoly& operator*=(const Scalar& s);

    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(UPoly a, const UPoly& b) { return a *= b; }
    friend UPoly operator*(UPoly a, const Scalar& s) { return a *= s; }
    friend UPoly operator-(UPoly a) { return a *= Scalar(-1); }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    std::string str() const;

private:
    void trim();
    std::vector<Scalar> c_;
};

/// Quotient and remainder; throws DomainError on a zero divisor.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic gcd (zero only if both inputs are zero).
UPoly gcd(UPoly a, UPoly b);

} // namespace keller
