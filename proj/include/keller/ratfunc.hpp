#pragma once

#include "keller/upoly.hpp"

#include <string>

namespace keller {

/// Rational function num/den in x. The denominator is kept monic and
/// common factors are cancelled, so the representation is canonical.
class RatFunc {
public:
    RatFunc() : den_(1) {}
    RatFunc(const Scalar& c) : num_(c), den_(1) {}
    RatFunc(long c) : RatFunc(Scalar(c)) {}
    RatFunc(int c) : RatFunc(Scalar(c)) {}
    RatFunc(UPoly num) : num_(std::move(num)), den_(1) {}
    RatFunc(UPoly num, UPoly den);

    static RatFunc x() { return RatFunc(UPoly::x()); }

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    /// Value of a constant function; DomainError otherwise.
    Scalar constant() const;

    RatFunc inverse() const;
    RatFunc derivative() const;

    /// Throws PoleAtX0 when the denominator vanishes at x0.
    Scalar eval(const Scalar& x0) const;
    Complex eval(Complex x0) const;

    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    RatFunc& operator/=(const RatFunc& o);

    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
    friend RatFunc operator-(RatFunc a) {
        a.num_ *= Scalar(-1);
        return a;
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    std::string str() const;

private:
    void reduce();
    UPoly num_;
    UPoly den_;
};

} // namespace keller
