#include "keller/ratfunc.hpp"

#include "keller/errors.hpp"

namespace keller {

RatFunc::RatFunc(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    reduce();
}

void RatFunc::reduce() {
    if (num_.is_zero()) {
        den_ = UPoly(1);
        return;
    }
    if (!den_.is_constant()) {
        UPoly g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = divmod(num_, g).first;
            den_ = divmod(den_, g).first;
        }
    }
    Scalar lead = den_.lead();
    if (!lead.is_one()) {
        Scalar inv = lead.inverse();
        num_ *= inv;
        den_ *= inv;
    }
}

Scalar RatFunc::constant() const {
    if (!is_constant()) throw DomainError("rational function is not constant");
    return num_[0];
}

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw DomainError("inverse of zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::derivative() const {
    if (den_.is_one()) return RatFunc(num_.derivative());
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Scalar RatFunc::eval(const Scalar& x0) const {
    Scalar d = den_.eval(x0);
    if (d.is_zero()) throw PoleAtX0("denominator vanishes at x0 = " + x0.str());
    return num_.eval(x0) / d;
}

Complex RatFunc::eval(Complex x0) const {
    Complex d = den_.eval(x0);
    if (d == Complex(0.0, 0.0)) throw PoleAtX0("denominator vanishes at x0");
    return num_.eval(x0) / d;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (den_.is_one() && o.den_.is_one()) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
    }
    reduce();
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    if (den_.is_one() && o.den_.is_one()) {
        num_ *= o.num_;
        return *this;
    }
    num_ *= o.num_;
    den_ *= o.den_;
    reduce();
    return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

std::string RatFunc::str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

} // namespace keller
