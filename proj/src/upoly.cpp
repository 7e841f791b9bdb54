#include "keller/upoly.hpp"

#include "keller/errors.hpp"

#include <algorithm>

namespace keller {

UPoly::UPoly(const Scalar& c) {
    if (!c.is_zero()) c_.push_back(c);
}

UPoly::UPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar UPoly::operator[](int k) const {
    return (k < 0 || k >= static_cast<int>(c_.size())) ? Scalar() : c_[k];
}

UPoly UPoly::monic() const {
    if (c_.empty() || c_.back().is_one()) return *this;
    return *this * c_.back().inverse();
}

UPoly UPoly::derivative() const {
    std::vector<Scalar> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Scalar(static_cast<long>(k)));
    return UPoly(std::move(d));
}

Scalar UPoly::eval(const Scalar& x0) const {
    Scalar acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x0 + *it;
    return acc;
}

Complex UPoly::eval(Complex x0) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x0 + it->to_complex();
    return acc;
}

UPoly& UPoly::operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

UPoly& UPoly::operator*=(const UPoly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Scalar> out(c_.size() + o.c_.size() - 1);
    for (std::size_t a = 0; a < c_.size(); ++a) {
        if (c_[a].is_zero()) continue;
        for (std::size_t b = 0; b < o.c_.size(); ++b) out[a + b] += c_[a] * o.c_[b];
    }
    c_ = std::move(out);
    trim();
    return *this;
}

UPoly& UPoly::operator*=(const Scalar& s) {
    if (s.is_zero()) {
        c_.clear();
        return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
}

std::string UPoly::str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
        if (c_[k].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string mono = k == 0 ? "" : (k == 1 ? "x" : "x^" + std::to_string(k));
        if (mono.empty())
            out += "(" + c_[k].str() + ")";
        else if (c_[k].is_one())
            out += mono;
        else
            out += "(" + c_[k].str() + ")*" + mono;
    }
    return out;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (a.degree() < b.degree()) return {UPoly(), a};
    std::vector<Scalar> rem = a.coeffs();
    std::vector<Scalar> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    Scalar inv_lead = b.lead().inverse();
    const auto& bc = b.coeffs();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        Scalar q = rem[static_cast<std::size_t>(k + b.degree())] * inv_lead;
        quo[static_cast<std::size_t>(k)] = q;
        if (q.is_zero()) continue;
        for (int t = 0; t <= b.degree(); ++t) rem[static_cast<std::size_t>(k + t)] -= q * bc[t];
    }
    rem.resize(static_cast<std::size_t>(std::max(b.degree(), 0)));
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

} // namespace keller
