#include "keller/bipoly.hpp"

#include <algorithm>
#include <vector>

namespace keller {

BiPoly::BiPoly(const Scalar& c) {
    if (!c.is_zero()) terms_.emplace(Exponent{0, 0}, c);
}

BiPoly BiPoly::monomial(const Scalar& c, int i, int j) {
    BiPoly p;
    p.add_term(c, i, j);
    return p;
}

bool BiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

Scalar BiPoly::coeff(int i, int j) const {
    auto it = terms_.find(Exponent{i, j});
    return it == terms_.end() ? Scalar() : it->second;
}

void BiPoly::add_term(const Scalar& c, int i, int j) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(Exponent{i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int BiPoly::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

int BiPoly::degree_x() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.i);
    return d;
}

int BiPoly::degree_y() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.j);
    return d;
}

BiPoly BiPoly::homogeneous(int d) const {
    BiPoly out;
    for (const auto& [e, c] : terms_)
        if (e.degree() == d) out.terms_.emplace(e, c);
    return out;
}

std::set<std::pair<int, int>> BiPoly::support() const {
    std::set<std::pair<int, int>> s;
    for (const auto& [e, c] : terms_) s.emplace(e.i, e.j);
    return s;
}

BiPoly BiPoly::dx() const {
    BiPoly out;
    for (const auto& [e, c] : terms_)
        if (e.i > 0) out.add_term(c * Scalar(e.i), e.i - 1, e.j);
    return out;
}

BiPoly BiPoly::dy() const {
    BiPoly out;
    for (const auto& [e, c] : terms_)
        if (e.j > 0) out.add_term(c * Scalar(e.j), e.i, e.j - 1);
    return out;
}

BiPoly BiPoly::pow(unsigned n) const {
    BiPoly result(1);
    BiPoly base = *this;
    while (n > 0) {
        if (n & 1u) result *= base;
        n >>= 1u;
        if (n) base *= base;
    }
    return result;
}

namespace {

template <class T>
std::vector<T> power_table(const T& v, int n) {
    std::vector<T> p;
    p.reserve(static_cast<std::size_t>(n) + 1);
    p.emplace_back(T(1));
    for (int k = 1; k <= n; ++k) p.push_back(p.back() * v);
    return p;
}

} // namespace

Scalar BiPoly::eval(const Scalar& x0, const Scalar& y0) const {
    if (terms_.empty()) return {};
    auto xp = power_table(x0, degree_x());
    auto yp = power_table(y0, degree_y());
    Scalar sum;
    for (const auto& [e, c] : terms_) sum += c * xp[e.i] * yp[e.j];
    return sum;
}

Complex BiPoly::eval(Complex x0, Complex y0) const {
    if (terms_.empty()) return {};
    auto xp = power_table(x0, degree_x());
    auto yp = power_table(y0, degree_y());
    Complex sum{};
    for (const auto& [e, c] : terms_) sum += c.to_complex() * xp[e.i] * yp[e.j];
    return sum;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(c, e.i, e.j);
    return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(-c, e.i, e.j);
    return *this;
}

BiPoly& BiPoly::operator*=(const BiPoly& o) {
    BiPoly out;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) out.add_term(ca * cb, ea.i + eb.i, ea.j + eb.j);
    *this = std::move(out);
    return *this;
}

BiPoly& BiPoly::operator*=(const Scalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

std::string BiPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    std::vector<std::pair<Exponent, Scalar>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
    for (const auto& [e, c] : ordered) {
        std::string mono;
        if (e.i > 0) mono += e.i == 1 ? "x" : "x^" + std::to_string(e.i);
        if (e.j > 0) {
            if (!mono.empty()) mono += "*";
            mono += e.j == 1 ? "y" : "y^" + std::to_string(e.j);
        }
        std::string coef;
        bool negative = false;
        if (c.is_real()) {
            negative = sgn(c.re()) < 0;
            Rational a = abs(c.re());
            if (!(a == 1) || mono.empty()) coef = to_string(a);
        } else {
            coef = "(" + c.str() + ")";
        }
        std::string term = coef;
        if (!coef.empty() && !mono.empty()) term += "*";
        term += mono;
        if (first)
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

BiPoly jacobian_det(const BiPoly& F, const BiPoly& G) {
    return F.dx() * G.dy() - F.dy() * G.dx();
}

BiPoly substitute_map(const BiPoly& P, const BiPoly& X, const BiPoly& Y) {
    if (P.is_zero()) return {};
    auto xp = power_table(X, P.degree_x());
    auto yp = power_table(Y, P.degree_y());
    BiPoly out;
    for (const auto& [e, c] : P.terms()) out += c * (xp[e.i] * yp[e.j]);
    return out;
}

std::set<std::pair<int, int>> support(const BiPoly& F) { return F.support(); }

PolyMap::PolyMap(BiPoly F, BiPoly G)
    : F_(std::move(F)), G_(std::move(G)), jac_(jacobian_det(F_, G_)) {}

PolyMap PolyMap::compose(const BiPoly& X, const BiPoly& Y) const {
    return PolyMap(substitute_map(F_, X, Y), substitute_map(G_, X, Y));
}

Point eval_map(const PolyMap& M, const Point& p) {
    return {M.F().eval(p.x, p.y), M.G().eval(p.x, p.y)};
}

CPoint eval_map(const PolyMap& M, const CPoint& p) {
    return {M.F().eval(p.x, p.y), M.G().eval(p.x, p.y)};
}

} // namespace keller
