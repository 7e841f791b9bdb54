#pragma once

#include "keller/scalar.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>

namespace keller {

/// Exponent pair (i, j) of the monomial x^i y^j.
struct Exponent {
    int i = 0;
    int j = 0;
    int degree() const { return i + j; }
    friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Graded-lex: total degree first, then larger x-exponent first.
struct GradedLex {
    bool operator()(const Exponent& a, const Exponent& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.i > b.i;
    }
};

/// Sparse bivariate polynomial over exact Gaussian rationals.
class BiPoly {
public:
    using Terms = std::map<Exponent, Scalar, GradedLex>;

    BiPoly() = default;
    BiPoly(const Scalar& c);
    BiPoly(long c) : BiPoly(Scalar(c)) {}
    BiPoly(int c) : BiPoly(Scalar(c)) {}

    static BiPoly x() { return monomial(1, 1, 0); }
    static BiPoly y() { return monomial(1, 0, 1); }
    static BiPoly monomial(const Scalar& c, int i, int j);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar coeff(int i, int j) const;
    Scalar constant_term() const { return coeff(0, 0); }
    void add_term(const Scalar& c, int i, int j);

    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    int degree_x() const;
    int degree_y() const;
    /// Homogeneous component of total degree d.
    BiPoly homogeneous(int d) const;
    std::set<std::pair<int, int>> support() const;

    BiPoly dx() const;
    BiPoly dy() const;
    BiPoly pow(unsigned n) const;

    Scalar eval(const Scalar& x0, const Scalar& y0) const;
    Complex eval(Complex x0, Complex y0) const;

    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator-=(const BiPoly& o);
    BiPoly& operator*=(const BiPoly& o);
    BiPoly& operator*=(const Scalar& c);

    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(BiPoly a, const BiPoly& b) { return a *= b; }
    friend BiPoly operator*(BiPoly a, const Scalar& c) { return a *= c; }
    friend BiPoly operator*(const Scalar& c, BiPoly a) { return a *= c; }
    friend BiPoly operator-(BiPoly a) { return a *= Scalar(-1); }
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    /// Human-readable form, e.g. "x^2 + 2*x*y + y".
    std::string str() const;

private:
    Terms terms_;
};

BiPoly jacobian_det(const BiPoly& F, const BiPoly& G);

/// P(X(x,y), Y(x,y)), expanded.
BiPoly substitute_map(const BiPoly& P, const BiPoly& X, const BiPoly& Y);

std::set<std::pair<int, int>> support(const BiPoly& F);

/// The pair (F, G) with its Jacobian determinant cached at construction.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(BiPoly F, BiPoly G);

    const BiPoly& F() const { return F_; }
    const BiPoly& G() const { return G_; }
    const BiPoly& jac() const { return jac_; }

    /// The map composed with a change of variables (X, Y).
    PolyMap compose(const BiPoly& X, const BiPoly& Y) const;

private:
    BiPoly F_;
    BiPoly G_;
    BiPoly jac_;
};

struct Point {
    Scalar x;
    Scalar y;
    friend bool operator==(const Point&, const Point&) = default;
};

struct CPoint {
    Complex x;
    Complex y;
};

Point eval_map(const PolyMap& M, const Point& p);
CPoint eval_map(const PolyMap& M, const CPoint& p);

} // namespace keller
