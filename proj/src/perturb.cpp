#include "keller/perturb.hpp"

#include "keller/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace keller {

Scalar det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2 inverse(const Mat2& m) {
    Scalar D = det(m);
    if (D.is_zero()) throw DomainError("singular 2x2 matrix");
    Scalar r = D.inverse();
    return {{{m[1][1] * r, -m[0][1] * r}, {-m[1][0] * r, m[0][0] * r}}};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return out;
}

std::string to_string(FrameStyle s) {
    switch (s) {
    case FrameStyle::additive: return "additive";
    case FrameStyle::mult_x: return "mult_x";
    case FrameStyle::mult_xy: return "mult_xy";
    case FrameStyle::scaled_a0a1: return "scaled_a0a1";
    }
    return "?";
}

FrameStyle parse_style(const std::string& text) {
    if (text == "additive") return FrameStyle::additive;
    if (text == "mult_x") return FrameStyle::mult_x;
    if (text == "mult_xy") return FrameStyle::mult_xy;
    if (text == "scaled_a0a1" || text == "scaled") return FrameStyle::scaled_a0a1;
    throw ParseError("unknown frame style '" + text + "'");
}

namespace {

Mat2 linear_part(const BiPoly& F, const BiPoly& G) {
    return {{{F.coeff(1, 0), G.coeff(1, 0)}, {F.coeff(0, 1), G.coeff(0, 1)}}};
}

BiPoly shifted(const Scalar& c, const Scalar& scale) { return BiPoly(c) + scale * BiPoly::x(); }

} // namespace

LocalFrame recenter_frame(const PolyMap& M, const Point& p0, const Point& p1, FrameStyle style,
                          const std::optional<Point>& xi) {
    const BiPoly y = BiPoly::y();
    BiPoly X0, Y0, X1, Y1;
    switch (style) {
    case FrameStyle::additive:
        X0 = shifted(p0.x, 1), Y0 = p0.y + y, X1 = shifted(p1.x, 1), Y1 = p1.y + y;
        break;
    case FrameStyle::mult_x:
    case FrameStyle::mult_xy:
        if (p0.x.is_zero() || p1.x.is_zero()) throw StylePrecondition("multiplicative frame needs x0, x1 != 0");
        if (style == FrameStyle::mult_xy && p1.y.is_zero()) throw StylePrecondition("mult_xy frame needs y1 != 0");
        X0 = shifted(p0.x, p0.x), Y0 = p0.y + y, X1 = shifted(p1.x, p1.x);
        Y1 = style == FrameStyle::mult_xy ? p1.y + p1.y * y : p1.y + y;
        break;
    case FrameStyle::scaled_a0a1: {
        if (!xi) throw StylePrecondition("scaled frame needs xi");
        Scalar a0 = p0.x == xi->x ? Scalar(1) : p0.x - xi->x;
        Scalar a1 = p1.x == xi->y ? Scalar(1) : p1.x - xi->y;
        X0 = shifted(p0.x, a0), Y0 = p0.y + y, X1 = shifted(p1.x, a1), Y1 = p1.y + y;
        break;
    }
    }
    PolyMap M0 = M.compose(X0, Y0), M1 = M.compose(X1, Y1);

    LocalFrame L;
    L.style = style;
    L.A0 = linear_part(M0.F(), M0.G());
    L.A = linear_part(M1.F(), M1.G());
    if (det(L.A0).is_zero()) throw DomainError("Jacobian vanishes at p0");
    Mat2 inv = inverse(L.A0);
    auto normalize = [&](const PolyMap& Mi, BiPoly& F, BiPoly& G) {
        F = Mi.F() * inv[0][0] + Mi.G() * inv[1][0];
        G = Mi.F() * inv[0][1] + Mi.G() * inv[1][1];
    };
    normalize(M0, L.F0, L.G0);
    normalize(M1, L.F1, L.G1);
    Mat2 An = L.A * inv;
    L.a = An[0][0], L.b = An[1][0], L.c = An[0][1], L.d = An[1][1];
    L.alpha_F = L.F0.constant_term();
    L.alpha_G = L.G0.constant_term();
    const BiPoly* polys[4] = {&L.F0, &L.F1, &L.G0, &L.G1};
    for (int p = 0; p < 4; ++p) {
        L.quad[3 * p + 1] = polys[p]->coeff(2, 0);
        L.quad[3 * p + 2] = polys[p]->coeff(1, 1);
        L.quad[3 * p + 3] = polys[p]->coeff(0, 2);
    }
    return L;
}

Mat2 matrix_formula(const PolyMap& M, const Point& p0, const Point& p1) {
    const BiPoly Fx = M.F().dx(), Fy = M.F().dy(), Gx = M.G().dx(), Gy = M.G().dy();
    auto at = [](const BiPoly& P, const Point& p) { return P.eval(p.x, p.y); };
    Scalar J0 = at(M.jac(), p0);
    if (J0.is_zero()) throw DomainError("Jacobian vanishes at p0");
    Scalar r = J0.inverse();
    Mat2 out{};
    out[0][0] = (at(Fx, p1) * at(Gy, p0) - at(Gx, p1) * at(Fy, p0)) * r;
    out[0][1] = (at(Gx, p1) * at(Fx, p0) - at(Fx, p1) * at(Gx, p0)) * r;
    out[1][0] = (at(Fy, p1) * at(Gy, p0) - at(Gy, p1) * at(Fy, p0)) * r;
    out[1][1] = (at(Gy, p1) * at(Fx, p0) - at(Fy, p1) * at(Gx, p0)) * r;
    return out;
}

// --- (s, t) series ---

namespace {

using Trunc = std::vector<Scalar>;

Trunc mul(const Trunc& a, const Trunc& b, int order) {
    Trunc out(static_cast<std::size_t>(order) + 1);
    for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= order; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= order; ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

/// Sum over terms of degree >= 2 of c S^i T^j eps^(i+j-1).
Trunc nonlinear(const BiPoly& P, const Trunc& S, const Trunc& T, int order) {
    int dx = std::max(P.degree_x(), 0), dy = std::max(P.degree_y(), 0);
    std::vector<Trunc> sp{Trunc{Scalar(1)}}, tp{Trunc{Scalar(1)}};
    for (int k = 1; k <= dx; ++k) sp.push_back(mul(sp.back(), S, order));
    for (int k = 1; k <= dy; ++k) tp.push_back(mul(tp.back(), T, order));
    Trunc out(static_cast<std::size_t>(order) + 1);
    for (const auto& [e, c] : P.terms()) {
        int deg = e.degree();
        if (deg < 2) continue;
        int shift = deg - 1;
        if (shift > order) continue;
        Trunc prod = mul(sp[static_cast<std::size_t>(e.i)], tp[static_cast<std::size_t>(e.j)], order - shift);
        for (std::size_t k = 0; k < prod.size(); ++k) out[k + static_cast<std::size_t>(shift)] += c * prod[k];
    }
    return out;
}

/// [P(u eps, v eps) - P(0, 0)] / eps as a polynomial in eps.
Trunc rhs(const BiPoly& P, const Scalar& u, const Scalar& v, int order) {
    Trunc out(static_cast<std::size_t>(order) + 1);
    for (const auto& [e, c] : P.terms()) {
        int deg = e.degree();
        if (deg == 0 || deg - 1 > order) continue;
        out[static_cast<std::size_t>(deg - 1)] += c * u.pow(e.i) * v.pow(e.j);
    }
    return out;
}

Complex horner(const std::vector<Scalar>& c, double eps) {
    Complex acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * eps + it->to_complex();
    return acc;
}

} // namespace

Complex StSeries::s_at(double eps) const { return horner(s, eps); }
Complex StSeries::t_at(double eps) const { return horner(t, eps); }

StSeries solve_st_series(const LocalFrame& L, const Scalar& u, const Scalar& v, int order) {
    if (order < 0) throw PreconditionError("order must be nonnegative");
    if (L.F0.coeff(1, 0) != Scalar(1) || !L.F0.coeff(0, 1).is_zero() || !L.G0.coeff(1, 0).is_zero() ||
        L.G0.coeff(0, 1) != Scalar(1))
        throw PreconditionError("frame is not normalized");
    Trunc RF = rhs(L.F1, u, v, order), RG = rhs(L.G1, u, v, order);
    StSeries st;
    st.s.assign(static_cast<std::size_t>(order) + 1, Scalar());
    st.t.assign(static_cast<std::size_t>(order) + 1, Scalar());
    for (int k = 0; k <= order; ++k) {
        auto kk = static_cast<std::size_t>(k);
        Trunc NF = nonlinear(L.F0, st.s, st.t, k), NG = nonlinear(L.G0, st.s, st.t, k);
        st.s[kk] = RF[kk] - NF[kk];
        st.t[kk] = RG[kk] - NG[kk];
    }
    return st;
}

double st_residual(const LocalFrame& L, const StSeries& st, Complex u, Complex v, double eps) {
    Complex s = st.s_at(eps) * eps, t = st.t_at(eps) * eps;
    auto side = [&](const BiPoly& P0, const BiPoly& P1) {
        Complex lhs = P0.eval(s, t) - P0.constant_term().to_complex();
        Complex rhs = P1.eval(u * eps, v * eps) - P1.constant_term().to_complex();
        return std::abs(lhs - rhs);
    };
    return std::max(side(L.F0, L.F1), side(L.G0, L.G1));
}

void compute_alphas(LocalFrame& L) {
    auto s1 = [&](int u, int v) { return solve_st_series(L, Scalar(u), Scalar(v), 1).s[1]; };
    Scalar a1 = s1(1, 0), a3 = s1(0, 1);
    L.alphas = std::array<Scalar, 3>{a1, s1(1, 1) - a1 - a3, a3};
}

void compute_alpha_tilde(LocalFrame& L, double x1_abs, double kappa5) {
    if (!L.alphas) compute_alphas(L);
    const auto& al = *L.alphas;
    Scalar ell = Scalar::from_complex(x1_abs * std::log(kappa5));
    Scalar half = Scalar(Rational(1, 2));
    L.alpha_tilde = std::array<Scalar, 3>{L.a - L.b * ell, L.b * ell * ell * half + al[0] - al[1] * ell + al[2] * ell * ell,
                                          L.b};
}

// --- beta coefficient ---

void Kappas::validate() const {
    for (double v : k)
        if (!(v > 0) || !std::isfinite(v)) throw PreconditionError("kappas must be positive");
    if (!((*this)[3] < 1)) throw PreconditionError("kappa3 must be < 1");
    if (!((*this)[2] < 1)) throw PreconditionError("kappa2 must be < 1");
    if (!((*this)[2] < (*this)[4])) throw PreconditionError("kappa2 must be < kappa4");
}

namespace {

using LComplex = std::complex<long double>;

/// Richardson extrapolation to h -> 0 of values at h0, h0/2, ..., assuming integer powers of h.
long double richardson(std::vector<long double> T) {
    for (std::size_t level = 1; level < T.size(); ++level) {
        long double f = std::ldexp(1.0L, static_cast<int>(level));
        for (std::size_t i = T.size() - 1; i >= level; --i) T[i] = (f * T[i] - T[i - 1]) / (f - 1);
    }
    return T.back();
}

} // namespace

BetaResult beta_coefficient(const LocalFrame& L, const Kappas& kappa, double x0_abs, double x1_abs, Complex w) {
    kappa.validate();
    if (!L.alpha_tilde) throw PreconditionError("frame has no alpha_tilde coefficients");
    const double k1 = kappa[1], k2 = kappa[2];
    if (std::abs(x1_abs - (k1 * x0_abs + k2)) > 1e-9 * std::max(1.0, x1_abs))
        throw PreconditionError("|x1| = kappa1 |x0| + kappa2 does not hold");
    const auto& at = *L.alpha_tilde;
    Complex a1 = at[0].to_complex();
    double tangent = x1_abs / (k1 * x0_abs);
    if (std::abs(a1 - tangent) > 1e-9 * std::max(1.0, tangent))
        throw TangencyNotMet("alpha_tilde_1 = " + at[0].str() + " differs from |x1|/(kappa1 |x0|)");

    const LComplex A1(a1.real(), a1.imag());
    const LComplex A2(at[1].to_complex().real(), at[1].to_complex().imag());
    const LComplex A3(at[2].to_complex().real(), at[2].to_complex().imag());
    const LComplex W(w.real(), w.imag());
    const long double K1 = k1, K2 = k2, X0 = x0_abs, X1 = x1_abs;
    auto C1 = [&](LComplex u, long double eps) {
        LComplex s = A1 * u + (A2 * u * u + A3 * W) * eps;
        return K1 * X0 * std::abs(1.0L + s * eps) + K2 - X1 * std::abs(1.0L + u * eps);
    };
    auto coeff = [&](LComplex dir) {
        std::vector<long double> D;
        long double eps = 0.02L;
        for (int level = 0; level < 6; ++level, eps /= 2) {
            long double c0 = C1(0, eps);
            D.push_back((C1(dir, eps) - 2 * c0 + C1(-dir, eps)) / (2 * eps * eps));
        }
        return static_cast<double>(richardson(D));
    };
    BetaResult r;
    r.beta1 = coeff(LComplex(1, 0));
    r.beta2 = coeff(LComplex(0, 1));
    r.beta_tilde = r.beta1 + r.beta2;
    r.closed_form = k2 * (k2 + k1 * x0_abs) / (2 * k1 * x0_abs);
    return r;
}

// --- witness steps ---

WitnessPair make_pair(const PolyMap& M, const CPoint& p0, const CPoint& p1) {
    WitnessPair w{p0, p1, 0, 0};
    CPoint s0 = eval_map(M, p0), s1 = eval_map(M, p1);
    w.residual = std::hypot(std::abs(s0.x - s1.x), std::abs(s0.y - s1.y));
    w.separation = std::hypot(std::abs(p0.x - p1.x), std::abs(p0.y - p1.y));
    return w;
}

std::string to_string(Coord c) {
    switch (c) {
    case Coord::x0: return "x0";
    case Coord::y0: return "y0";
    case Coord::x1: return "x1";
    case Coord::y1: return "y1";
    }
    return "?";
}

Coord parse_coord(const std::string& text) {
    if (text == "x0") return Coord::x0;
    if (text == "y0") return Coord::y0;
    if (text == "x1") return Coord::x1;
    if (text == "y1") return Coord::y1;
    throw ParseError("unknown coordinate '" + text + "'");
}

Complex coordinate(const WitnessPair& w, Coord c) {
    switch (c) {
    case Coord::x0: return w.p0.x;
    case Coord::y0: return w.p0.y;
    case Coord::x1: return w.p1.x;
    case Coord::y1: return w.p1.y;
    }
    return {};
}

bool StepConstraint::has_objective() const {
    return increase_abs.has_value() || decrease_metric.has_value() || kappa_band.has_value();
}

int StepConstraint::sense() const { return decrease_metric ? -1 : 1; }

double StepConstraint::objective(const WitnessPair& w) const {
    if (increase_abs) return std::abs(coordinate(w, *increase_abs));
    if (decrease_metric)
        return std::norm(w.p0.x - decrease_metric->first) + std::norm(w.p1.x - decrease_metric->second);
    if (kappa_band) return std::pow((*kappa_band)[5], std::abs(w.p1.x)) * std::abs(w.p1.y);
    return 0;
}

std::string Ansatz::str() const {
    switch (kind) {
    case direct: return "direct";
    case scaled: return "scaled(" + std::to_string(k) + ")";
    case imaginary: return "imaginary(" + std::to_string(k) + ")";
    }
    return "?";
}

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Vec8 pack(const WitnessPair& w) {
    Vec8 r;
    Complex z[4] = {w.p0.x, w.p0.y, w.p1.x, w.p1.y};
    for (int k = 0; k < 4; ++k) r[2 * k] = z[k].real(), r[2 * k + 1] = z[k].imag();
    return r;
}

Complex slot(const Vec8& r, int k) { return {r[2 * k], r[2 * k + 1]}; }

struct RealFn {
    std::string name;
    std::function<double(const Vec8&)> f;
};

Vec8 gradient(const RealFn& g, const Vec8& r) {
    Vec8 out;
    for (int i = 0; i < 8; ++i) {
        double h = 1e-7 * std::max(1.0, std::abs(r[i]));
        Vec8 a = r, b = r;
        a[i] += h, b[i] -= h;
        out[i] = (g.f(a) - g.f(b)) / (2 * h);
    }
    return out;
}

/// Multiplies every complex slot by i.
Vec8 rotate(const Vec8& r) {
    Vec8 out;
    for (int k = 0; k < 4; ++k) out[2 * k] = -r[2 * k + 1], out[2 * k + 1] = r[2 * k];
    return out;
}

int slot_of(Coord c) { return static_cast<int>(c); }

class Stepper {
public:
    Stepper(const PolyMap& M, const StepConstraint& C, const WitnessPair& start)
        : M_(M), Fx_(M.F().dx()), Fy_(M.F().dy()), Gx_(M.G().dx()), Gy_(M.G().dy()) {
        for (const auto& [c, value] : C.keep_abs) {
            int k = slot_of(c);
            double target = value;
            pins_.push_back({"keep_abs(" + to_string(c) + ")",
                             [k, target](const Vec8& r) { return std::abs(slot(r, k)) - target; }});
        }
        if (C.kappa_band) {
            const Kappas K = *C.kappa_band;
            std::vector<RealFn> band = {
                {"x1_lower", [](const Vec8& r) { return std::abs(slot(r, 2)) - 1; }},
                {"band_mid",
                 [K](const Vec8& r) { return K[1] * std::abs(slot(r, 0)) + K[2] - std::abs(slot(r, 2)); }},
                {"band_upper",
                 [K](const Vec8& r) {
                     return K[3] * std::abs(slot(r, 2)) + K[4] - K[1] * std::abs(slot(r, 0)) - K[2];
                 }},
            };
            Vec8 r0 = pack(start);
            for (auto& b : band) {
                double m = b.f(r0);
                if (m < -1e-9) throw PreconditionError("pair violates the kappa band at " + b.name);
                (std::abs(m) <= 1e-9 ? pins_ : ineqs_).push_back(std::move(b));
            }
            ineqs_.push_back({"d_floor", [K](const Vec8& r) {
                                  return std::pow(K[5], std::abs(slot(r, 2))) * std::abs(slot(r, 3)) - K[6];
                              }});
        }
    }

    Vec matching(const Vec8& r) const {
        Complex p[4] = {slot(r, 0), slot(r, 1), slot(r, 2), slot(r, 3)};
        Complex dF = M_.F().eval(p[0], p[1]) - M_.F().eval(p[2], p[3]);
        Complex dG = M_.G().eval(p[0], p[1]) - M_.G().eval(p[2], p[3]);
        Vec e(4);
        e << dF.real(), dF.imag(), dG.real(), dG.imag();
        return e;
    }

    Mat matching_jacobian(const Vec8& r) const {
        Complex p[4] = {slot(r, 0), slot(r, 1), slot(r, 2), slot(r, 3)};
        Complex d[2][4] = {
            {Fx_.eval(p[0], p[1]), Fy_.eval(p[0], p[1]), -Fx_.eval(p[2], p[3]), -Fy_.eval(p[2], p[3])},
            {Gx_.eval(p[0], p[1]), Gy_.eval(p[0], p[1]), -Gx_.eval(p[2], p[3]), -Gy_.eval(p[2], p[3])},
        };
        Mat J = Mat::Zero(4, 8);
        for (int eq = 0; eq < 2; ++eq)
            for (int k = 0; k < 4; ++k) {
                Complex c = d[eq][k];
                J(2 * eq, 2 * k) = c.real(), J(2 * eq, 2 * k + 1) = -c.imag();
                J(2 * eq + 1, 2 * k) = c.imag(), J(2 * eq + 1, 2 * k + 1) = c.real();
            }
        return J;
    }

    Mat constraint_matrix(const Vec8& r) const {
        Mat J(4 + static_cast<Eigen::Index>(pins_.size()), 8);
        J.topRows(4) = matching_jacobian(r);
        for (std::size_t i = 0; i < pins_.size(); ++i) J.row(4 + static_cast<Eigen::Index>(i)) = gradient(pins_[i], r);
        return J;
    }

    Vec residual(const Vec8& r) const {
        Vec R(4 + static_cast<Eigen::Index>(pins_.size()));
        R.head(4) = matching(r);
        for (std::size_t i = 0; i < pins_.size(); ++i) R[4 + static_cast<Eigen::Index>(i)] = pins_[i].f(r);
        return R;
    }

    /// Minimum-norm Gauss-Newton back onto the matching set with pins held.
    std::optional<Vec8> correct(Vec8 r) const {
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 40; ++it) {
            Vec R = residual(r);
            double norm = R.lpNorm<Eigen::Infinity>();
            if (!std::isfinite(norm)) return std::nullopt;
            if (norm <= 1e-14 * (1 + r.lpNorm<Eigen::Infinity>())) return r;
            if (it > 3 && norm > 10 * prev) return std::nullopt;
            prev = norm;
            Vec delta = constraint_matrix(r).completeOrthogonalDecomposition().solve(-R);
            r += delta;
            if (delta.lpNorm<Eigen::Infinity>() <= 1e-16 * (1 + r.lpNorm<Eigen::Infinity>())) return r;
        }
        Vec R = residual(r);
        if (R.lpNorm<Eigen::Infinity>() <= 1e-11) return r;
        return std::nullopt;
    }

    /// Orthonormal basis of directions keeping matching and pins to first order.
    Mat tangent_basis(const Vec8& r) const {
        Mat C = constraint_matrix(r);
        Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 1.0);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > tol) ++rank;
        return svd.matrixV().rightCols(8 - rank);
    }

    const std::vector<RealFn>& pins() const { return pins_; }
    const std::vector<RealFn>& ineqs() const { return ineqs_; }

private:
    const PolyMap& M_;
    BiPoly Fx_, Fy_, Gx_, Gy_;
    std::vector<RealFn> pins_;
    std::vector<RealFn> ineqs_;
};

WitnessPair unpack(const PolyMap& M, const Vec8& r) {
    return make_pair(M, {slot(r, 0), slot(r, 1)}, {slot(r, 2), slot(r, 3)});
}

struct Candidate {
    Ansatz ansatz;
    Vec8 first;
    Vec8 second;
    int power = 1;
    Complex w;
};

} // namespace

StepResult witness_step(const PolyMap& M, const WitnessPair& pair, const StepConstraint& constraint,
                        const StepOptions& opt) {
    int objectives = int(constraint.increase_abs.has_value()) + int(constraint.decrease_metric.has_value()) +
                     int(constraint.kappa_band.has_value());
    if (objectives > 1) throw PreconditionError("a step takes at most one objective");
    if (constraint.kappa_band) constraint.kappa_band->validate();
    if (!(opt.eps > 0)) throw PreconditionError("eps must be positive");
    WitnessPair start = make_pair(M, pair.p0, pair.p1);
    if (start.residual > opt.residual_tol) throw PreconditionError("pair residual exceeds tolerance");

    StepResult out;
    out.pair = start;
    out.eps = opt.eps;
    out.objective_before = out.objective_after = constraint.objective(start);
    if (!constraint.has_objective()) return out;

    Stepper S(M, constraint, start);
    const Vec8 r0 = pack(start);
    const int sense = constraint.sense();
    const double f0 = out.objective_before;
    RealFn objective{"objective", [&](const Vec8& r) { return constraint.objective(unpack(M, r)); }};
    Vec8 g = gradient(objective, r0) * sense;
    Mat N = S.tangent_basis(r0);
    if (N.cols() == 0) throw NoStepFound("pins leave no free direction");

    std::vector<Candidate> ladder;
    Vec8 zero = Vec8::Zero();
    Vec gp = N * (N.transpose() * g);
    if (gp.norm() > 1e-9 * std::max(g.norm(), 1e-300) && g.norm() > 0)
        ladder.push_back({{Ansatz::direct, 0}, Vec8(gp / gp.norm()), zero, 1, {}});
    for (int kind = 0; kind < 2; ++kind)
        for (int k = 2; k <= 6; ++k)
            for (Eigen::Index j = 0; j < N.cols(); ++j)
                for (Eigen::Index l = 0; l < N.cols(); ++l) {
                    if (kind == 0 && l == j) continue;
                    Vec8 nj = N.col(j), nl = N.col(l);
                    if (kind == 1) nl = rotate(nl);
                    for (int sj : {1, -1})
                        for (int sl : {1, -1})
                            ladder.push_back({{kind == 0 ? Ansatz::scaled : Ansatz::imaginary, k},
                                              Vec8(sj * nj), Vec8(sl * nl), k,
                                              kind == 0 ? Complex(sl, 0) : Complex(0, sl)});
                }

    bool any_converged = false;
    for (const auto& cand : ladder) {
        double eps = opt.eps;
        for (int h = 0; h <= opt.halvings; ++h, eps /= 2) {
            Vec8 pred = r0 + eps * cand.first + std::pow(eps, cand.power) * cand.second;
            auto corrected = S.correct(pred);
            if (!corrected) continue;
            any_converged = true;
            const Vec8& r = *corrected;
            WitnessPair q = unpack(M, r);
            if (q.residual > opt.residual_tol || q.separation < opt.dedupe) break;
            bool ok = true;
            for (const auto& p : S.pins()) ok = ok && std::abs(p.f(r)) <= opt.pin_tol;
            for (const auto& c : S.ineqs()) ok = ok && c.f(r) >= -1e-12;
            Complex u = (q.p1.x - start.p1.x) / eps, v = (q.p1.y - start.p1.y) / eps;
            ok = ok && std::abs(u) <= opt.S_bound && std::abs(v) <= opt.S_bound;
            double f1 = constraint.objective(q);
            ok = ok && sense * (f1 - f0) > 1e-14 * std::max(1.0, std::abs(f0));
            if (!ok) break;
            out.pair = q;
            out.eps = eps;
            out.ansatz = cand.ansatz;
            out.w = cand.w;
            out.u = u, out.v = v;
            out.s = (q.p0.x - start.p0.x) / eps, out.t = (q.p0.y - start.p0.y) / eps;
            out.objective_after = f1;
            for (const auto& p : S.pins()) out.margins.emplace_back(p.name, p.f(r));
            for (const auto& c : S.ineqs()) out.margins.emplace_back(c.name, c.f(r));
            out.margins.emplace_back("objective", sense * (f1 - f0));
            return out;
        }
    }
    if (!any_converged) throw NewtonDivergence("Newton correction diverged for every ansatz");
    throw NoStepFound("no ansatz produced a feasible improving step");
}

} // namespace keller
