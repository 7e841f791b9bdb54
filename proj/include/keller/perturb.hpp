#pragma once

#include "keller/bipoly.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace keller {

/// Row-major 2x2 matrix; linear parts act on row vectors, (x, y) A = (F lin, G lin).
using Mat2 = std::array<std::array<Scalar, 2>, 2>;

Scalar det(const Mat2& m);
Mat2 inverse(const Mat2& m);
Mat2 operator*(const Mat2& a, const Mat2& b);

enum class FrameStyle { additive, mult_x, mult_xy, scaled_a0a1 };

std::string to_string(FrameStyle s);
FrameStyle parse_style(const std::string& text);

struct LocalFrame {
    FrameStyle style = FrameStyle::additive;
    /// Recentered and normalized by A0^-1.
    BiPoly F0, F1, G0, G1;
    /// Linear parts before normalization.
    Mat2 A0{}, A{};
    /// Entries of A A0^-1: F1 lin = a x + b y, G1 lin = c x + d y.
    Scalar a, b, c, d;
    /// quad[1..12] as in F0 = alpha_F + x + quad[1] x^2 + quad[2] xy + quad[3] y^2 + ...
    std::array<Scalar, 13> quad{};
    Scalar alpha_F, alpha_G;
    /// Coefficients of u^2, uv, v^2 in s at order eps.
    std::optional<std::array<Scalar, 3>> alphas;
    /// s = at1 u + (at2 u^2 + at3 w) eps after the substitution for v.
    std::optional<std::array<Scalar, 3>> alpha_tilde;
};

/// xi is used by the scaled style only: alpha_t = 1 if x_t = xi_t, else x_t - xi_t.
LocalFrame recenter_frame(const PolyMap& M, const Point& p0, const Point& p1, FrameStyle style,
                          const std::optional<Point>& xi = std::nullopt);

/// A A0^-1 computed from the partial derivatives at both points.
Mat2 matrix_formula(const PolyMap& M, const Point& p0, const Point& p1);

struct StSeries {
    /// s[k], t[k] are the eps^k coefficients.
    std::vector<Scalar> s, t;
    Complex s_at(double eps) const;
    Complex t_at(double eps) const;
};

/// Solves F0(s eps, t eps) = F1(u eps, v eps), same for G, order by order.
StSeries solve_st_series(const LocalFrame& L, const Scalar& u, const Scalar& v, int order);

/// max of |F0(s eps, t eps) - F1(u eps, v eps)| and the G analogue, constants dropped.
double st_residual(const LocalFrame& L, const StSeries& st, Complex u, Complex v, double eps);

/// Fills L.alphas from the order-1 coefficients of s.
void compute_alphas(LocalFrame& L);

/// Fills L.alpha_tilde for v = (-u + u^2 eps ell / 2) ell + w eps with ell = |x1| ln kappa5.
void compute_alpha_tilde(LocalFrame& L, double x1_abs, double kappa5);

struct Kappas {
    std::array<double, 6> k{};
    double operator[](int i) const { return k[static_cast<std::size_t>(i - 1)]; }
    /// kappa3 < 1, kappa2 < 1, kappa2 < kappa4, all positive; throws PreconditionError.
    void validate() const;
};

struct BetaResult {
    double beta_tilde = 0;
    double beta1 = 0;
    double beta2 = 0;
    double closed_form = 0;
};

/// Coefficients of u_re^2 eps^2 and u_im^2 eps^2 in kappa1|x0||1+s eps| + kappa2 - |x1||1+u eps|.
BetaResult beta_coefficient(const LocalFrame& L, const Kappas& kappa, double x0_abs, double x1_abs,
                            Complex w = {1, 0});

// --- witness steps ---

struct WitnessPair {
    CPoint p0, p1;
    double residual = 0;
    double separation = 0;
};

WitnessPair make_pair(const PolyMap& M, const CPoint& p0, const CPoint& p1);

enum class Coord { x0, y0, x1, y1 };

std::string to_string(Coord c);
Coord parse_coord(const std::string& text);
Complex coordinate(const WitnessPair& w, Coord c);

struct StepConstraint {
    std::vector<std::pair<Coord, double>> keep_abs;
    std::optional<Coord> increase_abs;
    /// Decrease |x0 - xi0|^2 + |x1 - xi1|^2.
    std::optional<std::pair<Complex, Complex>> decrease_metric;
    /// Increase kappa5^|x1| |y1| inside the kappa band.
    std::optional<Kappas> kappa_band;

    bool has_objective() const;
    double objective(const WitnessPair& w) const;
    /// +1 when the objective should increase, -1 when it should decrease.
    int sense() const;
};

struct StepOptions {
    double eps = 1e-3;
    int halvings = 10;
    double S_bound = 10;
    double residual_tol = 1e-10;
    double pin_tol = 1e-8;
    double dedupe = 1e-8;
};

struct Ansatz {
    enum Kind { direct, scaled, imaginary } kind = direct;
    int k = 0;
    std::string str() const;
};

struct StepResult {
    WitnessPair pair;
    /// Displacements divided by eps.
    Complex s, t, u, v;
    /// Coefficient of the higher-order component, zero for direct steps.
    Complex w;
    Ansatz ansatz;
    double eps = 0;
    double objective_before = 0;
    double objective_after = 0;
    std::vector<std::pair<std::string, double>> margins;
};

StepResult witness_step(const PolyMap& M, const WitnessPair& pair, const StepConstraint& constraint,
                        const StepOptions& opt = {});

} // namespace keller
