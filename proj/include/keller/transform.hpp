#pragma once

#include "keller/majorant.hpp"
#include "keller/normalize.hpp"
#include "keller/reversion.hpp"
#include "keller/upoly.hpp"
#include "keller/yseries.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace keller {

enum class TransformCase { case1, case2 };

std::string to_string(TransformCase c);
TransformCase parse_case(const std::string& text);

/// Certified lower bound on |p| over [0, 1], from subdivision and the
/// Lipschitz constant sum_k k |c_k|.
struct RootFreeCertificate {
    bool root_free = false;
    double delta = 0;
    int intervals = 0;
};

RootFreeCertificate certify_root_free(const std::vector<Complex>& coeffs, int max_intervals = 1 << 16);
RootFreeCertificate certify_root_free(const UPoly& p, int max_intervals = 1 << 16);

/// Index k of the m-th root of unity exp(2 pi i k / m) nearest to z.
int nearest_root_of_unity(Complex z, int m);

/// Candidate values for beta_2: 0, i, then unit-modulus rationals from the seed.
std::vector<Scalar> beta2_candidates(std::uint64_t seed, int extra = 16);

struct TransformOptions {
    std::uint64_t seed = 0;
    /// Case 2 only; defaults to 0 when y1 != 0 and 1 otherwise.
    std::optional<Scalar> beta3;
};

struct IdentityReport {
    bool jacobian = false;
    bool F_q0 = false;
    bool F_q1 = false;
    bool G_q0 = false;
    bool G_q1 = false;
    bool leading_term = false;
    bool all() const { return jacobian && F_q0 && F_q1 && G_q0 && G_q1 && leading_term; }
};

struct TransformData {
    TransformCase case_tag = TransformCase::case1;
    PolyMap map;
    Point p0, p1;
    int m = 0;
    int mbar = 0;
    Scalar beta0, beta1, beta2, beta3;
    /// Case 2: y1 - beta3.
    Scalar beta3_tilde;
    /// Case 2 stores the coefficient of x(1-x) in u2 here as well.
    Scalar beta2_bar;
    int beta2_attempt = 0;
    UPoly u1;
    /// Case 2 only.
    UPoly u2;
    int omega_index = 0;
    Complex omega{1, 0};
    YSeries Fhat;
    YSeries Ghat;
    /// u1 y^-2 or u2' y^-1.
    YSeries jac_hat;
    Scalar Ghat_scale;
    double h = 0;
    double eps = 0;
    double delta = 0;
    IdentityReport identities;
};

TransformData build_transform(const NormalizedPair& N, const Point& p0, const Point& p1, TransformCase tag,
                              const TransformOptions& opt = {});

struct NormalForm {
    /// fj[j-1] is f_j, j = 1..mbar.
    std::vector<RatFunc> fj;
    std::vector<double> grid;
    double S1_grid = 0;
    double lipschitz = 0;
    double S1 = 0;
};

NormalForm hat_normal_form(const TransformData& T, int grid_points = 201);

struct SeriesInP {
    YSeries P;
    ReversionResult<RatFunc> y_of_P;
    int mG = 0;
    std::vector<RatFunc> ci;
    bool round_trip = false;
    bool rebase_round_trip = false;
    /// Q = sum (dc_i/dx) P^i coefficient by coefficient.
    bool derivative_identity = false;
};

SeriesInP series_in_P(const TransformData& T, int N);

struct ChainVerdict {
    double a = 0;
    DominanceVerdict F_hat;
    DominanceVerdict P;
};

/// F^ <= u1^m y^-m (1 + S1 sum_{j<=mbar} y^j) and P <= |u1|^-1 y (1 - S1 sum y^j)^(-1/m) at each a.
std::vector<ChainVerdict> majorant_chain(const TransformData& T, const NormalForm& NF, const std::vector<Rational>& as,
                                         int N);

struct Y0Options {
    double tol = 1e-12;
    int max_iter = 50;
    /// Replace F^ by its leading term u1^m y^-m.
    bool leading_only = false;
};

struct Y0Result {
    Complex y;
    Complex u1;
    double residual = 0;
    int iterations = 0;
    double deviation = 0;
    double C = 0;
    /// (dF^/dy)^-1 at (a, Y0).
    Complex inv_dFy;
    double fprime_deviation = 0;
    double C_prime = 0;
};

Complex P0_value(const TransformData& T, bool leading_only = false);
Y0Result solve_Y0(const TransformData& T, double a, const Y0Options& opt = {});

struct IntegralResult {
    Complex value;
    Rational target;
    double abs_error = 0;
    double C = 0;
    int nodes = 0;
    /// |G^(1, Y0(1)) - G^(0, Y0(0)) - integral|; absent in leading-term mode.
    std::optional<double> endpoint_gap;
};

IntegralResult integral_check(const TransformData& T, int nodes = 64, const Y0Options& opt = {});

} // namespace keller
