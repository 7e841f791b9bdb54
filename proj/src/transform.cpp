#include "keller/transform.hpp"

#include "keller/errors.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

namespace keller {

std::string to_string(TransformCase c) { return c == TransformCase::case1 ? "case1" : "case2"; }

TransformCase parse_case(const std::string& text) {
    if (text == "case1" || text == "1") return TransformCase::case1;
    if (text == "case2" || text == "2") return TransformCase::case2;
    throw ParseError("unknown transform case '" + text + "'");
}

namespace {

Complex horner(const std::vector<Complex>& c, Complex x) {
    Complex acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// A Laurent polynomial in y with complex coefficients (x already fixed).
struct CLaurent {
    int alpha = 0;
    std::vector<Complex> c;

    Complex eval(Complex y) const {
        Complex acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
        return acc * std::pow(y, alpha);
    }
    Complex deriv(Complex y) const {
        Complex acc = 0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * y + c[k] * static_cast<double>(alpha + static_cast<int>(k));
        return acc * std::pow(y, alpha - 1);
    }
};

CLaurent at(const YSeries& S, Complex a) {
    CLaurent out;
    out.alpha = S.alpha();
    out.c.reserve(S.coeffs().size());
    for (const auto& f : S.coeffs()) out.c.push_back(f.eval(a));
    return out;
}

YSeries apply(const BiPoly& F, const YSeries& u, const YSeries& v) {
    std::vector<YSeries> up{YSeries::constant(RatFunc(1))};
    std::vector<YSeries> vp{YSeries::constant(RatFunc(1))};
    for (int k = 1; k <= F.degree_x(); ++k) up.push_back(up.back() * u);
    for (int k = 1; k <= F.degree_y(); ++k) vp.push_back(vp.back() * v);
    YSeries sum = YSeries::zero();
    for (const auto& [e, c] : F.terms())
        sum += (up[static_cast<std::size_t>(e.i)] * vp[static_cast<std::size_t>(e.j)]) * RatFunc(c);
    return sum;
}

Scalar eval_exact(const YSeries& S, const Scalar& x0, const Scalar& y0) {
    return std::get<Scalar>(compose_series(S, x0, y0));
}

std::vector<Complex> to_complex(const UPoly& p) {
    std::vector<Complex> out;
    for (const auto& c : p.coeffs()) out.push_back(c.to_complex());
    return out;
}

} // namespace

RootFreeCertificate certify_root_free(const std::vector<Complex>& coeffs, int max_intervals) {
    RootFreeCertificate cert;
    double L = 0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) L += static_cast<double>(k) * std::abs(coeffs[k]);
    for (int n = 16; n <= max_intervals; n *= 2) {
        const double half = 0.5 / n;
        double lowest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n && lowest > 0; ++k) {
            double mid = (2 * k + 1) * half;
            double value = std::abs(horner(coeffs, mid));
            lowest = std::min(lowest, value * (1 - 1e-12) - L * half);
        }
        cert.intervals = n;
        if (lowest > 0) {
            cert.root_free = true;
            cert.delta = lowest;
            return cert;
        }
    }
    return cert;
}

RootFreeCertificate certify_root_free(const UPoly& p, int max_intervals) {
    return certify_root_free(to_complex(p), max_intervals);
}

int nearest_root_of_unity(Complex z, int m) {
    if (m <= 0) throw DomainError("m must be positive");
    double turns = std::arg(z) / (2 * std::numbers::pi) * m;
    int k = static_cast<int>(std::lround(turns));
    return ((k % m) + m) % m;
}

std::vector<Scalar> beta2_candidates(std::uint64_t seed, int extra) {
    std::vector<Scalar> out{Scalar(0), Scalar::i()};
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<long> pick(1, 255);
    for (int k = 0; k < extra; ++k) {
        Rational t(pick(gen), 64);
        t.canonicalize();
        Rational d = 1 + t * t;
        out.emplace_back((1 - t * t) / d, 2 * t / d);
    }
    return out;
}

TransformData build_transform(const NormalizedPair& N, const Point& p0, const Point& p1, TransformCase tag,
                              const TransformOptions& opt) {
    TransformData T;
    T.case_tag = tag;
    T.map = N.map;
    T.p0 = p0;
    T.p1 = p1;
    T.m = N.m;
    T.mbar = tag == TransformCase::case1 ? T.m : 2 * T.m;
    const int m = T.m;

    T.beta0 = p0.x + p0.y;
    if (T.beta0.is_zero()) throw DegeneratePair("x0 + y0 = 0");
    T.beta1 = (p1.x + p1.y) / T.beta0 - Scalar(1);

    if (tag == TransformCase::case1) {
        if (p0.y == p1.y) throw DegeneratePair("case 1 needs y0 != y1");
        T.beta3 = p1.y - p0.y;
    } else {
        if (!(p0.y == p1.y)) throw DegeneratePair("case 2 needs y0 == y1");
        if (T.beta1.is_zero()) throw DegeneratePair("case 2 needs x0 + y0 != x1 + y1");
        T.beta3 = opt.beta3 ? *opt.beta3 : (p1.y.is_zero() ? Scalar(1) : Scalar(0));
        T.beta3_tilde = p1.y - T.beta3;
        if (T.beta3_tilde.is_zero()) throw DegeneratePair("y1 - beta3 vanishes");
    }

    T.omega_index = nearest_root_of_unity((Scalar(1) + T.beta1).to_complex(), m);
    T.omega = std::polar(1.0, 2 * std::numbers::pi * T.omega_index / m);

    const auto candidates = beta2_candidates(opt.seed);
    bool found = false;
    for (std::size_t k = 0; k < candidates.size() && !found; ++k) {
        const Scalar& b2 = candidates[k];
        UPoly u1(std::vector<Scalar>{Scalar(1), T.beta1 + b2, -b2});
        auto c1 = certify_root_free(u1);
        if (!c1.root_free) continue;
        if (tag == TransformCase::case1) {
            std::vector<Complex> u0{1.0, T.omega - 1.0 + b2.to_complex(), -b2.to_complex()};
            if (!certify_root_free(u0).root_free) continue;
        }
        T.beta2 = b2;
        T.beta2_attempt = static_cast<int>(k);
        T.u1 = u1;
        T.delta = c1.delta;
        if (tag == TransformCase::case2) {
            T.beta2_bar = b2 / T.beta1;
            T.u2 = UPoly(std::vector<Scalar>{Scalar(0), Scalar(1) + T.beta2_bar, -T.beta2_bar});
        }
        found = true;
    }
    if (!found) throw NoBeta2("no candidate makes u1 root-free on [0, 1]");

    const RatFunc u1f(T.u1);
    YSeries v = tag == TransformCase::case1
                    ? YSeries::constant(RatFunc(UPoly(std::vector<Scalar>{p0.y, T.beta3})))
                    : YSeries::exact(0, {RatFunc(T.beta3), RatFunc(T.beta3_tilde)});
    YSeries u = YSeries::monomial(u1f * RatFunc(T.beta0), -1) - v;

    T.Fhat = apply(N.map.F(), u, v) * RatFunc(T.beta0.pow(-m));
    T.Ghat_scale = tag == TransformCase::case1 ? T.beta0.pow(m - 1) / T.beta3
                                               : T.beta0.pow(m - 1) / (T.beta3_tilde * T.beta1);
    T.Ghat = apply(N.map.G(), u, v) * RatFunc(T.Ghat_scale);
    T.jac_hat = tag == TransformCase::case1 ? YSeries::monomial(u1f, -2)
                                            : YSeries::monomial(RatFunc(T.u2.derivative()), -1);

    double h = 0;
    for (const auto& s : {p0.x, p0.y, p1.x, p1.y}) h = std::max(h, s.abs());
    T.h = h;
    T.eps = std::pow(h, static_cast<double>(m - 1) / m) / T.beta0.abs();

    IdentityReport& id = T.identities;
    YSeries J = derivative_x(T.Fhat) * T.Ghat.derivative() - T.Fhat.derivative() * derivative_x(T.Ghat);
    id.jacobian = J == T.jac_hat;
    const Scalar fscale = T.beta0.pow(-m);
    const Point q0{Scalar(0), Scalar(1)}, q1{Scalar(1), Scalar(1)};
    id.F_q0 = eval_exact(T.Fhat, q0.x, q0.y) == fscale * N.map.F().eval(p0.x, p0.y);
    id.F_q1 = eval_exact(T.Fhat, q1.x, q1.y) == fscale * N.map.F().eval(p1.x, p1.y);
    id.G_q0 = eval_exact(T.Ghat, q0.x, q0.y) == T.Ghat_scale * N.map.G().eval(p0.x, p0.y);
    id.G_q1 = eval_exact(T.Ghat, q1.x, q1.y) == T.Ghat_scale * N.map.G().eval(p1.x, p1.y);
    id.leading_term = !T.Fhat.is_zero() && T.Fhat.alpha() == -m && T.Fhat.lead() == field_pow(u1f, m);
    return T;
}

NormalForm hat_normal_form(const TransformData& T, int grid_points) {
    if (grid_points < 2) throw DomainError("grid needs at least two points");
    NormalForm nf;
    const RatFunc inv_lead = field_pow(RatFunc(T.u1), -T.m);
    for (int j = 1; j <= T.mbar; ++j) nf.fj.push_back(T.Fhat.coeff(-T.m + j) * inv_lead);
    std::vector<RatFunc> dfj;
    for (const auto& f : nf.fj) dfj.push_back(f.derivative());
    for (int k = 0; k < grid_points; ++k) {
        double a = static_cast<double>(k) / (grid_points - 1);
        nf.grid.push_back(a);
        for (std::size_t j = 0; j < nf.fj.size(); ++j) {
            nf.S1_grid = std::max(nf.S1_grid, std::abs(nf.fj[j].eval(Complex(a))));
            nf.lipschitz = std::max(nf.lipschitz, std::abs(dfj[j].eval(Complex(a))));
        }
    }
    nf.S1 = nf.S1_grid + nf.lipschitz * 0.5 / (grid_points - 1);
    return nf;
}

SeriesInP series_in_P(const TransformData& T, int N) {
    SeriesInP out;
    const RatFunc u1f(T.u1);
    out.P = pow_rational(T.Fhat, Rational(-1, T.m), N, std::optional<RatFunc>(RatFunc(1) / u1f));
    out.y_of_P = formal_inverse(out.P, N);

    auto back = std::get<YSeries>(compose_series(out.P, YSeries::constant(RatFunc::x()), out.y_of_P.series(), N));
    out.round_trip = back.agrees_with(YSeries::monomial(RatFunc(1), 1)) && back.precision() > N;

    out.mG = -T.Ghat.alpha();
    out.ci = rebase_coeff(T.Ghat, out.P, N);
    out.rebase_round_trip = rebase_expand(out.ci, T.Ghat.alpha(), out.P).agrees_with(T.Ghat);

    // Q = -J(F^, G^) (dF^/dy)^-1 rebased in powers of P
    const long top = -out.mG + N;
    YSeries dF = T.Fhat.derivative();
    YSeries Q = -(T.jac_hat * dF.inverse(N + 2));
    long count = top - Q.alpha();
    std::vector<RatFunc> qc = count > 0 ? rebase_coeff(Q, out.P, static_cast<int>(count)) : std::vector<RatFunc>{};
    out.derivative_identity = true;
    for (long e = -out.mG; e < top; ++e) {
        RatFunc dc = out.ci[static_cast<std::size_t>(e + out.mG)].derivative();
        long k = e - Q.alpha();
        RatFunc q = (k >= 0 && k < static_cast<long>(qc.size())) ? qc[static_cast<std::size_t>(k)] : RatFunc(0);
        if (!(q == dc)) {
            out.derivative_identity = false;
            break;
        }
    }
    return out;
}

std::vector<ChainVerdict> majorant_chain(const TransformData& T, const NormalForm& NF, const std::vector<Rational>& as,
                                         int N) {
    std::vector<ChainVerdict> out;
    const Rational S1 = rational_upper(NF.S1);
    std::vector<Rational> minus{Rational(1)};
    for (int j = 1; j <= T.mbar; ++j) minus.push_back(-S1);
    const QSeries base = QSeries::exact(0, minus);
    const QSeries tailpow = pow_rational(base, Rational(-1, T.m), N);

    for (const auto& a : as) {
        ChainVerdict v;
        v.a = a.get_d();
        const Scalar ua = T.u1.eval(Scalar(a));
        const CSeries Fa = specialize(T.Fhat, Scalar(a));

        const Rational lead = abs_upper(ua.pow(T.m));
        std::vector<Rational> phi{lead};
        for (int j = 1; j <= T.mbar; ++j) phi.push_back(lead * S1);
        v.F_hat = dominates(Fa, QSeries::exact(-T.m, phi));

        const CSeries Pa = pow_rational(Fa, Rational(-1, T.m), N, std::optional<Scalar>(ua.inverse()));
        const Rational inv_abs = 1 / abs_lower(ua);
        v.P = dominates(Pa, (tailpow * inv_abs).shift(1));
        out.push_back(v);
    }
    return out;
}

Complex P0_value(const TransformData& T, bool leading_only) {
    if (leading_only) return 1.0;
    Complex target = at(T.Fhat, 0.0).eval(1.0);
    return principal_pow(target, -1.0 / T.m);
}

Y0Result solve_Y0(const TransformData& T, double a, const Y0Options& opt) {
    Y0Result r;
    const Complex ua = T.u1.eval(Complex(a));
    r.u1 = ua;
    const int m = T.m;
    CLaurent F = opt.leading_only ? CLaurent{-m, {std::pow(ua, m)}} : at(T.Fhat, a);
    const Complex target = opt.leading_only ? Complex(1.0) : at(T.Fhat, 0.0).eval(1.0);
    const Complex P0 = principal_pow(target, -1.0 / m);
    const Complex uam = std::pow(ua, m);

    auto P = [&](Complex y) { return y / ua * principal_pow(F.eval(y) * std::pow(y, m) / uam, -1.0 / m); };

    Complex y = ua;
    r.residual = std::abs(P(y) - P0);
    while (r.residual > opt.tol) {
        if (r.iterations >= opt.max_iter)
            throw NewtonDivergence("Y0 Newton did not converge at a = " + std::to_string(a));
        Complex g = F.eval(y) - target;
        Complex dg = F.deriv(y);
        y -= g / dg;
        ++r.iterations;
        r.residual = std::abs(P(y) - P0);
        if (!std::isfinite(r.residual)) throw NewtonDivergence("Y0 Newton produced a non-finite iterate");
    }
    r.y = y;
    r.deviation = std::abs(y - ua);
    r.C = r.deviation / T.eps;
    r.inv_dFy = 1.0 / F.deriv(y);
    r.fprime_deviation = std::abs(r.inv_dFy + ua / static_cast<double>(m));
    r.C_prime = r.fprime_deviation / T.eps;
    return r;
}

IntegralResult integral_check(const TransformData& T, int nodes, const Y0Options& opt) {
    if (nodes < 1) throw DomainError("quadrature needs at least one node");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)), &gsl_integration_glfixed_table_free);
    if (!table) throw DomainError("could not allocate the quadrature table");

    const double m = T.m;
    const UPoly du2 = T.u2.derivative();
    IntegralResult out;
    out.nodes = nodes;
    out.target = Rational(1, T.m);
    for (int i = 0; i < nodes; ++i) {
        double x = 0, w = 0;
        gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &x, &w, table.get());
        Y0Result y0 = solve_Y0(T, x, opt);
        const Complex ua = T.u1.eval(Complex(x));
        CLaurent F = opt.leading_only ? CLaurent{T.m, {}} : at(T.Fhat, x);
        Complex dF = opt.leading_only ? -m * std::pow(ua, T.m) * std::pow(y0.y, -T.m - 1) : F.deriv(y0.y);
        Complex q = -at(T.jac_hat, x).eval(y0.y) / dF;
        Complex expected = T.case_tag == TransformCase::case1 ? Complex(1.0 / m) : du2.eval(Complex(x)) / m;
        if (!std::isfinite(std::abs(q)) || std::abs(q - expected) > 0.5)
            throw QuadratureUnstable("integrand value " + std::to_string(std::abs(q)) + " at x = " + std::to_string(x));
        out.value += w * q;
    }
    out.abs_error = std::abs(out.value - 1.0 / m);
    out.C = out.abs_error / T.eps;
    if (!opt.leading_only) {
        Complex g1 = at(T.Ghat, 1.0).eval(solve_Y0(T, 1.0, opt).y);
        Complex g0 = at(T.Ghat, 0.0).eval(solve_Y0(T, 0.0, opt).y);
        out.endpoint_gap = std::abs(g1 - g0 - out.value);
    }
    return out;
}

} // namespace keller
