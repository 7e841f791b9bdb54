// One PASS/FAIL line per acceptance criterion, with the measured numbers.

#include "keller/errors.hpp"
#include "keller/majorant.hpp"
#include "keller/normalize.hpp"
#include "keller/perturb.hpp"
#include "keller/reversion.hpp"
#include "keller/transform.hpp"
#include "keller/witness.hpp"
#include "keller/yseries.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace keller;

namespace {

const BiPoly X = BiPoly::x();
const BiPoly Y = BiPoly::y();

struct Outcome {
    bool ok = false;
    std::string detail;
};

Rational q(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
        o.ok = false;
        o.detail += "; over the " + fmt(budget_s) + " s budget";
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS " : "FAIL ") << std::setw(2) << id << "  " << name << "  [" << o.detail << "] ("
              << fmt(secs) << " s)" << std::endl;
}

// z = (w - sum_{i>=2} f_i z^i) / f_1 iterated to a fixed point, truncated at N.
std::vector<Rational> fixed_point_inverse(const std::vector<Rational>& f, int N) {
    const auto n = static_cast<std::size_t>(N) + 1;
    std::vector<Rational> z(n, Rational(0));
    for (int it = 0; it <= N; ++it) {
        std::vector<Rational> next(n, Rational(0)), zp = z;
        next[1] = 1;
        for (std::size_t i = 2; i < f.size(); ++i) {
            std::vector<Rational> m(n, Rational(0));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; a + b < n; ++b) m[a + b] += zp[a] * z[b];
            zp = m;
            for (std::size_t k = 0; k < n; ++k) next[k] -= f[i] * zp[k];
        }
        for (auto& v : next) v /= f[1];
        z = next;
    }
    return z;
}

Outcome c1() {
    auto r = formal_inverse(Laurent<Rational>::exact(1, {1, 1}), 6);
    auto oracle = fixed_point_inverse({0, 1, 1}, 6);
    const long want[] = {1, -1, 2, -5, 14, -42};
    for (int i = 1; i <= 6; ++i) {
        auto k = static_cast<std::size_t>(i);
        if (r.coeffs[k] != want[i - 1] || oracle[k] != want[i - 1]) return {false, "mismatch at order " + std::to_string(i)};
    }
    return {true, "1 -1 2 -5 14 -42, oracle agrees"};
}

Majorant random_majorant(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(1, max_deg), num(0, 12), lead(1, 8);
    std::vector<Rational> c{q(lead(rng), 4)};
    int d = deg(rng);
    for (int i = 2; i <= d; ++i) c.push_back(q(num(rng), 4));
    return Majorant::exact(1, c);
}

Outcome c2() {
    std::mt19937 rng(2002);
    int negatives = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto r = majorant_inverse(random_majorant(rng, 6), 30);
        for (std::size_t i = 1; i < r.inverse.coeffs.size(); ++i)
            if (sgn(r.inverse.coeffs[i]) < 0) ++negatives;
        if (!r.nonnegative) ++negatives;
    }
    return {negatives == 0, "200 majorants, order 30, negative coefficients: " + std::to_string(negatives)};
}

Outcome c3() {
    std::mt19937 rng(3003);
    // unit Gaussian rationals: |z| = 1 exactly
    const std::vector<Scalar> units{Scalar(1), Scalar(-1), Scalar::i(), -Scalar::i(), Scalar(q(3, 5), q(4, 5)),
                                    Scalar(q(-5, 13), q(12, 13))};
    std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
    std::uniform_int_distribution<int> shrink(0, 3);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Majorant Phi = random_majorant(rng, 6);
        const auto& a = Phi.series().coeffs();
        std::vector<Scalar> f;
        for (std::size_t i = 0; i < a.size(); ++i) {
            Rational mod = i == 0 ? a[0] : a[i] * q(shrink(rng), 3);
            f.push_back(units[pick(rng)] * Scalar(mod));
        }
        CSeries F = CSeries::exact(1, f);
        auto t = dominance_transfer_check(F, Phi, 20);
        if (!t.holds) ++violations;
        for (int i = 1; i <= 20; ++i) {
            auto k = static_cast<std::size_t>(i);
            const Rational& bh = t.majorant_inverse.coeffs[k];
            if (t.inverse.coeffs[k].norm() > bh * bh) ++violations;
        }
    }
    return {violations == 0, "100 pairs, order 20, violations: " + std::to_string(violations)};
}

Scalar at(const YSeries& S, const Scalar& a, const Scalar& b) { return std::get<Scalar>(compose_series(S, a, b)); }

bool identities_hold(const NormalizedPair& N, const Point& p0, const Point& p1) {
    auto T = build_transform(N, p0, p1, TransformCase::case1);
    const Scalar s = T.beta0.pow(-T.m);
    bool fq0 = at(T.Fhat, 0, 1) == s * N.map.F().eval(p0.x, p0.y);
    bool fq1 = at(T.Fhat, 1, 1) == s * N.map.F().eval(p1.x, p1.y);
    YSeries J = derivative_x(T.Fhat) * T.Ghat.derivative() - T.Fhat.derivative() * derivative_x(T.Ghat);
    bool jac = J.agrees_with(YSeries::monomial(RatFunc(T.u1), -2));
    return fq0 && fq1 && jac && T.identities.all();
}

Outcome c4() {
    auto E2 = normalize_keller(PolyMap(X + (X + Y).pow(2), X + Y));
    if (!identities_hold(E2, {Scalar::parse("10"), Scalar::parse("-9.9")}, {Scalar::parse("9.9"), Scalar::parse("-9.7")}))
        return {false, "E2 identities fail"};

    std::mt19937 rng(4004);
    std::uniform_int_distribution<int> c(-4, 4), deg(2, 3);
    int good = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // F = x + q(x + y) with q monic of degree m, G = x + y + r(F): J = 1 and F_L = (x + y)^m
        const int m = deg(rng);
        BiPoly qv = (X + Y).pow(static_cast<unsigned>(m));
        for (int k = 2; k < m; ++k) qv += Scalar(q(c(rng), 2)) * (X + Y).pow(static_cast<unsigned>(k));
        BiPoly F = X + qv;
        BiPoly G = X + Y + Scalar(q(c(rng), 3)) * F + Scalar(q(c(rng), 5)) * F.pow(2);
        auto N = normalize_keller(PolyMap(F, G));
        if (!N.certificate.all() || N.m != m) return {false, "random pair " + std::to_string(trial) + " not normalized"};
        Point p0{Scalar(q(c(rng) + 7, 2)), Scalar(q(c(rng), 3))};
        Point p1{Scalar(q(c(rng), 2)), p0.y + Scalar(q(1 + std::abs(c(rng)), 7))};
        if ((p0.x + p0.y).is_zero()) p0.x += Scalar(1);
        if (identities_hold(N, p0, p1)) ++good;
    }
    return {good == 20, "E2 plus " + std::to_string(good) + "/20 random pairs exact"};
}

Outcome c5() {
    auto N = normalize_keller(PolyMap(X + (X + Y).pow(2), X + Y));
    std::ostringstream d;
    bool ok = true;
    for (auto tag : {TransformCase::case1, TransformCase::case2}) {
        std::vector<double> err;
        for (long s : {1000L, 10000L}) {
            Point p0{Scalar(s), Scalar(0)};
            Point p1 = tag == TransformCase::case1 ? Point{Scalar(s - 1), Scalar(2)} : Point{Scalar(s + 1), Scalar(0)};
            auto T = build_transform(N, p0, p1, tag);
            auto I = integral_check(T, 64);
            ok = ok && I.abs_error <= 10 * T.eps;
            err.push_back(I.abs_error);
        }
        double ratio = err[0] / err[1];
        ok = ok && ratio >= 5 && ratio <= 20;
        d << to_string(tag) << " err " << fmt(err[0]) << ", " << fmt(err[1]) << " ratio " << fmt(ratio) << "; ";
    }
    return {ok, d.str()};
}

Outcome c6() {
    auto N = normalize_keller(PolyMap(X + (X + Y).pow(2), X + Y));
    std::vector<double> C;
    double Cp = 0;
    bool bounded = true;
    std::ostringstream d;
    for (long s : {1000L, 10000L}) {
        auto T = build_transform(N, {Scalar(s), Scalar(0)}, {Scalar(s - 1), Scalar(2)}, TransformCase::case1);
        double cmax = 0, dev = 0;
        for (int k = 0; k <= 10; ++k) {
            auto r = solve_Y0(T, k / 10.0);
            cmax = std::max(cmax, r.C);
            dev = std::max(dev, r.deviation);
            Cp = std::max(Cp, r.C_prime);
        }
        bounded = bounded && dev <= cmax * T.eps * (1 + 1e-12);
        C.push_back(cmax);
        d << "beta0 " << s << ": eps " << fmt(T.eps) << " max dev " << fmt(dev) << " C " << fmt(cmax) << "; ";
    }
    double ratio = C[0] / C[1];
    d << "C ratio " << fmt(ratio) << " (needs [1/3, 3]), C' " << fmt(Cp);
    return {bounded && Cp <= 1 && ratio >= 1.0 / 3 && ratio <= 3, d.str()};
}

Outcome c7() {
    PolyMap M(X.pow(2), Y + X);
    auto ws = find_witnesses(M, 1, -1);
    bool ok = ws.size() >= 5;
    double worst = 0, res = 0;
    for (const auto& w : ws) {
        worst = std::max(worst, std::abs(w.p1.y - w.p0.y - 2.0));
        res = std::max(res, w.residual);
    }
    ok = ok && worst <= 1e-10 && res <= 1e-10;
    return {ok, std::to_string(ws.size()) + " pairs, family error " + fmt(worst) + ", residual " + fmt(res)};
}

Outcome c8() {
    PolyMap M(X.pow(2), Y + X);
    StepConstraint c;
    c.keep_abs = {{Coord::x0, 1.0}};
    c.increase_abs = Coord::y1;
    auto start = make_pair(M, {1, 0}, {-1, 2});
    auto r = witness_step(M, start, c);
    bool step_ok = std::abs(std::abs(r.pair.p0.x) - 1) <= 1e-8 && std::abs(r.pair.p1.y) > 2 && r.pair.residual <= 1e-10;
    auto T = continue_witness(M, start, c, 20);
    bool mono = T.pairs.size() == 21;
    for (std::size_t k = 1; k < T.pairs.size(); ++k)
        mono = mono && std::abs(T.pairs[k].p1.y) > std::abs(T.pairs[k - 1].p1.y);
    std::ostringstream d;
    d << "step |y1| " << fmt(std::abs(r.pair.p1.y)) << " residual " << fmt(r.pair.residual) << "; " << T.pairs.size() - 1
      << " steps, final |y1| " << fmt(std::abs(T.pairs.back().p1.y)) << (T.stall ? ", stalled: " + *T.stall : "");
    return {step_ok && mono, d.str()};
}

Outcome c9() {
    // (kappa1, kappa2, |x0|); |x1| and the tangency value follow
    std::vector<std::array<Rational, 3>> frames{{1, q(1, 2), 1}};
    std::mt19937 rng(9009);
    std::uniform_int_distribution<int> a(1, 9);
    while (frames.size() < 10) frames.push_back({q(a(rng), 3), q(a(rng), 10), q(a(rng), 4)});
    double worst = 0, drift = 0;
    for (const auto& [k1, k2, x0] : frames) {
        Rational x1 = k1 * x0 + k2;
        Rational t = x1 / (k1 * x0);
        Kappas K{{k1.get_d(), k2.get_d(), 0.5, 1, 2, 1}};
        LocalFrame L;
        L.alpha_tilde = std::array<Scalar, 3>{Scalar(t), Scalar(0), Scalar(0)};
        auto b = beta_coefficient(L, K, x0.get_d(), x1.get_d());
        double closed = Rational(k2 * (k2 + k1 * x0) / (2 * k1 * x0)).get_d();
        worst = std::max(worst, std::abs(b.beta1 + b.beta2 - closed) / closed);
        LocalFrame P = L;
        P.alpha_tilde = std::array<Scalar, 3>{Scalar(t), Scalar(q(7, 3), q(-2, 5)), Scalar(0)};
        drift = std::max(drift, std::abs(beta_coefficient(P, K, x0.get_d(), x1.get_d()).beta_tilde - b.beta_tilde));
    }
    LocalFrame L;
    L.alpha_tilde = std::array<Scalar, 3>{Scalar(q(3, 2)), Scalar(0), Scalar(0)};
    double first = beta_coefficient(L, Kappas{{1, 0.5, 0.5, 1, 2, 1}}, 1, 1.5).beta_tilde;
    bool ok = worst <= 1e-6 && drift <= 1e-8 && std::abs(first - 0.375) <= 0.375e-6;
    return {ok, "10 frames, max rel error " + fmt(worst) + ", alpha2 drift " + fmt(drift) + ", (1,1/2,1) gives " +
                    std::to_string(first)};
}

Outcome c10() {
    const std::vector<Rational> neg{q(-1, 3), q(-1, 2), Rational(-1), q(-5, 2)};
    int bad = 0;
    for (const auto& a : neg)
        for (const auto& b : neg)
            if (!binomial_negative_family(a, b, 12)) ++bad;
    for (long k : {1, 2, 3})
        if (!binomial_integer_family(k, 12)) ++bad;
    for (const auto& k : {q(1, 2), q(1, 3)})
        if (!binomial_fractional_family(k, 12)) ++bad;
    return {bad == 0, "16 negative pairs, 3 integer and 2 fractional k, failures: " + std::to_string(bad)};
}

CSeries random_series(std::mt19937& rng, int alpha, int terms) {
    std::uniform_int_distribution<int> c(-5, 5), d(1, 4);
    std::vector<Scalar> v{Scalar(1)};
    for (int i = 1; i < terms; ++i) v.emplace_back(q(c(rng), d(rng)), q(c(rng), d(rng)));
    return CSeries::exact(alpha, v);
}

Outcome c11() {
    struct Law {
        int alpha;
        Rational b, b2;
    };
    const std::vector<Law> laws{{2, q(1, 2), Rational(-3)}, {2, q(-1, 2), Rational(2)}, {1, Rational(-2), q(-1, 2)},
                                {3, q(2, 3), q(3, 2)}};
    std::mt19937 rng(1111);
    const int N = 16;
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Law& l = laws[static_cast<std::size_t>(trial) % laws.size()];
        CSeries P = random_series(rng, l.alpha, 8);
        auto lhs = pow_rational(pow_rational(P, l.b, N), l.b2, N);
        auto rhs = pow_rational(P, l.b * l.b2, N);
        for (long e = lhs.alpha(); e < lhs.alpha() + N; ++e)
            if (lhs.coeff(e) != rhs.coeff(e)) {
                ++bad;
                break;
            }

        auto one = P * pow_rational(P, Rational(-1), N);
        for (long e = 0; e < N; ++e)
            if (one.coeff(e) != Scalar(e == 0 ? 1 : 0)) {
                ++bad;
                break;
            }

        CSeries B = random_series(rng, 1, 6);
        CSeries Q = random_series(rng, 2 + trial % 3, 6);
        auto b = rebase_coeff(Q, B, N);
        auto back = rebase_expand(b, Q.alpha(), B);
        for (long e = Q.alpha(); e < Q.alpha() + N; ++e)
            if (back.coeff(e) != Q.coeff(e)) {
                ++bad;
                break;
            }
    }
    return {bad == 0, "100 series, order 16, law violations: " + std::to_string(bad)};
}

Outcome c12() {
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const std::string& name, const PolyMap& M, std::optional<int> ell) {
        auto N = normalize_keller(M, ell);
        auto again = normalize_keller(N.map);
        bool fine = N.certificate.all() && N.map.jac() == BiPoly(1) && again.map.F() == N.map.F() &&
                    again.map.G() == N.map.G();
        ok = ok && fine;
        d << name << " m " << N.m << (fine ? " ok" : " FAILED") << "; ";
    };
    check("(x, y+x^2)", PolyMap(X, Y + X.pow(2)), std::nullopt);
    check("(x, y+x^3) l=3", PolyMap(X, Y + X.pow(3)), 3);
    check("(x, y+x^3)", PolyMap(X, Y + X.pow(3)), std::nullopt);
    return {ok, d.str()};
}

} // namespace

int main() {
    criterion(1, "reversion of z + z^2", 1, c1);
    criterion(2, "majorant reversion nonnegative", 30, c2);
    criterion(3, "dominance transfer", 60, c3);
    criterion(4, "transform identities", 120, c4);
    criterion(5, "integral identity", 120, c5);
    criterion(6, "Y0 deviation constant", 0, c6);
    criterion(7, "witness recovery", 10, c7);
    criterion(8, "constrained step", 0, c8);
    criterion(9, "beta tilde closed form", 0, c9);
    criterion(10, "binomial battery", 5, c10);
    criterion(11, "series engine laws", 60, c11);
    criterion(12, "normalization", 0, c12);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
