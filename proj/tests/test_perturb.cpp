#include <doctest.h>

#include "keller/errors.hpp"
#include "keller/perturb.hpp"

#include <cmath>
#include <random>

using namespace keller;

namespace {

const BiPoly x = BiPoly::x();
const BiPoly y = BiPoly::y();

Rational q(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

// Linear part straight from the partial derivatives: (x, y) A = (F lin, G lin).
Mat2 linear_part(const PolyMap& M, const Point& p) {
    return Mat2{{{M.F().dx().eval(p.x, p.y), M.G().dx().eval(p.x, p.y)},
                 {M.F().dy().eval(p.x, p.y), M.G().dy().eval(p.x, p.y)}}};
}

Mat2 inverse_by_hand(const Mat2& m) {
    Scalar d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return Mat2{{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

// Newton solve of F0(s e, t e) = F1(u e, v e), G0(s e, t e) = G1(u e, v e) for (s, t).
std::pair<Complex, Complex> newton_st(const LocalFrame& L, Complex u, Complex v, double e) {
    const Complex cF = L.F0.constant_term().to_complex() - L.F1.constant_term().to_complex();
    const Complex cG = L.G0.constant_term().to_complex() - L.G1.constant_term().to_complex();
    const Complex rF = L.F1.eval(u * e, v * e), rG = L.G1.eval(u * e, v * e);
    Complex s = 0, t = 0;
    for (int it = 0; it < 50; ++it) {
        Complex f = L.F0.eval(s * e, t * e) - cF - rF;
        Complex g = L.G0.eval(s * e, t * e) - cG - rG;
        Complex a = L.F0.dx().eval(s * e, t * e) * e, b = L.F0.dy().eval(s * e, t * e) * e;
        Complex c = L.G0.dx().eval(s * e, t * e) * e, d = L.G0.dy().eval(s * e, t * e) * e;
        Complex det = a * d - b * c;
        s -= (d * f - b * g) / det;
        t -= (a * g - c * f) / det;
    }
    return {s, t};
}

BiPoly random_poly(std::mt19937& rng, int deg) {
    std::uniform_int_distribution<int> c(-3, 3);
    BiPoly P;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) P.add_term(Scalar(q(c(rng), 1 + i)), i, j);
    return P;
}

} // namespace

TEST_CASE("additive frame of the identity") {
    auto L = recenter_frame(PolyMap(x, y), Point{1, 2}, Point{1, 2}, FrameStyle::additive);
    CHECK(L.F0 == BiPoly(1) + x);
    CHECK(L.G0 == BiPoly(2) + y);
    CHECK(L.A0 == Mat2{{{1, 0}, {0, 1}}});
}

TEST_CASE("additive frame on the quadratic family") {
    PolyMap M(x.pow(2), y + x);
    const Point p0{1, 0}, p1{-1, 2};
    auto L = recenter_frame(M, p0, p1, FrameStyle::additive);
    CHECK(L.A0 == linear_part(M, p0));
    CHECK(L.A == linear_part(M, p1));
    CHECK(L.a == Scalar(-1));
    CHECK(L.b == Scalar(0));
    CHECK(L.c == Scalar(2));
    CHECK(L.d == Scalar(1));
    CHECK(matrix_formula(M, p0, p1) == L.A * inverse_by_hand(L.A0));
    CHECK(det(L.A) == M.jac().eval(p1.x, p1.y));

    // after normalization the p0 side has identity linear part
    CHECK(L.F0.coeff(1, 0) == Scalar(1));
    CHECK(L.F0.coeff(0, 1) == Scalar(0));
    CHECK(L.G0.coeff(1, 0) == Scalar(0));
    CHECK(L.G0.coeff(0, 1) == Scalar(1));
}

TEST_CASE("matrix formula on random frames") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> c(-5, 5);
    int tested = 0;
    while (tested < 10) {
        PolyMap M(random_poly(rng, 3), random_poly(rng, 3));
        Point p0{Scalar(q(c(rng), 3)), Scalar(q(c(rng), 2))}, p1{Scalar(q(c(rng), 2)), Scalar(q(c(rng), 5))};
        if (M.jac().eval(p0.x, p0.y).is_zero()) continue;
        auto L = recenter_frame(M, p0, p1, FrameStyle::additive);
        Mat2 R = linear_part(M, p1) * inverse_by_hand(linear_part(M, p0));
        CHECK(matrix_formula(M, p0, p1) == R);
        CHECK(L.a == R[0][0]);
        CHECK(L.b == R[1][0]);
        CHECK(L.c == R[0][1]);
        CHECK(L.d == R[1][1]);
        ++tested;
    }
}

TEST_CASE("multiplicative styles") {
    PolyMap E2(x + (x + y).pow(2), x + y);
    const Point p0{Scalar(2), Scalar(3)}, p1{Scalar(-1), Scalar(5)};
    auto L = recenter_frame(E2, p0, p1, FrameStyle::mult_x);
    CHECK(det(L.A0) == p0.x);
    CHECK(det(L.A) == p1.x);

    auto Lxy = recenter_frame(E2, p0, p1, FrameStyle::mult_xy);
    CHECK(det(Lxy.A0) == p0.x);
    CHECK(det(Lxy.A) == p1.x * p1.y);

    CHECK_THROWS_AS(recenter_frame(E2, Point{0, 1}, p1, FrameStyle::mult_x), StylePrecondition);
    CHECK_THROWS_AS(recenter_frame(E2, p0, Point{1, 0}, FrameStyle::mult_xy), StylePrecondition);
    CHECK(parse_style(to_string(FrameStyle::scaled_a0a1)) == FrameStyle::scaled_a0a1);
    CHECK_THROWS_AS(parse_style("sideways"), ParseError);
}

TEST_CASE("st series") {
    PolyMap M(x.pow(2), y + x);
    auto L = recenter_frame(M, Point{1, 0}, Point{-1, 2}, FrameStyle::additive);

    auto zero = solve_st_series(L, Scalar(0), Scalar(0), 3);
    for (const auto& s : zero.s) CHECK(s.is_zero());
    for (const auto& t : zero.t) CHECK(t.is_zero());

    const Scalar u(1), v(Rational(1, 3));
    auto st = solve_st_series(L, u, v, 3);
    CHECK(st.s[0] == L.a * u + L.b * v);
    CHECK(st.t[0] == L.c * u + L.d * v);

    SUBCASE("alphas match a Newton solve") {
        PolyMap C(x + x * y + y.pow(3), y + x.pow(2) + x * y.pow(2));
        L = recenter_frame(C, Point{1, 0}, Point{Scalar(Rational(1, 2)), Scalar(Rational(1, 3))}, FrameStyle::additive);
        compute_alphas(L);
        REQUIRE(L.alphas);
        const auto& al = *L.alphas;
        const Complex quad = (al[0] * u * u + al[1] * u * v + al[2] * v * v).to_complex();
        const Complex s0 = (L.a * u + L.b * v).to_complex();
        std::vector<double> err;
        for (double e : {1e-2, 1e-3}) {
            auto [s, t] = newton_st(L, u.to_complex(), v.to_complex(), e);
            err.push_back(std::abs((s - s0) / e - quad));
        }
        CHECK(err[1] < err[0]);
        CHECK(err[0] / err[1] == doctest::Approx(10).epsilon(0.5));
    }
}

TEST_CASE("st series two-scale residual on a cubic map") {
    PolyMap M(x + x * y + y.pow(3), y + x.pow(2) + x * y.pow(2));
    const Point p0{Scalar(1), Scalar(0)}, p1{Scalar(Rational(1, 2)), Scalar(Rational(1, 3))};
    auto L = recenter_frame(M, p0, p1, FrameStyle::additive);
    const Complex u(0.7, 0.2), v(-0.4, 0.1);
    for (int order : {1, 2, 3}) {
        auto st = solve_st_series(L, Scalar::from_complex(u), Scalar::from_complex(v), order);
        double r1 = st_residual(L, st, u, v, 1e-2), r2 = st_residual(L, st, u, v, 1e-3);
        double decades = std::log10(r1 / r2);
        CHECK(decades > order + 1.5);
        CHECK(decades < order + 2.5);
    }
}

TEST_CASE("st series needs a normalized frame") {
    LocalFrame L;
    L.F0 = BiPoly(2) * x;
    L.G0 = y;
    L.F1 = x;
    L.G1 = y;
    CHECK_THROWS_AS(solve_st_series(L, Scalar(1), Scalar(0), 2), PreconditionError);
}

TEST_CASE("beta coefficient") {
    const Kappas K{{1, 0.5, 0.5, 1, 2, 1}};
    LocalFrame L;
    L.alpha_tilde = std::array<Scalar, 3>{Scalar(Rational(3, 2)), Scalar(0), Scalar(0)};
    auto b = beta_coefficient(L, K, 1, 1.5);
    CHECK(b.beta_tilde == doctest::Approx(0.375).epsilon(1e-6));
    CHECK(b.closed_form == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(b.beta1 + b.beta2 == doctest::Approx(b.beta_tilde).epsilon(1e-12));

    SUBCASE("independent of the quadratic term") {
        LocalFrame P = L;
        P.alpha_tilde = std::array<Scalar, 3>{Scalar(Rational(3, 2)), Scalar(Rational(1, 5), Rational(2, 7)), Scalar(1)};
        auto c = beta_coefficient(P, K, 1, 1.5);
        CHECK(std::abs(c.beta_tilde - b.beta_tilde) <= 1e-8);
    }

    SUBCASE("vanishes as kappa2 shrinks") {
        const double k2 = 1e-6;
        LocalFrame S;
        S.alpha_tilde = std::array<Scalar, 3>{Scalar(rational_from_double(1 + k2)), Scalar(0), Scalar(0)};
        auto c = beta_coefficient(S, Kappas{{1, k2, 0.5, 1, 2, 1}}, 1, 1 + k2);
        CHECK(std::abs(c.beta_tilde) < 1e-5);
        CHECK_THROWS_AS(beta_coefficient(S, Kappas{{1, 0, 0.5, 1, 2, 1}}, 1, 1), PreconditionError);
    }

    CHECK_THROWS_AS(beta_coefficient(L, K, 1, 2), PreconditionError);
    LocalFrame off = L;
    off.alpha_tilde = std::array<Scalar, 3>{Scalar(1), Scalar(0), Scalar(0)};
    CHECK_THROWS_AS(beta_coefficient(off, K, 1, 1.5), TangencyNotMet);
}

TEST_CASE("kappa validation") {
    CHECK_NOTHROW(Kappas{{1, 0.5, 0.5, 1, 2, 1}}.validate());
    CHECK_THROWS_AS(Kappas({{1, 0.5, 1.5, 1, 2, 1}}).validate(), PreconditionError);
    CHECK_THROWS_AS(Kappas({{1, 0.5, 0.5, 0.25, 2, 1}}).validate(), PreconditionError);
}

TEST_CASE("witness step on the quadratic family") {
    PolyMap M(x.pow(2), y + x);
    const auto start = make_pair(M, {1, 0}, {-1, 2});
    CHECK(start.residual < 1e-15);

    SUBCASE("keep |x0|, increase |y1|") {
        StepConstraint c;
        c.keep_abs = {{Coord::x0, 1.0}};
        c.increase_abs = Coord::y1;
        auto r = witness_step(M, start, c);
        CHECK(std::abs(std::abs(r.pair.p0.x) - 1) <= 1e-8);
        CHECK(std::abs(r.pair.p1.y) > 2);
        CHECK(r.pair.residual <= 1e-10);
        CHECK(std::abs(r.u) <= 10);
        CHECK(std::abs(r.v) <= 10);
        // the pairs ((a, b), (-a, b + 2a)) are the whole witness set
        CHECK(std::abs(r.pair.p1.x + r.pair.p0.x) < 1e-9);
        CHECK(std::abs(r.pair.p1.y - r.pair.p0.y - 2.0 * r.pair.p0.x) < 1e-9);
    }

    SUBCASE("empty constraint leaves the pair alone") {
        auto r = witness_step(M, start, StepConstraint{});
        CHECK(r.pair.p0.x == start.p0.x);
        CHECK(r.pair.p1.y == start.p1.y);
        CHECK(r.pair.residual == start.residual);
    }

    SUBCASE("decrease the distance to xi") {
        StepConstraint c;
        c.decrease_metric = std::make_pair(Complex(0), Complex(0));
        auto r = witness_step(M, start, c);
        CHECK(r.objective_after < r.objective_before);
    }

    SUBCASE("degenerate start falls back to a higher-order ansatz") {
        StepConstraint c;
        c.keep_abs = {{Coord::x0, 1.0}};
        c.increase_abs = Coord::y1;
        auto r = witness_step(M, make_pair(M, {1, -2}, {-1, 0}), c);
        CHECK(r.ansatz.kind != Ansatz::direct);
        CHECK(std::abs(r.pair.p1.y) > 0);
        CHECK(std::abs(std::abs(r.pair.p0.x) - 1) <= 1e-8);
    }

    SUBCASE("contradictory constraints") {
        StepConstraint c;
        c.keep_abs = {{Coord::y1, 2.0}};
        c.increase_abs = Coord::y1;
        CHECK_THROWS_AS(witness_step(M, start, c), NoStepFound);
    }
}

TEST_CASE("coordinates") {
    CHECK(parse_coord("y1") == Coord::y1);
    CHECK(to_string(Coord::x0) == "x0");
    CHECK_THROWS_AS(parse_coord("z9"), ParseError);
}
