#include <doctest.h>

#include "keller/errors.hpp"
#include "keller/witness.hpp"

#include <algorithm>
#include <cmath>

using namespace keller;

namespace {

const BiPoly x = BiPoly::x();
const BiPoly y = BiPoly::y();

const PolyMap& quad() {
    static const PolyMap M(x.pow(2), y + x);
    return M;
}

const Kappas kBand{{1, 0.5, 0.5, 1, 2, 1}};

// Fresh evaluation of sigma at both points.
double fresh_residual(const PolyMap& M, const WitnessPair& w) {
    CPoint a = eval_map(M, w.p0), b = eval_map(M, w.p1);
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

} // namespace

TEST_CASE("witness recovery on the quadratic family") {
    auto ws = find_witnesses(quad(), 1, -1);
    CHECK(ws.size() >= 5);
    for (const auto& w : ws) {
        CHECK(std::abs(w.p1.y - w.p0.y - 2.0) <= 1e-10);
        CHECK(w.residual <= 1e-10);
        CHECK(fresh_residual(quad(), w) <= 1e-10);
        CHECK(w.separation >= 1e-8);
        CHECK(w.p0.x == Complex(1));
        CHECK(w.p1.x == Complex(-1));
    }

    SUBCASE("deterministic") {
        auto again = find_witnesses(quad(), 1, -1);
        REQUIRE(again.size() == ws.size());
        for (std::size_t k = 0; k < ws.size(); ++k) CHECK(again[k].p0.y == ws[k].p0.y);
    }

    SUBCASE("no duplicates") {
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = i + 1; j < ws.size(); ++j) CHECK(std::abs(ws[i].p0.y - ws[j].p0.y) > 1e-8);
    }
}

TEST_CASE("empty slices") {
    CHECK(find_witnesses(PolyMap(x, y), 1, 2).empty());
    CHECK(find_witnesses(quad(), 1, 1).empty());
    CHECK(find_witnesses(PolyMap(x + (x + y).pow(2), x + y), Complex(0.5, 1), -2).empty());
}

TEST_CASE("metrics") {
    auto w = make_pair(quad(), {3, 4}, {1, 2});
    MetricSpec h;
    CHECK(metric(w, h) == 4);

    MetricSpec sd;
    sd.kind = MetricKind::script_d;
    CHECK(metric(w, sd) == doctest::Approx(10));

    MetricSpec d;
    d.kind = MetricKind::d;
    d.kappas = kBand;
    auto v = make_pair(quad(), {1, 0}, {1, 3});
    CHECK(metric(v, d) == doctest::Approx(6));

    MetricSpec bad;
    bad.kind = MetricKind::d;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    CHECK(parse_metric(to_string(MetricKind::script_d)) == MetricKind::script_d);
    CHECK_THROWS_AS(parse_metric("q"), ParseError);
}

TEST_CASE("continuation decreases the distance to xi") {
    MetricSpec spec;
    spec.kind = MetricKind::script_d;
    auto start = make_pair(quad(), {1, 0}, {-1, 2});
    auto T = continue_witness(quad(), start, objective_constraint(spec), 10);
    REQUIRE(T.pairs.size() >= 2);
    CHECK(T.monotone);
    for (std::size_t k = 1; k < T.values.size(); ++k) {
        CHECK(T.values[k] < T.values[k - 1]);
        CHECK(T.values[k] == doctest::Approx(metric(T.pairs[k], spec)));
        CHECK(T.pairs[k].residual <= 1e-10);
    }
}

TEST_CASE("continuation increases d") {
    MetricSpec spec;
    spec.kind = MetricKind::d;
    spec.kappas = kBand;
    auto start = make_pair(quad(), {1, 0}, {-1, 2});
    auto T = continue_witness(quad(), start, objective_constraint(spec), 10);
    REQUIRE(T.pairs.size() >= 2);
    CHECK(T.monotone);
    for (std::size_t k = 1; k < T.values.size(); ++k) CHECK(T.values[k] > T.values[k - 1]);
}

TEST_CASE("zero steps") {
    auto start = make_pair(quad(), {1, 0}, {-1, 2});
    StepConstraint c;
    c.increase_abs = Coord::y1;
    auto T = continue_witness(quad(), start, c, 0);
    REQUIRE(T.pairs.size() == 1);
    CHECK(T.pairs[0].p1.y == start.p1.y);
    CHECK_FALSE(T.stall);
}

TEST_CASE("stall is recorded, not thrown") {
    auto start = make_pair(quad(), {1, 0}, {-1, 2});
    StepConstraint c;
    c.keep_abs = {{Coord::y1, 2.0}};
    c.increase_abs = Coord::y1;
    Trajectory T;
    CHECK_NOTHROW(T = continue_witness(quad(), start, c, 3));
    CHECK(T.stall);
    CHECK(T.pairs.size() == 1);
}

TEST_CASE("atlas") {
    auto A = atlas(quad(), {1}, {1});
    REQUIRE(A.cells.size() == 1);
    const auto& cell = A.cells[0];
    REQUIRE_FALSE(cell.samples.empty());
    double best = 0;
    for (const auto& w : cell.samples) {
        CHECK(std::abs(std::abs(w.p0.x) - 1) <= 1e-8);
        CHECK(std::abs(std::abs(w.p1.x) - 1) <= 1e-8);
        CHECK(w.residual <= 1e-10);
        best = std::max(best, std::abs(w.p1.y));
    }
    REQUIRE(cell.gamma_est);
    CHECK(*cell.gamma_est == best);

    auto empty = atlas(PolyMap(x, y), {1, 2}, {1});
    for (const auto& c : empty.cells) {
        CHECK(c.samples.empty());
        CHECK_FALSE(c.gamma_est);
    }

    auto grid = atlas(quad(), {1}, {1, 2});
    CHECK(grid.cells.size() == 2);
    CHECK(grid.comparisons.size() <= 1);
}

TEST_CASE("tau gap") {
    const double h = 1e6;
    auto ok = make_pair(quad(), {h, -h + 100}, {5, 5});
    auto v = tau_gap_check(ok, 2, 0.1, 10);
    CHECK(v.h == h);
    CHECK(v.threshold == doctest::Approx(1000));
    CHECK(v.status == TauGapVerdict::holds);
    CHECK(v.violations.empty());

    CHECK(tau_gap_check(ok, 2, 0.1, 2 * h).status == TauGapVerdict::not_applicable);

    auto bad = make_pair(quad(), {h, -h + 100}, {1e5, 1e5});
    auto f = tau_gap_check(bad, 2, 0.1, 10);
    CHECK(f.status == TauGapVerdict::fails);
    REQUIRE(f.violations.size() == 1);
    CHECK(f.violations[0] == "p1");
}
