#include "keller/witness.hpp"

#include "keller/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace keller {

namespace {

std::vector<Complex> start_grid(int n, double box) {
    std::vector<Complex> g;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double re = n == 1 ? 0 : -box + 2 * box * j / (n - 1);
            double im = n == 1 ? 0 : -box + 2 * box * k / (n - 1);
            g.emplace_back(re, im);
        }
    return g;
}

/// Multiplier coprime to n, used to pair y0 and y1 starts.
std::size_t stride(std::size_t n) {
    std::size_t k = n / 3 + 1;
    while (std::gcd(k, n) != 1) ++k;
    return k;
}

auto sort_key(const WitnessPair& w) {
    return std::make_tuple(w.p0.y.real(), w.p0.y.imag(), w.p1.y.real(), w.p1.y.imag(), w.p0.x.real(),
                           w.p0.x.imag(), w.p1.x.real(), w.p1.x.imag());
}

double distance(const WitnessPair& a, const WitnessPair& b) {
    return std::sqrt(std::norm(a.p0.x - b.p0.x) + std::norm(a.p0.y - b.p0.y) + std::norm(a.p1.x - b.p1.x) +
                     std::norm(a.p1.y - b.p1.y));
}

} // namespace

std::vector<WitnessPair> find_witnesses(const PolyMap& M, Complex xi0, Complex xi1, const SearchOptions& opt) {
    if (opt.grid < 1 || !(opt.box > 0)) throw PreconditionError("search grid must be nonempty");
    const BiPoly &F = M.F(), &G = M.G();
    const BiPoly Fy = F.dy(), Gy = G.dy();
    const auto grid = start_grid(opt.grid, opt.box);
    const std::size_t n = grid.size(), k = stride(n);

    std::vector<WitnessPair> found;
    for (std::size_t a = 0; a < n; ++a) {
        Eigen::Vector2cd y(grid[a], grid[(a * k + 1) % n]);
        for (int it = 0; it < opt.max_iter; ++it) {
            Eigen::Vector2cd R(F.eval(xi0, y[0]) - F.eval(xi1, y[1]), G.eval(xi0, y[0]) - G.eval(xi1, y[1]));
            if (R.norm() <= opt.newton_tol * 1e-2) break;
            Eigen::Matrix2cd J;
            J << Fy.eval(xi0, y[0]), -Fy.eval(xi1, y[1]), Gy.eval(xi0, y[0]), -Gy.eval(xi1, y[1]);
            Eigen::Vector2cd delta = J.completeOrthogonalDecomposition().solve(-R);
            if (!delta.allFinite()) break;
            y += delta;
            if (delta.norm() <= opt.newton_tol * (1 + y.norm())) break;
        }
        if (!y.allFinite()) continue;
        WitnessPair w = make_pair(M, {xi0, y[0]}, {xi1, y[1]});
        if (w.residual <= opt.residual_tol && w.separation >= opt.dedupe) found.push_back(w);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    std::vector<WitnessPair> unique;
    for (const auto& w : found) {
        bool dup = std::any_of(unique.begin(), unique.end(),
                               [&](const WitnessPair& u) { return distance(u, w) < opt.dedupe; });
        if (!dup) unique.push_back(w);
    }
    return unique;
}

std::string to_string(MetricKind k) {
    switch (k) {
    case MetricKind::h: return "h";
    case MetricKind::d: return "d";
    case MetricKind::script_d: return "script_d";
    }
    return "?";
}

MetricKind parse_metric(const std::string& text) {
    if (text == "h") return MetricKind::h;
    if (text == "d") return MetricKind::d;
    if (text == "script_d" || text == "dd") return MetricKind::script_d;
    throw ParseError("unknown metric '" + text + "'");
}

void MetricSpec::validate() const {
    if (kappas) kappas->validate();
    if (kind == MetricKind::d && !kappas) throw PreconditionError("metric d needs kappas");
    if (!(tau > 0)) throw PreconditionError("tau must be positive");
}

double metric(const WitnessPair& w, const MetricSpec& spec) {
    switch (spec.kind) {
    case MetricKind::h:
        return std::max({std::abs(w.p0.x), std::abs(w.p0.y), std::abs(w.p1.x), std::abs(w.p1.y)});
    case MetricKind::d:
        if (!spec.kappas) throw PreconditionError("metric d needs kappas");
        return std::pow((*spec.kappas)[5], std::abs(w.p1.x)) * std::abs(w.p1.y);
    case MetricKind::script_d:
        return std::norm(w.p0.x - spec.xi.first) + std::norm(w.p1.x - spec.xi.second);
    }
    return 0;
}

StepConstraint objective_constraint(const MetricSpec& spec) {
    spec.validate();
    StepConstraint c;
    switch (spec.kind) {
    case MetricKind::d: c.kappa_band = spec.kappas; break;
    case MetricKind::script_d: c.decrease_metric = spec.xi; break;
    case MetricKind::h: throw PreconditionError("h is not a continuation objective");
    }
    return c;
}

Trajectory continue_witness(const PolyMap& M, const WitnessPair& start, const StepConstraint& constraint,
                            int max_steps, const StepOptions& opt) {
    if (max_steps < 0) throw PreconditionError("max_steps must be nonnegative");
    Trajectory T;
    WitnessPair w = make_pair(M, start.p0, start.p1);
    if (w.residual > opt.residual_tol) throw PreconditionError("pair residual exceeds tolerance");
    T.pairs.push_back(w);
    T.values.push_back(constraint.objective(w));
    for (int step = 0; step < max_steps; ++step) {
        try {
            StepResult r = witness_step(M, w, constraint, opt);
            if (r.objective_after == r.objective_before) {
                T.stall = "step " + std::to_string(step) + ": no objective";
                break;
            }
            w = r.pair;
            T.pairs.push_back(w);
            T.values.push_back(r.objective_after);
            T.ansatz.push_back(r.ansatz.str());
        } catch (const Error& e) {
            T.stall = "step " + std::to_string(step) + ": " + e.what();
            break;
        }
    }
    int sense = constraint.sense();
    for (std::size_t i = 1; i < T.values.size(); ++i)
        if (!(sense * (T.values[i] - T.values[i - 1]) > 0)) T.monotone = false;
    return T;
}

WitnessAtlas atlas(const PolyMap& M, const std::vector<double>& k0s, const std::vector<double>& k1s,
                   const AtlasOptions& opt) {
    if (opt.phases < 1) throw PreconditionError("phases must be positive");
    WitnessAtlas A;
    auto phases = [&](double k) {
        std::vector<Complex> out;
        int n = k == 0 ? 1 : opt.phases;
        for (int j = 0; j < n; ++j) out.push_back(std::polar(k, 2 * std::numbers::pi * j / n));
        return out;
    };
    for (double k0 : k0s)
        for (double k1 : k1s) {
            if (k0 < 0 || k1 < 0) throw PreconditionError("moduli must be nonnegative");
            AtlasCell cell{k0, k1, {}, std::nullopt};
            for (Complex x0 : phases(k0))
                for (Complex x1 : phases(k1))
                    for (auto& w : find_witnesses(M, x0, x1, opt.search)) cell.samples.push_back(w);
            for (const auto& w : cell.samples) {
                double g = std::abs(w.p1.y);
                if (!cell.gamma_est || g > *cell.gamma_est) cell.gamma_est = g;
            }
            A.cells.push_back(std::move(cell));
        }
    for (std::size_t i = 0; i < k0s.size(); ++i)
        for (std::size_t j = 0; j + 1 < k1s.size(); ++j) {
            const auto& lo = A.cells[i * k1s.size() + j];
            const auto& hi = A.cells[i * k1s.size() + j + 1];
            if (!lo.gamma_est || !hi.gamma_est) continue;
            A.comparisons.push_back(
                {lo.k0, lo.k1, hi.k1, *lo.gamma_est, *hi.gamma_est, *hi.gamma_est > *lo.gamma_est});
        }
    return A;
}

std::string TauGapVerdict::str() const {
    switch (status) {
    case holds: return "holds";
    case fails: return "fails";
    case not_applicable: return "not_applicable";
    }
    return "?";
}

TauGapVerdict tau_gap_check(const WitnessPair& w, int m, double tau, double S0) {
    if (m < 1) throw PreconditionError("m must be at least 1");
    if (!(tau > 0)) throw PreconditionError("tau must be positive");
    TauGapVerdict v;
    v.h = metric(w, MetricSpec{});
    if (v.h < S0) return v;
    v.threshold = tau * std::pow(v.h, double(m) / (m + 1));
    const CPoint* sides[2] = {&w.p0, &w.p1};
    const char* names[2] = {"p0", "p1"};
    for (int t = 0; t < 2; ++t) {
        const CPoint& p = *sides[t];
        if (!(std::abs(p.x + p.y) < v.threshold)) v.violations.emplace_back(names[t]);
        double ax = std::abs(p.x), ay = std::abs(p.y);
        if (std::max(ax, ay) == v.h) {
            double bound = tau * std::pow(std::min(ax, ay), double(m + 1) / (m + 2));
            double vals[3] = {ax, ay, v.h};
            bool ok = true;
            for (double a : vals)
                for (double b : vals) ok = ok && (a == b || std::abs(a - b) < bound);
            v.derived.emplace_back(names[t], ok);
        }
    }
    v.status = v.violations.empty() ? TauGapVerdict::holds : TauGapVerdict::fails;
    return v;
}

} // namespace keller
