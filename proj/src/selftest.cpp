#include "keller/selftest.hpp"

#include "keller/errors.hpp"
#include "keller/majorant.hpp"
#include "keller/normalize.hpp"
#include "keller/perturb.hpp"
#include "keller/reversion.hpp"
#include "keller/witness.hpp"

#include <cmath>
#include <functional>

namespace keller {

namespace {

SelfCheck run(const std::string& name, const std::function<std::string()>& body) {
    try {
        std::string detail = body();
        return {name, detail.empty(), detail.empty() ? "ok" : detail};
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

} // namespace

std::vector<SelfCheck> run_selftest() {
    const BiPoly x = BiPoly::x(), y = BiPoly::y();
    std::vector<SelfCheck> out;

    out.push_back(run("catalan reversion", [] {
        auto r = formal_inverse(Laurent<Rational>::exact(1, {1, 1}), 6);
        const long want[] = {1, -1, 2, -5, 14, -42};
        for (int i = 1; i <= 6; ++i)
            if (r.coeffs[static_cast<std::size_t>(i)] != want[i - 1]) return "coefficient " + std::to_string(i);
        return std::string();
    }));
    out.push_back(run("jacobian of a triangular map", [&] {
        PolyMap M(x + (x + y).pow(2), x + y);
        return M.jac() == BiPoly(1) ? std::string() : "J = " + M.jac().str();
    }));
    out.push_back(run("normalization certificate", [&] {
        auto N = normalize_keller(PolyMap(x, y + x.pow(2)));
        auto again = normalize_keller(N.map);
        if (!N.certificate.all()) return std::string("certificate incomplete");
        return again.map.F() == N.map.F() && again.map.G() == N.map.G() ? std::string() : "not idempotent";
    }));
    out.push_back(run("series inverse law", [] {
        CSeries P = CSeries::exact(0, {Scalar(1), Scalar(2), Scalar(Rational(1, 3))});
        CSeries Q = P * P.inverse(16);
        for (long e = 0; e < 16; ++e)
            if (Q.coeff(e) != Scalar(e == 0 ? 1 : 0)) return "coefficient " + std::to_string(e);
        return std::string();
    }));
    out.push_back(run("binomial battery", [] {
        bool ok = binomial_negative_family(Rational(-1, 2), Rational(-1, 3), 12) && binomial_integer_family(3, 12) &&
                  binomial_fractional_family(Rational(1, 2), 12);
        return ok ? std::string() : "family violated";
    }));
    out.push_back(run("witness family", [&] {
        PolyMap M(x.pow(2), y + x);
        auto ws = find_witnesses(M, 1, -1);
        if (ws.size() < 5) return std::string("too few pairs");
        for (const auto& w : ws)
            if (std::abs(w.p1.y - w.p0.y - 2.0) > 1e-10) return std::string("pair off the family");
        return std::string();
    }));
    out.push_back(run("constrained step", [&] {
        PolyMap M(x.pow(2), y + x);
        StepConstraint c;
        c.keep_abs = {{Coord::x0, 1.0}};
        c.increase_abs = Coord::y1;
        auto r = witness_step(M, make_pair(M, {1, 0}, {-1, 2}), c);
        bool ok = std::abs(std::abs(r.pair.p0.x) - 1) <= 1e-8 && std::abs(r.pair.p1.y) > 2 && r.pair.residual <= 1e-10;
        return ok ? std::string() : "step violates its constraints";
    }));
    out.push_back(run("beta closed form", [] {
        LocalFrame L;
        L.alpha_tilde = std::array<Scalar, 3>{Scalar(Rational(3, 2)), Scalar(0), Scalar(0)};
        auto b = beta_coefficient(L, Kappas{{1, 0.5, 0.5, 1, 2, 1}}, 1, 1.5);
        return std::abs(b.beta_tilde - 0.375) <= 1e-6 * 0.375 ? std::string() : "beta = " + std::to_string(b.beta_tilde);
    }));
    return out;
}

} // namespace keller
