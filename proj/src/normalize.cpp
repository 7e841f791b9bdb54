#include "keller/normalize.hpp"

#include "keller/errors.hpp"

namespace keller {

KellerVerdict is_keller(const PolyMap& M) {
    const BiPoly& J = M.jac();
    if (J.is_constant() && !J.is_zero()) return Keller{J.constant_term()};
    if (J.is_zero()) return NotKellerVerdict{BiPoly()};
    for (const auto& [e, c] : J.terms())
        if (e.degree() > 0) return NotKellerVerdict{BiPoly::monomial(c, e.i, e.j)};
    return NotKellerVerdict{J};
}

BiPoly leading_part(const BiPoly& F) {
    if (F.is_zero()) throw PreconditionError("leading part of the zero polynomial");
    return F.homogeneous(F.degree());
}

Certificate certify(const PolyMap& M) {
    Certificate c;
    const BiPoly& F = M.F();
    if (F.is_zero()) return c;
    int m = F.degree();
    c.support_in_triangle = m > 0;
    for (const auto& [e, coef] : F.terms())
        if (e.i + e.j > m) c.support_in_triangle = false;
    c.leading_is_power = m > 0 && leading_part(F) == (BiPoly::x() + BiPoly::y()).pow(static_cast<unsigned>(m));
    c.jacobian_one = M.jac() == BiPoly(1);
    return c;
}

namespace {

/// Rescales so the x^m coefficient of the top form is 1 and J becomes 1.
std::optional<NormalizedPair> rescale(const PolyMap& M, const Scalar& J, int ell) {
    const BiPoly& F = M.F();
    if (F.degree() <= 0) return std::nullopt;
    int m = F.degree();
    Scalar c = F.coeff(m, 0);
    if (c.is_zero()) return std::nullopt;
    Scalar inv = c.inverse();
    PolyMap scaled(F * inv, M.G() * (c / J));
    NormalizedPair out{scaled, m, ell, inv, certify(scaled)};
    if (!out.certificate.all()) return std::nullopt;
    return out;
}

} // namespace

NormalizedPair normalize_keller(const PolyMap& M, std::optional<int> forced_ell) {
    auto verdict = is_keller(M);
    if (!std::holds_alternative<Keller>(verdict)) throw NotKeller("J(F,G) is not a nonzero constant");
    Scalar J = std::get<Keller>(verdict).J;

    if (!forced_ell) {
        if (auto direct = rescale(M, J, 0)) return *direct;
    }

    int degF = M.F().degree();
    int degG = M.G().degree();
    int lo = std::max(2, degF + 1);
    int hi = degF + degG + 2;
    if (forced_ell) lo = hi = *forced_ell;
    const BiPoly s = BiPoly::x() + BiPoly::y();
    for (int ell = lo; ell <= hi; ++ell) {
        BiPoly X = BiPoly::x() + s.pow(static_cast<unsigned>(ell));
        if (auto out = rescale(M.compose(X, s), J, ell)) return *out;
    }
    throw NoValidEll("no exponent in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] normalizes the pair");
}

} // namespace keller
