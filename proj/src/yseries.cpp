#include "keller/yseries.hpp"

#include <cmath>

namespace keller {

namespace {

YSeries eval_ratfunc_at_series(const RatFunc& f, const YSeries& X, int N) {
    auto horner = [&](const UPoly& p) {
        YSeries acc = YSeries::zero();
        const auto& c = p.coeffs();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * X + YSeries::constant(RatFunc(*it))).cap(N + 1);
        return acc;
    };
    if (f.is_constant()) return YSeries::constant(f);
    if (!X.is_power_series()) throw IllDefined("x-substitution by a series with negative valuation");
    YSeries num = horner(f.num());
    if (f.is_polynomial()) return num;
    YSeries den = horner(f.den());
    if (den.is_zero() || den.alpha() != 0) throw PoleAtX0("denominator vanishes at the substituted point");
    return num * den.inverse(N + 1);
}

} // namespace

std::variant<Scalar, YSeries> compose_series(const YSeries& P, const SeriesArg& Q1, const SeriesArg& Q2, int N) {
    if (std::holds_alternative<Scalar>(Q1) && std::holds_alternative<Scalar>(Q2)) {
        const Scalar& x0 = std::get<Scalar>(Q1);
        const Scalar& y0 = std::get<Scalar>(Q2);
        if (P.is_zero()) return Scalar();
        if (y0.is_zero() && P.alpha() < 0) throw DomainError("negative power of y at y = 0");
        Scalar sum;
        Scalar yp = y0.pow(P.alpha());
        for (const auto& c : P.coeffs()) {
            sum += c.eval(x0) * yp;
            yp *= y0;
        }
        return sum;
    }

    YSeries Y = std::holds_alternative<Scalar>(Q2) ? YSeries::constant(RatFunc(std::get<Scalar>(Q2)))
                                                   : std::get<YSeries>(Q2);
    if (Y.is_zero()) throw IllDefined("substitution y -> 0");
    if (!P.is_exact() && Y.alpha() <= 0)
        throw IllDefined("truncated series composed with a y-substitute of non-positive valuation");

    YSeries sum = YSeries::zero();
    if (P.is_zero()) return P.is_exact() ? sum : sum.truncate(P.precision() * Y.alpha());
    const bool keep_x = std::holds_alternative<YSeries>(Q1) && std::get<YSeries>(Q1) == YSeries::constant(RatFunc::x());
    YSeries yp = Y.pow_int(P.alpha(), N + 1);
    for (const auto& c : P.coeffs()) {
        YSeries coef = keep_x ? YSeries::constant(c)
                       : std::holds_alternative<Scalar>(Q1)
                           ? YSeries::constant(RatFunc(c.eval(std::get<Scalar>(Q1))))
                           : eval_ratfunc_at_series(c, std::get<YSeries>(Q1), N);
        sum += coef * yp;
        yp = (yp * Y).cap(N + 1);
    }
    if (!P.is_exact()) sum = sum.truncate(P.precision() * Y.alpha());
    return sum;
}

CertifiedValue eval_certified(const YSeries& P, const Scalar& x0, const Scalar& y0,
                              const std::optional<TailBound>& tail, double tol) {
    CertifiedValue out;
    if (P.is_zero() && P.is_exact()) {
        out.certified = true;
        out.remainder_bound = 0.0;
        return out;
    }
    std::vector<Scalar> c;
    c.reserve(P.coeffs().size());
    for (const auto& f : P.coeffs()) c.push_back(f.eval(x0)); // PoleAtX0 propagates
    const int alpha = P.alpha();
    if (y0.is_zero() && alpha < 0) throw DomainError("negative power of y at y = 0");
    Scalar yp = y0.pow(alpha);
    for (const auto& v : c) {
        out.value += v * yp;
        yp *= y0;
    }
    if (P.is_exact()) {
        out.certified = true;
        out.remainder_bound = 0.0;
        return out;
    }
    if (!tail) return out;
    const double ay = y0.abs();
    const double ry = tail->r.get_d() * ay;
    if (ry >= 1.0) return out;
    const long first = P.precision() - alpha;
    double bound = tail->C.get_d() * std::pow(ay, alpha) * std::pow(ry, static_cast<double>(first)) / (1.0 - ry);
    out.remainder_bound = bound;
    out.certified = bound <= tol;
    return out;
}

Complex eval_series(const YSeries& P, Complex x0, Complex y0) {
    if (P.is_zero()) return {};
    Complex sum{};
    Complex yp = std::pow(y0, P.alpha());
    for (const auto& c : P.coeffs()) {
        sum += c.eval(x0) * yp;
        yp *= y0;
    }
    return sum;
}

CSeries specialize(const YSeries& P, const Scalar& x0) {
    return P.map([&](const RatFunc& f) { return f.eval(x0); });
}

YSeries lift(const CSeries& P) {
    return P.map([](const Scalar& s) { return RatFunc(s); });
}

YSeries derivative_x(const YSeries& P) {
    return P.map([](const RatFunc& f) { return f.derivative(); });
}

} // namespace keller
