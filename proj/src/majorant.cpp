#include "keller/majorant.hpp"

#include <cmath>

namespace keller {

namespace {

CSeries to_cseries(const QSeries& q) {
    return q.map([](const Rational& r) { return Scalar(r); });
}

bool all_nonnegative(const QSeries& q) {
    for (const auto& c : q.coeffs())
        if (sgn(c) < 0) return false;
    return true;
}

DominanceVerdict combine(const DominanceVerdict& a, const DominanceVerdict& b) {
    DominanceVerdict out;
    out.holds = a.holds && b.holds;
    out.checked_through = std::min(a.checked_through, b.checked_through);
    out.fail_index = !a.holds ? a.fail_index : b.fail_index;
    return out;
}

/// P / (p0 y^alpha): leading coefficient 1 at exponent 0.
template <class T>
Laurent<T> normalized(const Laurent<T>& P) {
    T inv = T(1) / P.lead();
    return (P * inv).shift(-P.alpha());
}

Rational rational_power_upper(const Rational& base, const Rational& e) {
    if (e.get_den() == 1) return field_pow(base, e.get_num().get_si());
    if (base == 1) return 1;
    return rational_upper(std::pow(base.get_d(), e.get_d()));
}

struct Normalized {
    CSeries hP;
    Rational q0;
};

Normalized normalize_pair(const YSeries& P, const Majorant& Q, const Scalar& x0) {
    if (Q.series().is_zero() || sgn(Q.q0()) <= 0) throw ZeroLeading("majorant leading coefficient must be positive");
    CSeries PS = specialize(P, x0);
    if (PS.is_zero() || PS.alpha() != Q.alpha() || !(PS.lead().norm() == Q.q0() * Q.q0()))
        throw PreconditionError("|p0(x0)| must equal q0 at the same leading exponent");
    if (!dominates(P, Q, x0).holds) throw PreconditionError("P is not dominated by Q");
    return {normalized(PS), Q.q0()};
}

} // namespace

Majorant::Majorant(QSeries s, std::optional<TailBound> tail) : s_(std::move(s)), tail_(std::move(tail)) {
    if (!all_nonnegative(s_)) throw DomainError("majorant coefficients must be nonnegative");
    if (tail_) {
        if (sgn(tail_->C) < 0 || sgn(tail_->r) < 0) throw DomainError("tail certificate must be nonnegative");
        if (!s_.is_exact() && !s_.is_zero()) {
            // spot-check the last stored coefficient against the certificate
            std::size_t last = s_.coeffs().size() - 1;
            if (s_.coeffs()[last] > tail_->C * field_pow(tail_->r, static_cast<long>(last)))
                throw DomainError("stored coefficients violate the tail certificate");
        }
    }
}

Majorant Majorant::geometric(const Rational& C, const Rational& r, int alpha, int N) {
    std::vector<Rational> q;
    Rational v = C;
    for (int i = 0; i <= N; ++i) {
        q.push_back(v);
        v *= r;
    }
    return Majorant(QSeries::truncated(alpha, std::move(q), alpha + N + 1), TailBound{C, r});
}

Majorant Majorant::lead_form(const Rational& u_abs, const Rational& e, int N) {
    if (sgn(u_abs) <= 0) throw DomainError("|u| must be positive");
    return geometric(1 / u_abs, e, 1, N);
}

std::string Majorant::str() const {
    std::string out;
    for (std::size_t k = 0; k < s_.coeffs().size(); ++k) {
        if (!out.empty()) out += " + ";
        out += to_string(s_.coeffs()[k]) + "*y^" + std::to_string(s_.alpha() + static_cast<long>(k));
    }
    if (out.empty()) out = "0";
    if (!s_.is_exact()) out += " + O(y^" + std::to_string(s_.precision()) + ")";
    return out;
}

DominanceVerdict dominates(const CSeries& P, const QSeries& Q) {
    DominanceVerdict v;
    long hi = std::min(P.precision(), Q.precision());
    if (hi >= kExact) hi = std::max(P.end(), Q.end());
    long lo = hi;
    if (!P.is_zero()) lo = std::min<long>(lo, P.alpha());
    if (!Q.is_zero()) lo = std::min<long>(lo, Q.alpha());
    const long base = Q.is_zero() ? 0 : Q.alpha();
    v.checked_through = hi - 1;
    for (long e = lo; e < hi; ++e) {
        Scalar p = P.coeff(e);
        if (p.is_zero()) continue;
        Rational q = Q.coeff(e);
        if (sgn(q) < 0 || p.norm() > q * q) {
            v.holds = false;
            v.fail_index = e - base;
            return v;
        }
    }
    return v;
}

DominanceVerdict dominates(const YSeries& P, const Majorant& Q, const Scalar& x0) {
    return dominates(specialize(P, x0), Q.series());
}

SplitParts split_parts(const Majorant& Q) {
    const QSeries& s = Q.series();
    if (s.is_zero() || sgn(s.lead()) <= 0) throw ZeroLeading("q0 must be positive");
    Rational q0 = s.lead();
    QSeries tail = (s * (1 / q0)).shift(-s.alpha()) - QSeries::constant(1);
    std::optional<TailBound> tb;
    if (Q.tail()) tb = TailBound{Q.tail()->C / q0, Q.tail()->r};
    Majorant igo(tail, tb);
    QSeries inv = (QSeries::constant(1) - tail).shift(s.alpha()) * q0;
    return {std::move(igo), std::move(inv)};
}

MajorantCheck derivative_majorant(const YSeries& P, const Majorant& Q, const Scalar& x0) {
    const QSeries& q = Q.series();
    int sign = 0;
    if (P.is_power_series() && q.is_power_series())
        sign = 1;
    else if (P.is_inverse_polynomial() && q.is_inverse_polynomial())
        sign = -1;
    else
        throw MixedShape("P and Q must both be power series or both polynomials in 1/y");
    if (!dominates(P, Q, x0).holds) throw PreconditionError("P is not dominated by Q");

    QSeries d = q.derivative() * Rational(sign);
    MajorantCheck out;
    out.nonnegative = all_nonnegative(d);
    if (!out.nonnegative) throw DomainError("derivative majorant has a negative coefficient");
    out.majorant = Majorant(d, q.is_exact() ? std::optional<TailBound>(TailBound{0, 0}) : std::nullopt);
    out.verdict = dominates(specialize(P, x0).derivative(), d);
    return out;
}

MajorantCheck power_majorant(const YSeries& P, const Majorant& Q, const Scalar& x0, const Rational& a,
                             const Rational& b, int N) {
    if (sgn(a) >= 0 || sgn(b) >= 0) throw ExponentRange("a and b must be negative rationals");
    Rational aa = a * Q.alpha(), bb = b * Q.alpha();
    if (aa.get_den() != 1 || bb.get_den() != 1) throw ExponentError("alpha*a and alpha*b must be integers");
    auto [hP, q0] = normalize_pair(P, Q, x0);
    QSeries inv1 = normalized(split_parts(Q).inv);

    CSeries Pa = pow_rational(hP, a, N);
    QSeries Ia = pow_rational(inv1, a, N);
    QSeries Iab = pow_rational(inv1, a + b, N);

    MajorantCheck out;
    out.verdict = combine(dominates(Pa, Ia), dominates(to_cseries(Ia), Iab));
    QSeries emitted = (Iab * rational_power_upper(q0, a)).shift(aa.get_num().get_si());
    out.nonnegative = all_nonnegative(emitted);
    if (!out.nonnegative) throw DomainError("power majorant has a negative coefficient");
    out.majorant = Majorant(emitted);
    return out;
}

MajorantCheck power_majorant_k(const YSeries& P, const Majorant& Q, const Scalar& x0, const Rational& k, int N) {
    bool integral = k.get_den() == 1 && k >= 1;
    bool fractional = sgn(k) >= 0 && k < 1;
    if (!integral && !fractional) throw ExponentRange("k must be an integer >= 1 or a rational in [0, 1)");
    Rational kk = k * Q.alpha();
    if (kk.get_den() != 1) throw ExponentError("alpha*k must be an integer");
    auto [hP, q0] = normalize_pair(P, Q, x0);
    SplitParts parts = split_parts(Q);
    const QSeries& igo = parts.igo.series();
    QSeries one = QSeries::constant(1);

    CSeries Pk = pow_rational(hP, k, N);
    QSeries Qk = pow_rational(one + igo, k, N);
    QSeries mid = pow_rational(one - igo, -k, N);
    QSeries rhs = integral ? pow_rational(one - igo * k, Rational(-1), N)
                           : one + igo * k * pow_rational(one - igo, Rational(-1), N);
    rhs = rhs.cap(N + 1);

    MajorantCheck out;
    // (1 + g)^k has signed coefficients for fractional k; P^k is then compared with (1 - g)^-k
    out.verdict = combine(combine(dominates(Pk, integral ? Qk : mid), dominates(to_cseries(Qk), mid)),
                          dominates(to_cseries(mid), rhs));
    QSeries emitted = (rhs * rational_power_upper(q0, k)).shift(kk.get_num().get_si());
    out.nonnegative = all_nonnegative(emitted);
    if (!out.nonnegative) throw DomainError("power majorant has a negative coefficient");
    out.majorant = Majorant(emitted);
    return out;
}

MajorantInverse majorant_inverse(const Majorant& Phi, int N) {
    const QSeries& s = Phi.series();
    if (!s.is_power_series() || (!s.is_zero() && s.alpha() < 1))
        throw PreconditionError("majorant to invert must vanish at 0");
    Rational a1 = s.coeff(1);
    if (sgn(a1) == 0) throw ZeroLinearTerm("linear coefficient vanishes");
    QSeries neg = QSeries::monomial(a1 * 2, 1) - s;
    MajorantInverse out;
    out.inverse = formal_inverse(neg, N);
    for (std::size_t i = 0; i < out.inverse.coeffs.size(); ++i) {
        if (sgn(out.inverse.coeffs[i]) < 0) {
            out.nonnegative = false;
            out.first_negative = static_cast<int>(i);
            break;
        }
    }
    return out;
}

TransferVerdict dominance_transfer_check(const CSeries& F, const Majorant& Phi, int N) {
    if (!dominates(F, Phi.series()).holds) throw PreconditionError("F is not dominated by Phi");
    Rational a1 = Phi.series().coeff(1);
    if (!(F.coeff(1).norm() == a1 * a1)) throw PreconditionError("|f1| must equal the linear coefficient of Phi");
    TransferVerdict out;
    out.inverse = formal_inverse(F, N);
    MajorantInverse mi = majorant_inverse(Phi, N);
    out.majorant_inverse = mi.inverse;
    for (int i = 1; i <= N; ++i) {
        const Rational& bh = mi.inverse.coeffs[static_cast<std::size_t>(i)];
        if (sgn(bh) < 0 || out.inverse.coeffs[static_cast<std::size_t>(i)].norm() > bh * bh) {
            out.holds = false;
            out.fail_index = i;
            break;
        }
    }
    return out;
}

double quadratic_majorant_inverse(double u_abs, double eps_pow, double Pinv_val) {
    if (!(u_abs > 0) || !(eps_pow > 0) || Pinv_val < 0) throw DomainError("arguments must be positive");
    const double s = eps_pow * u_abs * Pinv_val;
    const double disc = 1.0 - 6.0 * s + s * s;
    if (disc < 0) throw NegativeDiscriminant("outside the convergence disk");
    // (1 + s - sqrt(disc)) / (4e), rewritten without cancellation
    return 2.0 * u_abs * Pinv_val / (1.0 + s + std::sqrt(disc));
}

AbsValue abs_conv_value(const YSeries& P, const Scalar& x0, const Scalar& y0, const Majorant& Q) {
    if (!Q.tail()) throw Uncertified("majorant carries no tail certificate");
    AbsValue out;
    const double ay = y0.abs();
    if (!P.is_zero()) {
        for (std::size_t k = 0; k < P.coeffs().size(); ++k) {
            double c = P.coeffs()[k].eval(x0).abs();
            if (c != 0) out.value += c * std::pow(ay, P.alpha() + static_cast<long>(k));
        }
    }
    if (P.is_exact()) {
        out.certified = true;
        return out;
    }
    const QSeries& q = Q.series();
    const long start = P.precision();
    const long known = q.is_exact() ? kExact : q.precision();
    for (long e = start; e < std::min(known, q.end()); ++e) out.remainder_bound += q.coeff(e).get_d() * std::pow(ay, e);
    if (q.is_exact()) {
        out.certified = true;
        return out;
    }
    const double ry = Q.tail()->r.get_d() * ay;
    if (ry >= 1.0) {
        out.remainder_bound = INFINITY;
        return out;
    }
    const long s = std::max(start, known);
    const long qa = q.is_zero() ? 0 : q.alpha();
    out.remainder_bound += Q.tail()->C.get_d() * std::pow(ay, qa) * std::pow(ry, static_cast<double>(s - qa)) / (1.0 - ry);
    out.certified = true;
    return out;
}

bool binomial_negative_family(const Rational& a, const Rational& b, int imax) {
    for (int i = 1; i <= imax; ++i) {
        Rational ca = binomial(a, i), cab = binomial(a + b, i);
        Rational sign = (i % 2 == 0) ? 1 : -1;
        if (!(sign * ca == abs(ca))) return false;
        if (!(abs(ca) <= abs(cab))) return false;
        if (!(sign * cab == abs(cab))) return false;
    }
    return true;
}

bool binomial_integer_family(long k, int imax) {
    for (int i = 0; i <= imax; ++i) {
        Rational c = binomial(Rational(k), i), cn = binomial(Rational(-k), i);
        if (!(c <= abs(cn)) || !(abs(cn) <= field_pow(Rational(k), i))) return false;
    }
    return true;
}

bool binomial_fractional_family(const Rational& k, int imax) {
    for (int i = 1; i <= imax; ++i) {
        Rational c = binomial(k, i), cn = binomial(-k, i);
        if (!(c <= abs(cn)) || !(abs(c) <= abs(cn)) || !(abs(cn) <= k)) return false;
    }
    return true;
}

} // namespace keller
