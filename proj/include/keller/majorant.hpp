#pragma once

#include "keller/reversion.hpp"
#include "keller/yseries.hpp"

#include <optional>
#include <string>

namespace keller {

using QSeries = Laurent<Rational>;

/// A series with nonnegative rational coefficients, optionally carrying a
/// geometric tail certificate q_i <= C r^i beyond the stored terms.
class Majorant {
public:
    Majorant() = default;
    explicit Majorant(QSeries s, std::optional<TailBound> tail = std::nullopt);

    static Majorant exact(int alpha, std::vector<Rational> coeffs) {
        return Majorant(QSeries::exact(alpha, std::move(coeffs)), TailBound{0, 0});
    }
    /// sum_{i<=N} C r^i y^(alpha+i) with the matching tail certificate.
    static Majorant geometric(const Rational& C, const Rational& r, int alpha, int N);
    /// |u|^(-1) y sum_i e^i y^i, the simple controlling function of the leading-term case.
    static Majorant lead_form(const Rational& u_abs, const Rational& e, int N);

    const QSeries& series() const { return s_; }
    const std::optional<TailBound>& tail() const { return tail_; }
    int alpha() const { return s_.alpha(); }
    Rational q0() const { return s_.is_zero() ? Rational(0) : s_.lead(); }

    std::string str() const;

private:
    QSeries s_;
    std::optional<TailBound> tail_;
};

/// Result of a coefficient-wise comparison; always limited to a finite order.
struct DominanceVerdict {
    bool holds = true;
    /// Last exponent compared.
    long checked_through = 0;
    /// First violating index, relative to the majorant's leading exponent.
    std::optional<long> fail_index;
};

DominanceVerdict dominates(const CSeries& P, const QSeries& Q);
DominanceVerdict dominates(const YSeries& P, const Majorant& Q, const Scalar& x0);

struct SplitParts {
    Majorant igo;
    QSeries inv;
};

/// igo = q0^-1 sum_{j>0} q_j y^j and inv = q0 y^alpha (1 - igo).
SplitParts split_parts(const Majorant& Q);

struct MajorantCheck {
    Majorant majorant;
    DominanceVerdict verdict;
    bool nonnegative = true;
};

/// +dQ/dy for power series, -dQ/dy for polynomials in 1/y; verified against dP/dy.
MajorantCheck derivative_majorant(const YSeries& P, const Majorant& Q, const Scalar& x0);

/// P^a <= Q_inv^a <= (q0 y^alpha)^(-b) Q_inv^(a+b) for negative rationals a, b.
/// Returns the right-hand side; both links are verified on normalized series.
MajorantCheck power_majorant(const YSeries& P, const Majorant& Q, const Scalar& x0, const Rational& a,
                             const Rational& b, int N);

/// Q^k <= (q0 y^alpha)^k (1 - k Q_igo)^-1 for integer k >= 1, and
/// Q^k <= (q0 y^alpha)^k (1 + k Q_igo (1 - Q_igo)^-1) for 0 <= k < 1.
/// The verdict covers P^k <= Q^k <= result, with (1 - Q_igo)^-k in place of Q^k when k is fractional.
MajorantCheck power_majorant_k(const YSeries& P, const Majorant& Q, const Scalar& x0, const Rational& k, int N);

struct MajorantInverse {
    ReversionResult<Rational> inverse;
    bool nonnegative = true;
    std::optional<int> first_negative;
};

/// Reversion of Phi_inv = a1 z - sum_{i>=2} a_i z^i for a majorant Phi = a1 z + sum a_i z^i.
MajorantInverse majorant_inverse(const Majorant& Phi, int N);

struct TransferVerdict {
    bool holds = true;
    std::optional<int> fail_index;
    ReversionResult<Scalar> inverse;
    ReversionResult<Rational> majorant_inverse;
};

/// |b_i| <= b^_i for i <= N, where F is dominated by Phi and |f_1| equals the linear coefficient of Phi.
TransferVerdict dominance_transfer_check(const CSeries& F, const Majorant& Phi, int N);

/// Closed-form inverse of the lead-form negative correspondence:
/// y = (1 + e|u|P - sqrt(1 - 6 e|u|P + e^2|u|^2 P^2)) / (4e).
double quadratic_majorant_inverse(double u_abs, double eps_pow, double Pinv_val);

struct AbsValue {
    double value = 0;
    double remainder_bound = 0;
    bool certified = false;
};

/// sum |p_i(x0) y0^(alpha+i)| over the stored terms plus the tail remainder of Q at |y0|.
AbsValue abs_conv_value(const YSeries& P, const Scalar& x0, const Scalar& y0, const Majorant& Q);

/// (-1)^i C(a, i) = |C(a, i)| <= |C(a + b, i)| for i <= imax.
bool binomial_negative_family(const Rational& a, const Rational& b, int imax);
/// C(k, i) <= |C(-k, i)| <= k^i for integer k >= 1.
bool binomial_integer_family(long k, int imax);
/// 0 <= C(k, i) sign-adjusted and |C(k, i)| <= k for 0 < k < 1, i >= 1.
bool binomial_fractional_family(const Rational& k, int imax);

} // namespace keller
