#include <doctest.h>

#include "keller/errors.hpp"
#include "keller/reversion.hpp"
#include "keller/yseries.hpp"

#include <random>

using namespace keller;

namespace {

using QS = Laurent<Rational>;

Rational q(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

// Fixed-point oracle: z_{k+1} = (w - sum_{i>=2} f_i z_k^i) / f_1, truncated to order N.
std::vector<Rational> fixed_point_inverse(const std::vector<Rational>& f, int N) {
    auto mul = [N](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        std::vector<Rational> c(static_cast<std::size_t>(N) + 1, Rational(0));
        for (int i = 0; i <= N; ++i)
            for (int j = 0; i + j <= N; ++j) c[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        return c;
    };
    std::vector<Rational> z(static_cast<std::size_t>(N) + 1, Rational(0));
    for (int it = 0; it <= N; ++it) {
        std::vector<Rational> next(static_cast<std::size_t>(N) + 1, Rational(0));
        next[1] = 1;
        std::vector<Rational> zp = z;
        for (std::size_t i = 2; i < f.size(); ++i) {
            zp = mul(zp, z);
            for (int k = 0; k <= N; ++k) next[static_cast<std::size_t>(k)] -= f[i] * zp[static_cast<std::size_t>(k)];
        }
        for (auto& v : next) v /= f[1];
        z = next;
    }
    return z;
}

} // namespace

TEST_CASE("signed Catalan numbers") {
    auto r = formal_inverse(QS::exact(1, {1, 1}), 6);
    const long want[] = {1, -1, 2, -5, 14, -42};
    for (int i = 1; i <= 6; ++i) CHECK(r.coeffs[static_cast<std::size_t>(i)] == want[i - 1]);
    CHECK(r.coeffs[0] == 0);
}

TEST_CASE("identity and scaling") {
    auto id = formal_inverse(QS::exact(1, {1}), 5);
    CHECK(id.coeffs[1] == 1);
    for (int i = 2; i <= 5; ++i) CHECK(id.coeffs[static_cast<std::size_t>(i)] == 0);

    auto half = formal_inverse(QS::exact(1, {2}), 3);
    CHECK(half.coeffs[1] == Rational(1, 2));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(formal_inverse(QS::exact(2, {1}), 4), ZeroLinearTerm);
    CHECK_THROWS_AS(formal_inverse(QS::exact(0, {1, 1}), 4), PreconditionError);
}

TEST_CASE("agrees with the fixed-point oracle") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> c(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> f{0, Rational(1 + trial % 3)};
        for (int k = 2; k <= 5; ++k) f.push_back(q(c(rng), k));
        QS F = QS::exact(0, f);
        auto r = formal_inverse(F, 8);
        auto oracle = fixed_point_inverse(f, 8);
        for (int i = 0; i <= 8; ++i) CHECK(r.coeffs[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("composition with the inverse is the identity") {
    const RatFunc X = RatFunc::x();
    YSeries F = YSeries::exact(1, {X + RatFunc(1), RatFunc(1), X});
    auto r = formal_inverse(F, 7);
    YSeries z = r.series();
    YSeries comp = YSeries::zero(8);
    YSeries zp = YSeries::constant(RatFunc(1));
    for (int i = 1; i <= 3; ++i) {
        zp = (zp * z).truncate(8);
        comp += zp * F.coeff(i);
    }
    comp = comp.truncate(8);
    CHECK(comp.coeff(1) == RatFunc(1));
    for (long e = 2; e < 8; ++e) CHECK(comp.coeff(e).is_zero());
}

TEST_CASE("x z + z^2 has rational-function coefficients") {
    const RatFunc X = RatFunc::x();
    auto r = formal_inverse(YSeries::exact(1, {X, RatFunc(1)}), 4);
    CHECK(r.coeffs[1] == X.inverse());
    CHECK(r.coeffs[2] == -(X.inverse() * X.inverse() * X.inverse()));
    CHECK(r.coeffs[3] == RatFunc(2) * field_pow(X.inverse(), 5));
}

TEST_CASE("partitions and multinomials") {
    CHECK(partitions(4).size() == 5);
    CHECK(partitions(6).size() == 11);
    CHECK(multinomial(Rational(3), {1, 1}) == 6);
    CHECK(multinomial(Rational(2), {2}) == 1);
}
