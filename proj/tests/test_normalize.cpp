#include <doctest.h>

#include "keller/errors.hpp"
#include "keller/normalize.hpp"

using namespace keller;

namespace {

const BiPoly x = BiPoly::x();
const BiPoly y = BiPoly::y();

// Independent check of the triangle condition and the leading power.
bool in_triangle(const BiPoly& F, int m) {
    for (const auto& [i, j] : support(F))
        if (i + j > m) return false;
    return true;
}

} // namespace

TEST_CASE("is_keller") {
    auto v = is_keller(PolyMap(x, y));
    REQUIRE(std::holds_alternative<Keller>(v));
    CHECK(std::get<Keller>(v).J == Scalar(1));

    auto w = is_keller(PolyMap(x.pow(2), y + x));
    REQUIRE(std::holds_alternative<NotKellerVerdict>(w));
    CHECK(std::get<NotKellerVerdict>(w).witness == BiPoly(2) * x);

    auto u = is_keller(PolyMap(x + (x + y).pow(2), x + y));
    REQUIRE(std::holds_alternative<Keller>(u));
    CHECK(std::get<Keller>(u).J == Scalar(1));

    auto z = is_keller(PolyMap(x + y, x + y));
    REQUIRE(std::holds_alternative<NotKellerVerdict>(z));
    CHECK(std::get<NotKellerVerdict>(z).witness.is_zero());
}

TEST_CASE("leading_part") {
    CHECK(leading_part(x + (x + y).pow(2)) == (x + y).pow(2));
    CHECK(leading_part((x + y).pow(4)) == (x + y).pow(4));
    CHECK(leading_part(x.pow(2) + y) == x.pow(2));
}

TEST_CASE("normalize (x, y + x^2)") {
    auto N = normalize_keller(PolyMap(x, y + x.pow(2)));
    CHECK(N.m == 2);
    CHECK(N.certificate.all());
    CHECK(N.map.jac() == BiPoly(1));
    CHECK(in_triangle(N.map.F(), 2));
    CHECK(leading_part(N.map.F()) == (x + y).pow(2));

    SUBCASE("expanded oracle for the l = 2 change") {
        auto M = normalize_keller(PolyMap(x, y + x.pow(2)), 2);
        BiPoly F = x + (x + y).pow(2);
        CHECK(M.map.F() == F);
        CHECK(M.map.G() == (x + y) + F.pow(2));
    }

    SUBCASE("idempotent") {
        auto again = normalize_keller(N.map);
        CHECK(again.map.F() == N.map.F());
        CHECK(again.map.G() == N.map.G());
        CHECK(again.ell == 0);
    }
}

TEST_CASE("normalize (x, y + x^3) with l = 3") {
    auto N = normalize_keller(PolyMap(x, y + x.pow(3)), 3);
    CHECK(N.certificate.all());
    CHECK(N.map.jac() == BiPoly(1));
    CHECK(in_triangle(N.map.F(), N.m));
    CHECK(leading_part(N.map.F()) == (x + y).pow(N.m));
    auto again = normalize_keller(N.map);
    CHECK(again.map.F() == N.map.F());
    CHECK(again.map.G() == N.map.G());
}

TEST_CASE("normalize (x, y + x^3) chooses its own exponent") {
    auto N = normalize_keller(PolyMap(x, y + x.pow(3)));
    CHECK(N.certificate.all());
    CHECK(N.map.jac() == BiPoly(1));
}

TEST_CASE("already normalized input is unchanged") {
    PolyMap M(x + (x + y).pow(2), x + y);
    auto N = normalize_keller(M);
    CHECK(N.map.F() == M.F());
    CHECK(N.map.G() == M.G());
    CHECK(N.ell == 0);
    CHECK(N.certificate.all());
}

TEST_CASE("certify flags each condition separately") {
    auto c = certify(PolyMap(x, y));
    CHECK(c.jacobian_one);
    CHECK_FALSE(c.all());
    auto d = certify(PolyMap(x + (x + y).pow(2), Scalar(2) * (x + y)));
    CHECK(d.support_in_triangle);
    CHECK(d.leading_is_power);
    CHECK_FALSE(d.jacobian_one);
}

TEST_CASE("non-Keller input is rejected") {
    CHECK_THROWS_AS(normalize_keller(PolyMap(x.pow(2), y + x)), NotKeller);
}
