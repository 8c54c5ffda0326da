#include <catch_amalgamated.hpp>

#include "reference.hpp"
#include "stribola/constants.hpp"
#include "stribola/iterates.hpp"

using namespace stribola;

namespace {

const std::vector<BigRat>& kappas_to_14() {
    static const std::vector<BigRat> k = [] {
        IterateCache c;
        generate(14, c);
        return c.kappas();
    }();
    return k;
}

BigRat frac(long p, long q) { return BigRat(BigInt(p), BigInt(q)); }

}  // namespace

TEST_CASE("ratios and accelerated values at small n", "[constants]") {
    const auto& k = kappas_to_14();
    CHECK(theta(k, 1) == frac(1, 3));
    CHECK(theta(k, 2) == frac(1, 5));
    CHECK(theta(k, 3) == frac(3, 7));
    CHECK(aitken(k, 1) == frac(1, 4));
    CHECK(aitken(k, 2) == frac(7, 24));
    CHECK(aitken(k, 3) == frac(11, 40));
    CHECK(lower_bound_prop1(k, 3) == frac(1, 5));
    CHECK_THROWS_AS(theta(k, 0), std::out_of_range);
    CHECK_THROWS_AS(aitken(k, 14), std::out_of_range);
}

TEST_CASE("decimal rows n <= 14 match the reference to 20 places", "[constants]") {
    const auto& k = kappas_to_14();
    for (std::size_t n = 0; n <= 14; ++n) {
        const auto& row = ref::kDecimalRows[n];
        INFO("n = " << n);
        CHECK(to_decimal(k[n], 20) == row.kappa);
        if (n >= 1 && n < 14) {
            CHECK(to_decimal(theta(k, n), 20) == row.theta);
            CHECK(to_decimal(aitken(k, n), 20) == row.aitken);
        }
    }
}

TEST_CASE("the three accelerated forms agree exactly", "[constants]") {
    const auto& k = kappas_to_14();
    for (std::size_t n = 1; n + 1 < k.size(); ++n) {
        const BigRat th = theta(k, n);
        const BigRat a = aitken(k, n);
        CHECK(a == (k[n] - th * k[n - 1]) / (BigRat(1) - th));
        const BigRat d1 = k[n] - k[n - 1];
        const BigRat d2 = k[n + 1] - k[n];
        CHECK(a == k[n + 1] - d2 * d2 / (d2 - d1));
    }
}

TEST_CASE("lower bounds sit below every computed kappa", "[constants]") {
    const auto& k = kappas_to_14();
    for (std::size_t n = 1; n < k.size(); ++n) {
        const BigRat lb = lower_bound_prop1(k, n);
        for (const auto& km : k) CHECK(lb < km);
    }
}

TEST_CASE("even accelerated values decrease and odd ones increase", "[constants]") {
    const auto& k = kappas_to_14();
    for (std::size_t n = 2; n + 3 < k.size(); n += 2) CHECK(aitken(k, n + 2) < aitken(k, n));
    for (std::size_t n = 1; n + 3 < k.size(); n += 2) CHECK(aitken(k, n) < aitken(k, n + 2));
}

TEST_CASE("ladder level sizes and level one", "[constants]") {
    const auto& k = kappas_to_14();
    const AccelLadder lad = ladder(k, 4);
    CHECK(lad.depth() == 4);
    for (std::size_t j = 0; j <= 4; ++j) CHECK(lad.level(j).values.size() == k.size() - 2 * j);
    CHECK(lad.level(1).at(3) == aitken(k, 3));
    CHECK(lad.level(4).start == 4);
    CHECK(lad.level(4).last() == 10);
    CHECK_THROWS_AS(lad.level(4).at(11), std::out_of_range);
    CHECK_THROWS_AS(ladder(std::span(k).first(8), 4), std::invalid_argument);
}

TEST_CASE("enclosures", "[constants]") {
    const auto& k = kappas_to_14();
    const RationalInterval first = enclosure(std::span(k).first(2), EnclosureMode::Unconditional);
    CHECK(first.lo == BigRat(0));
    CHECK(first.hi == frac(1, 2));
    CHECK_FALSE(first.conditional());

    const RationalInterval u = enclosure(k, EnclosureMode::Unconditional);
    CHECK(u.lo == lower_bound_prop1(k, 14));
    CHECK(u.hi == k[14]);
    const RationalInterval c = enclosure(k, EnclosureMode::Conjectural);
    CHECK(c.conditional());
    CHECK(c.lo_index == 11);
    CHECK(c.hi_index == 12);
    CHECK(u.lo < c.lo);
    CHECK(c.hi < u.hi);
    CHECK(to_string(c.lo_source).find("conditional on Conjecture 1") != std::string_view::npos);
}

TEST_CASE("ratio chain holds through n = 14", "[constants]") {
    const auto& k = kappas_to_14();
    const auto chain = check_ratio_chain(k);
    REQUIRE(chain.size() == 5);
    for (const auto& link : chain) CHECK(link.holds);
    CHECK(check_ratio_chain(std::span(k).first(5)).empty());
}

TEST_CASE("degenerate sequences are hard errors", "[constants]") {
    const std::vector<BigRat> flat{BigRat(1), BigRat(1), BigRat(1)};
    CHECK_THROWS_AS(theta(flat, 1), DegenerateDifferenceError);
    CHECK_THROWS_AS(aitken(flat, 1), ZeroSecondDifferenceError);
    const std::vector<BigRat> linear{BigRat(3), BigRat(2), BigRat(1)};
    CHECK_THROWS_AS(aitken(linear, 1), ZeroSecondDifferenceError);
}
