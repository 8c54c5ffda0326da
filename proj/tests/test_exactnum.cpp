#include <catch_amalgamated.hpp>

#include <cstdint>
#include <numeric>
#include <random>

#include "stribola/exactnum.hpp"

using stribola::BigInt;
using stribola::BigRat;
using stribola::Rounding;
using stribola::to_decimal;

TEST_CASE("bigint arithmetic agrees with int64 on small values", "[exactnum]") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<long> dist(-1'000'000, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        const long a = dist(rng);
        const long b = dist(rng);
        CHECK((BigInt(a) + BigInt(b)).to_long() == a + b);
        CHECK((BigInt(a) - BigInt(b)).to_long() == a - b);
        CHECK((BigInt(a) * BigInt(b)).to_long() == a * b);
        CHECK((BigInt(a) <=> BigInt(b)) == (a <=> b));
        if (b != 0) {
            CHECK((BigInt(a) / BigInt(b)).to_long() == a / b);
            CHECK((BigInt(a) % BigInt(b)).to_long() == a % b);
        }
        CHECK(stribola::gcd(BigInt(a), BigInt(b)).to_long() == std::gcd(a, b));
    }
}

TEST_CASE("bigint multiplication matches a schoolbook digit oracle", "[exactnum]") {
    std::mt19937_64 rng(7);
    auto random_digits = [&](std::size_t len) {
        std::string s(len, '0');
        for (auto& ch : s) ch = static_cast<char>('0' + rng() % 10);
        s[0] = static_cast<char>('1' + rng() % 9);
        return s;
    };
    auto schoolbook = [](const std::string& a, const std::string& b) {
        std::vector<int> acc(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) acc[i + j + 1] += (a[i] - '0') * (b[j] - '0');
        }
        for (std::size_t k = acc.size() - 1; k > 0; --k) {
            acc[k - 1] += acc[k] / 10;
            acc[k] %= 10;
        }
        std::string s;
        for (const int d : acc) s.push_back(static_cast<char>('0' + d));
        const auto nz = s.find_first_not_of('0');
        return nz == std::string::npos ? std::string("0") : s.substr(nz);
    };
    for (int i = 0; i < 40; ++i) {
        const std::string a = random_digits(1 + rng() % 300);
        const std::string b = random_digits(1 + rng() % 300);
        CHECK((BigInt(a) * BigInt(b)).to_string() == schoolbook(a, b));
    }
}

TEST_CASE("bigint parsing and errors", "[exactnum]") {
    CHECK(BigInt("-12345678901234567890123").to_string() == "-12345678901234567890123");
    CHECK(BigInt("+7").to_long() == 7);
    CHECK_THROWS_AS(BigInt("12a"), std::invalid_argument);
    CHECK_THROWS_AS(BigInt(""), std::invalid_argument);
    CHECK_THROWS_AS(BigInt(1) / BigInt(0), std::domain_error);
    CHECK_THROWS_AS(BigInt(1) % BigInt(0), std::domain_error);
    CHECK(stribola::gcd(BigInt(0), BigInt(0)).is_zero());
    CHECK(stribola::gcd(BigInt(-12), BigInt(18)).to_long() == 6);
    CHECK(stribola::lcm_upto(10).to_long() == 2520);
    CHECK(stribola::binomial(10, 3).to_long() == 120);
}

TEST_CASE("gcd divides both arguments and is maximal", "[exactnum]") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const BigInt g0(static_cast<long>(rng() % 1000 + 1));
        const BigInt a = g0 * BigInt(static_cast<long>(rng() % 100000));
        const BigInt b = g0 * BigInt(static_cast<long>(rng() % 100000));
        const BigInt g = stribola::gcd(a, b);
        if (a.is_zero() && b.is_zero()) continue;
        CHECK(a.divisible_by(g));
        CHECK(b.divisible_by(g));
        CHECK(g.divisible_by(g0));
        CHECK(stribola::gcd(a.divexact(g), b.divexact(g)).is_one());
    }
}

TEST_CASE("bigrat stays reduced with positive denominator", "[exactnum]") {
    const BigRat x(BigInt(6), BigInt(-4));
    CHECK(x.num().to_long() == -3);
    CHECK(x.den().to_long() == 2);
    CHECK(BigRat(BigInt(0), BigInt(-5)).to_string() == "0");
    CHECK_THROWS_AS(BigRat(BigInt(1), BigInt(0)), std::domain_error);
    CHECK_THROWS_AS(BigRat(1) / BigRat(0), std::domain_error);
    CHECK(BigRat(BigInt(1), BigInt(3)) + BigRat(BigInt(1), BigInt(6)) == BigRat(BigInt(1), BigInt(2)));
    CHECK(BigRat::pow(BigRat(BigInt(2), BigInt(3)), -2) == BigRat(BigInt(9), BigInt(4)));
    CHECK(BigRat::parse("24941/89148").to_string() == "24941/89148");
    CHECK(BigRat::parse("-0.125") == BigRat(BigInt(-1), BigInt(8)));
    CHECK(BigRat::parse("3") == BigRat(3));
    CHECK_THROWS(BigRat::parse("1/0"));
    CHECK_THROWS(BigRat::parse("x"));
}

TEST_CASE("bigrat field laws on random values", "[exactnum]") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> dist(-1000, 1000);
    auto rnd = [&] {
        long d = dist(rng);
        if (d == 0) d = 1;
        return BigRat(BigInt(dist(rng)), BigInt(d));
    };
    for (int i = 0; i < 500; ++i) {
        const BigRat a = rnd(), b = rnd(), c = rnd();
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == BigRat(0));
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(stribola::gcd(a.num(), a.den()).is_one());
        CHECK(a.den().sign() > 0);
    }
}

TEST_CASE("to_decimal rounds half away from zero and keeps trailing zeros", "[exactnum]") {
    CHECK(to_decimal(BigRat(1), 20) == "1.00000000000000000000");
    CHECK(to_decimal(BigRat(BigInt(1), BigInt(3)), 20) == "0.33333333333333333333");
    CHECK(to_decimal(BigRat(BigInt(7), BigInt(24)), 20) == "0.29166666666666666667");
    CHECK(to_decimal(BigRat(BigInt(1), BigInt(8)), 2) == "0.13");
    CHECK(to_decimal(BigRat(BigInt(-1), BigInt(8)), 2) == "-0.13");
    CHECK(to_decimal(BigRat(BigInt(-1), BigInt(1000)), 2) == "0.00");
    CHECK(to_decimal(BigRat(BigInt(-5), BigInt(2)), 1) == "-2.5");
    CHECK_THROWS_AS(to_decimal(BigRat(1), 0), std::invalid_argument);
}

TEST_CASE("directed rounding brackets the value", "[exactnum]") {
    const BigRat x(BigInt(2), BigInt(3));
    CHECK(to_decimal(x, 3, Rounding::Down) == "0.666");
    CHECK(to_decimal(x, 3, Rounding::Up) == "0.667");
    CHECK(to_decimal(-x, 3, Rounding::Down) == "-0.667");
    CHECK(to_decimal(-x, 3, Rounding::Up) == "-0.666");
    CHECK(to_decimal(BigRat(BigInt(1), BigInt(4)), 2, Rounding::Up) == "0.25");
    CHECK(to_decimal(BigRat(BigInt(-1), BigInt(1000)), 2, Rounding::Up) == "0.00");
}

TEST_CASE("to_decimal round trip stays within half a unit", "[exactnum]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const BigRat x(BigInt(static_cast<long>(rng() % 2'000'001) - 1'000'000),
                       BigInt(static_cast<long>(rng() % 999'999 + 1)));
        const std::size_t places = 1 + rng() % 30;
        const BigRat back = BigRat::parse(to_decimal(x, places));
        const BigRat half_unit(BigInt(5), BigInt::pow(BigInt(10), places + 1));
        CHECK((back - x).abs() <= half_unit);
    }
}
