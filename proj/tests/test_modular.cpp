#include <catch_amalgamated.hpp>

#include <random>

#include "stribola/modular.hpp"

using namespace stribola;
using namespace stribola::modular;

namespace {

const IterateCache& cache_to_13() {
    static const IterateCache c = [] {
        IterateCache cache;
        generate(13, cache);
        return cache;
    }();
    return c;
}

}  // namespace

TEST_CASE("primality test agrees with trial division", "[modular]") {
    auto slow = [](u64 n) {
        if (n < 2) return false;
        for (u64 d = 2; d * d <= n; ++d) {
            if (n % d == 0) return false;
        }
        return true;
    };
    for (u64 n = 0; n < 5000; ++n) CHECK(is_prime(n) == slow(n));
    CHECK(is_prime(4611686018427387847ULL));  // largest prime below 2^62
    CHECK_FALSE(is_prime(3215031751ULL));     // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("prime source yields distinct NTT primes below 2^62", "[modular]") {
    PrimeSource src;
    u64 last = ~u64{0};
    for (int i = 0; i < 20; ++i) {
        const u64 p = src.next();
        CHECK(p < last);
        CHECK(p < (u64{1} << 62));
        CHECK(((p - 1) & ((u64{1} << kTwoAdicity) - 1)) == 0);
        CHECK(is_prime(p));
        last = p;
    }
}

TEST_CASE("Montgomery products match 128-bit reduction", "[modular]") {
    const u64 p = PrimeSource().next();
    const Montgomery m(p);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
        const u64 a = rng() % p;
        const u64 b = rng() % p;
        CHECK(m.from(m.mul(m.to(a), m.to(b))) == mulmod(a, b, p));
        CHECK(m.from(m.add(m.to(a), m.to(b))) == (a + b) % p);
        CHECK(m.from(m.sub(m.to(a), m.to(b))) == (a + p - b) % p);
    }
    const u64 x = m.to(123456789);
    CHECK(m.from(m.mul(x, m.inv(x))) == 1);
}

TEST_CASE("NTT convolution matches the naive product", "[modular]") {
    const u64 p = PrimeSource(3).next();
    const Montgomery m(p);
    const Ntt ntt(m, 10);
    std::mt19937_64 rng(9);
    for (const std::size_t la : {1u, 2u, 17u, 300u}) {
        for (const std::size_t lb : {1u, 5u, 200u}) {
            std::vector<u64> a(la), b(lb);
            for (auto& v : a) v = rng() % p;
            for (auto& v : b) v = rng() % p;
            std::vector<u64> want(la + lb - 1, 0);
            for (std::size_t i = 0; i < la; ++i) {
                for (std::size_t j = 0; j < lb; ++j) want[i + j] = (want[i + j] + mulmod(a[i], b[j], p)) % p;
            }
            std::vector<u64> am(a), bm(b);
            for (auto& v : am) v = m.to(v);
            for (auto& v : bm) v = m.to(v);
            std::vector<u64> got = ntt.convolve(am, bm);
            for (auto& v : got) v = m.from(v);
            CHECK(got == want);
        }
    }
}

TEST_CASE("residues match reductions of the exact values", "[modular]") {
    const auto& c = cache_to_13();
    PrimeSource src(100);
    for (int i = 0; i < 3; ++i) {
        const u64 p = src.next();
        const auto res = kappa_residues(p, 13);
        REQUIRE(res.has_value());
        REQUIRE(res->size() == 14);
        for (std::size_t n = 0; n <= 13; ++n) CHECK((*res)[n] == reduce(c[n].kappa, p));
    }
}

TEST_CASE("rational reconstruction", "[modular]") {
    const BigRat x = BigRat::parse("24941/89148");
    BigInt m(1);
    BigInt image(0);
    PrimeSource src;
    for (int i = 0; i < 2; ++i) {
        const u64 p = src.next();
        const u64 r = reduce(x, p);
        // CRT by brute lifting: image + m * t with t chosen mod p
        const u64 t = mulmod((r + p - mpz_fdiv_ui(image.raw(), p)) % p, powmod(mpz_fdiv_ui(m.raw(), p), p - 2, p), p);
        image += m * BigInt(static_cast<unsigned long>(t));
        m *= BigInt(static_cast<unsigned long>(p));
    }
    CHECK(rational_reconstruct(image, m) == std::optional<BigRat>(x));
    // a modulus far too small for the fraction yields nothing or a different value
    const auto small = rational_reconstruct(BigInt(12345), BigInt(99991));
    CHECK((!small || *small != x));
}

TEST_CASE("multimodular values equal the exact ones", "[modular]") {
    const auto& c = cache_to_13();
    const auto got = kappas_multimodular(13);
    REQUIRE(got.size() == 14);
    for (std::size_t n = 0; n <= 13; ++n) CHECK(got[n] == c[n].kappa);

    ReconstructOptions wrong;
    wrong.known = {BigRat(1), BigRat(BigInt(1), BigInt(3))};
    CHECK_THROWS_AS(kappas_multimodular(4, wrong), InconsistencyError);
}
