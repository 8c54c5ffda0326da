// Arithmetic observations on kappa_n = mu_n / nu_n and on the primitive
// numerators d_n (q_n - q_n(0)). Reports are data; nothing here throws on a
// deviation.
#ifndef STRIBOLA_OBSERVATIONS_HPP
#define STRIBOLA_OBSERVATIONS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stribola/exactnum.hpp"
#include "stribola/iterates.hpp"

namespace stribola {

struct FractionPair {
    std::size_t n = 0;
    BigInt mu;
    BigInt nu;
};

inline std::vector<FractionPair> fraction_pairs(std::span<const BigRat> kappas) {
    std::vector<FractionPair> out;
    out.reserve(kappas.size());
    for (std::size_t n = 0; n < kappas.size(); ++n) out.push_back({n, kappas[n].num(), kappas[n].den()});
    return out;
}

struct Factorization {
    std::vector<std::pair<unsigned long, unsigned>> primes;
    /// Left over after trial division (1 when fully factored).
    BigInt rest{1};

    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (const auto& [p, e] : primes) {
            if (!s.empty()) s += " * ";
            s += std::to_string(p);
            if (e > 1) s += "^" + std::to_string(e);
        }
        if (!rest.is_one()) {
            if (!s.empty()) s += " * ";
            s += "[" + rest.to_string() + "]";
        }
        return s.empty() ? "1" : s;
    }
};

/// Trial division by every d <= limit.
inline Factorization factor_small(const BigInt& value, unsigned long limit = 1'000'000) {
    Factorization f;
    BigInt x = value.abs();
    for (unsigned long d = 2; d <= limit && !x.is_one() && !x.is_zero(); d += (d == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(x.raw(), d) != 0) {
            mpz_divexact_ui(x.raw(), x.raw(), d);
            ++e;
        }
        if (e > 0) f.primes.emplace_back(d, e);
        if (mpz_cmp_ui(x.raw(), d * d) < 0 && !x.is_one()) {
            // remaining cofactor is prime
            if (x.fits_long() && static_cast<unsigned long>(x.to_long()) <= limit) {
                f.primes.emplace_back(static_cast<unsigned long>(x.to_long()), 1);
                x = BigInt(1);
            }
            break;
        }
    }
    f.rest = std::move(x);
    return f;
}

enum class ObsStatus { Holds, Exception, Fails };

inline const char* to_string(ObsStatus s) {
    switch (s) {
        case ObsStatus::Holds: return "holds";
        case ObsStatus::Exception: return "exception";
        case ObsStatus::Fails: return "fails";
    }
    return "?";
}

struct ObsEntry {
    std::size_t n = 0;
    std::string quantity;
    BigInt value;
    ObsStatus status = ObsStatus::Holds;
    /// For divisibility: the cofactor and gcd with cofactor * gcd = mu_n.
    BigInt cofactor{1};
    BigInt gcd_part{1};
    std::string note;
};

struct ObservationReport {
    std::string title;
    std::vector<ObsEntry> entries;

    [[nodiscard]] std::vector<std::size_t> exceptions() const {
        std::vector<std::size_t> out;
        for (const auto& e : entries) {
            if (e.status != ObsStatus::Holds) out.push_back(e.n);
        }
        return out;
    }
    [[nodiscard]] std::string summary() const {
        std::size_t holds = 0;
        for (const auto& e : entries) holds += e.status == ObsStatus::Holds ? 1 : 0;
        return title + ": " + std::to_string(holds) + "/" + std::to_string(entries.size()) + " hold";
    }
};

/// gcd(mu_n, mu_{n+1}) for every consecutive pair.
inline ObservationReport obs1_coprimality(std::span<const BigRat> kappas) {
    ObservationReport rep{"gcd(mu_n, mu_{n+1}) = 1", {}};
    for (std::size_t n = 0; n + 1 < kappas.size(); ++n) {
        BigInt g = gcd(kappas[n].num(), kappas[n + 1].num());
        const bool ok = g.is_one();
        std::string note = ok ? "" : factor_small(g).to_string();
        rep.entries.push_back({n, "gcd(mu_n,mu_n+1)", std::move(g), ok ? ObsStatus::Holds : ObsStatus::Exception,
                               BigInt(1), BigInt(1), std::move(note)});
    }
    return rep;
}

/// mu_n / gcd(mu_n, nu_{n+1}) for every n; 1 means mu_n divides nu_{n+1}.
inline ObservationReport obs1_divisibility(std::span<const BigRat> kappas) {
    ObservationReport rep{"mu_n | nu_{n+1}", {}};
    for (std::size_t n = 0; n + 1 < kappas.size(); ++n) {
        const BigInt& mu = kappas[n].num();
        BigInt g = gcd(mu, kappas[n + 1].den());
        BigInt cof = mu.divexact(g);
        const bool ok = cof.is_one();
        std::string note = ok ? "" : factor_small(cof).to_string();
        rep.entries.push_back({n, "mu_n/gcd(mu_n,nu_n+1)", cof, ok ? ObsStatus::Holds : ObsStatus::Exception, cof,
                               std::move(g), std::move(note)});
    }
    return rep;
}

/// No zero coefficient and no three consecutive coefficients of one sign among
/// c_{i-1}, c_i, c_{i+1} for 2^floor(n/2) < i < F_{n+1}, where sum c_i X^i = d_n (q_n - q_n(0)).
inline ObsEntry obs2_sign_pattern(const IterateRecord& rec) {
    const auto c = rec.q.prim.coeffs();
    const std::size_t lo = expected_valuation(rec.n);
    const std::size_t hi = expected_degree(rec.n);
    ObsEntry e{rec.n, "sign pattern", BigInt(0), ObsStatus::Holds, BigInt(1), BigInt(1), {}};
    std::size_t checked = 0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const int a = i - 1 < c.size() ? c[i - 1].sign() : 0;
        const int b = i < c.size() ? c[i].sign() : 0;
        const int d = i + 1 < c.size() ? c[i + 1].sign() : 0;
        ++checked;
        const bool zero = a * b == 0 || b * d == 0;
        const bool same_sign_run = a * b > 0 && b * d > 0;
        if (zero || same_sign_run) {
            e.status = ObsStatus::Fails;
            e.note = (zero ? "zero product at i = " : "three equal signs at i = ") + std::to_string(i);
            break;
        }
    }
    e.value = BigInt(static_cast<unsigned long>(checked));
    if (e.status == ObsStatus::Holds) e.note = std::to_string(checked) + " interior indices";
    return e;
}

inline ObservationReport obs2_sign_pattern(std::span<const IterateRecord> records) {
    ObservationReport rep{"sign pattern of d_n (q_n - q_n(0))", {}};
    for (const auto& r : records) rep.entries.push_back(obs2_sign_pattern(r));
    return rep;
}

}  // namespace stribola

#endif  // STRIBOLA_OBSERVATIONS_HPP
