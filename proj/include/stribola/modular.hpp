// kappa_0..kappa_N without the exact q_n: run the recurrence modulo many
// NTT-friendly 62-bit primes, then rebuild each kappa_n by CRT and rational
// reconstruction.
//
// Only (i+1) and kappa_j are ever inverted, so as long as p exceeds every
// degree and no kappa_j (j < N) vanishes mod p, all intermediate values live
// in Z localised at p and the residues are the true reductions. A prime where
// some kappa_j vanishes is reported as bad and skipped.
#ifndef STRIBOLA_MODULAR_HPP
#define STRIBOLA_MODULAR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stribola/exactnum.hpp"
#include "stribola/iterates.hpp"

namespace stribola::modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (const u64 sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % sp == 0) return n == sp;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (const u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline constexpr unsigned kTwoAdicity = 20;

/// Primes c * 2^20 + 1 below 2^62, largest first; `skip` of them are passed over.
class PrimeSource {
public:
    explicit PrimeSource(std::size_t skip = 0) {
        for (std::size_t i = 0; i < skip; ++i) next();
    }
    u64 next() {
        while (true) {
            const u64 p = (c_ << kTwoAdicity) + 1;
            --c_;
            if (is_prime(p)) return p;
        }
    }

private:
    u64 c_ = ((u64{1} << 62) >> kTwoAdicity) - 1;
};

/// Montgomery arithmetic modulo an odd p < 2^62, R = 2^64.
class Montgomery {
public:
    explicit Montgomery(u64 p) : p_(p) {
        u64 inv = p;
        for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
        neg_inv_ = ~inv + 1;
        r2_ = static_cast<u64>((static_cast<u128>(1) << 64) % p);
        r2_ = mulmod(r2_, r2_, p);
    }
    [[nodiscard]] u64 p() const noexcept { return p_; }
    [[nodiscard]] u64 mul(u64 a, u64 b) const noexcept {
        const u128 t = static_cast<u128>(a) * b;
        const u64 m = static_cast<u64>(t) * neg_inv_;
        const u64 u = static_cast<u64>((t + static_cast<u128>(m) * p_) >> 64);
        return u >= p_ ? u - p_ : u;
    }
    [[nodiscard]] u64 to(u64 a) const noexcept { return mul(a % p_, r2_); }
    [[nodiscard]] u64 from(u64 a) const noexcept { return mul(a, 1); }
    [[nodiscard]] u64 add(u64 a, u64 b) const noexcept {
        const u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    [[nodiscard]] u64 pow(u64 a, u64 e) const noexcept {
        u64 r = to(1);
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    [[nodiscard]] u64 inv(u64 a) const noexcept { return pow(a, p_ - 2); }

private:
    u64 p_;
    u64 neg_inv_ = 0;
    u64 r2_ = 0;
};

/// Cyclic NTT over Z/p with p = c * 2^20 + 1, values in Montgomery form.
/// Forward is decimation in frequency (output bit-reversed), inverse is
/// decimation in time (input bit-reversed), so no permutation pass is needed.
class Ntt {
public:
    Ntt(const Montgomery& m, std::size_t max_log) : m_(m), max_log_(max_log) {
        if (max_log > kTwoAdicity) throw std::invalid_argument("Ntt: transform too long for the prime");
        const u64 p = m.p();
        // a 2^20-th root of unity is primitive iff its 2^19-th power is -1
        u64 w = 0;
        for (u64 g = 3;; ++g) {
            w = powmod(g, (p - 1) >> kTwoAdicity, p);
            if (powmod(w, u64{1} << (kTwoAdicity - 1), p) == p - 1) break;
        }
        // roots_[h + k] = omega_{2h}^k for every power of two h < 2^max_log
        const std::size_t full = std::size_t{1} << max_log;
        roots_.assign(full, 0);
        iroots_.assign(full, 0);
        for (std::size_t h = 1; h < full; h <<= 1) {
            const u64 wh = m.to(powmod(w, (u64{1} << kTwoAdicity) / (2 * h), p));
            const u64 iwh = m.inv(wh);
            roots_[h] = iroots_[h] = m.to(1);
            for (std::size_t k = 1; k < h; ++k) {
                roots_[h + k] = m.mul(roots_[h + k - 1], wh);
                iroots_[h + k] = m.mul(iroots_[h + k - 1], iwh);
            }
        }
    }

    void forward(std::vector<u64>& a) const {
        const std::size_t n = a.size();
        for (std::size_t h = n / 2; h >= 1; h >>= 1) {
            const u64* tw = roots_.data() + h;
            for (std::size_t i = 0; i < n; i += 2 * h) {
                for (std::size_t k = 0; k < h; ++k) {
                    const u64 u = a[i + k];
                    const u64 v = a[i + k + h];
                    a[i + k] = m_.add(u, v);
                    a[i + k + h] = m_.mul(m_.sub(u, v), tw[k]);
                }
            }
        }
    }

    void inverse(std::vector<u64>& a) const {
        const std::size_t n = a.size();
        for (std::size_t h = 1; h < n; h <<= 1) {
            const u64* tw = iroots_.data() + h;
            for (std::size_t i = 0; i < n; i += 2 * h) {
                for (std::size_t k = 0; k < h; ++k) {
                    const u64 u = a[i + k];
                    const u64 v = m_.mul(a[i + k + h], tw[k]);
                    a[i + k] = m_.add(u, v);
                    a[i + k + h] = m_.sub(u, v);
                }
            }
        }
    }

    [[nodiscard]] std::vector<u64> convolve(std::vector<u64> a, std::vector<u64> b) const {
        if (a.empty() || b.empty()) return {};
        const std::size_t out = a.size() + b.size() - 1;
        std::size_t n = 1;
        while (n < out) n <<= 1;
        if (n > (std::size_t{1} << max_log_)) throw std::length_error("Ntt: product too long");
        a.resize(n);
        b.resize(n);
        forward(a);
        forward(b);
        // fold 1/n into the pointwise product
        const u64 ninv = m_.inv(m_.to(n));
        for (std::size_t i = 0; i < n; ++i) a[i] = m_.mul(m_.mul(a[i], b[i]), ninv);
        inverse(a);
        a.resize(out);
        return a;
    }

private:
    const Montgomery& m_;
    std::size_t max_log_;
    std::vector<u64> roots_;
    std::vector<u64> iroots_;
};

/// kappa_0..kappa_N mod p, or std::nullopt when p is bad for this N.
inline std::optional<std::vector<u64>> kappa_residues(u64 p, std::size_t max_n) {
    const Montgomery m(p);
    const std::size_t longest = expected_degree(max_n) + expected_degree(max_n - (max_n > 0 ? 1 : 0));
    if (u64{longest} + 2 >= p) return std::nullopt;
    std::size_t log = 1;
    while ((std::size_t{1} << log) < longest + 1) ++log;
    const Ntt ntt(m, std::max<std::size_t>(log, 1));

    // inverses of 1..longest+1 in Montgomery form
    std::vector<u64> inv(longest + 2);
    inv[1] = m.to(1);
    for (std::size_t i = 2; i < inv.size(); ++i) inv[i] = m.mul(m.to(p - p / i), inv[p % i]);

    const u64 one = m.to(1);
    std::vector<u64> kappa{one};
    if (max_n == 0) {
        return std::vector<u64>{1};
    }
    std::vector<u64> q_prev{0, one};         // q_0 = X
    std::vector<u64> q_cur{one, m.to(p - 1)};  // q_1 = 1 - X
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<u64> dq(q_cur.size() - 1);
        for (std::size_t i = 1; i < q_cur.size(); ++i) dq[i - 1] = m.mul(q_cur[i], m.to(i));
        std::vector<u64> r = ntt.convolve(std::move(dq), q_prev);
        u64 s = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = m.mul(r[i], inv[i + 1]);  // coefficient of X^{i+1} in Q_n
            s = m.add(s, r[i]);
        }
        const u64 kappa_n = n % 2 == 1 ? m.sub(0, s) : s;
        kappa.push_back(kappa_n);
        if (n == max_n) break;
        if (kappa_n == 0) return std::nullopt;
        const u64 f = m.sub(0, m.inv(kappa_n));
        std::vector<u64> q_next(r.size() + 1);
        q_next[0] = (n + 1) % 2 == 1 ? one : 0;
        for (std::size_t i = 0; i < r.size(); ++i) q_next[i + 1] = m.mul(r[i], f);
        q_prev = std::move(q_cur);
        q_cur = std::move(q_next);
    }
    std::vector<u64> out(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i) out[i] = m.from(kappa[i]);
    return out;
}

/// Residue of a rational modulo p (p must not divide the denominator).
inline u64 reduce(const BigRat& x, u64 p) {
    const u64 num = mpz_fdiv_ui(x.num().raw(), p);
    const u64 den = mpz_fdiv_ui(x.den().raw(), p);
    if (den == 0) throw std::domain_error("reduce: denominator divisible by p");
    return mulmod(num, powmod(den, p - 2, p), p);
}

/// a/b with |a|, b <= sqrt(m/2) and a/b = x (mod m), when one exists.
inline std::optional<BigRat> rational_reconstruct(const BigInt& x, const BigInt& m) {
    BigInt bound;
    {
        BigInt half = m;
        mpz_fdiv_q_2exp(half.raw(), half.raw(), 1);
        mpz_sqrt(bound.raw(), half.raw());
    }
    BigInt r0 = m, r1 = x % m;
    if (r1.sign() < 0) r1 += m;
    BigInt t0(0), t1(1), q, tmp;
    while (r1 > bound) {
        mpz_tdiv_qr(q.raw(), tmp.raw(), r0.raw(), r1.raw());
        r0 = std::move(r1);
        r1 = std::move(tmp);
        tmp = t0;
        tmp.sub_mul(q, t1);
        t0 = std::move(t1);
        t1 = std::move(tmp);
        tmp = BigInt();
    }
    if (t1.is_zero() || t1.abs() > bound) return std::nullopt;
    if (!gcd(r1, t1).is_one()) return std::nullopt;
    return BigRat(std::move(r1), std::move(t1));
}

struct ReconstructOptions {
    /// Extra primes a reconstruction must agree with before it is accepted.
    std::size_t confirm_primes = 4;
    /// Called after every prime with (primes used, kappas finished so far).
    std::function<void(std::size_t, std::size_t)> progress;
    /// Already-known leading values; they are checked, not recomputed.
    std::vector<BigRat> known;
};

/// Exact kappa_0..kappa_N from residues modulo as many primes as it takes.
inline std::vector<BigRat> kappas_multimodular(std::size_t max_n, const ReconstructOptions& opt = {}) {
    const std::size_t count = max_n + 1;
    std::vector<std::optional<BigRat>> done(count);
    std::vector<BigInt> acc(count);  // CRT images
    std::vector<std::size_t> pending(count, 0);  // primes seen since the candidate was formed
    std::vector<std::optional<BigRat>> candidate(count);
    std::vector<double> target_bits(count, 128.0);
    BigInt modulus(1);
    PrimeSource primes;
    std::size_t used = 0;
    std::size_t finished = 0;

    auto refresh_target = [&](std::size_t n) {
        // sizes grow roughly geometrically in n; extrapolate from the two previous values
        if (n >= 2 && done[n - 1] && done[n - 2]) {
            const auto bits = [&](std::size_t k) {
                return static_cast<double>(done[k]->num().bit_length() + done[k]->den().bit_length()) + 8.0;
            };
            const double ratio = std::max(1.2, bits(n - 1) / bits(n - 2));
            target_bits[n] = std::max(target_bits[n], bits(n - 1) * ratio * 1.05 + 64.0);
        }
    };

    while (finished < count) {
        const u64 p = primes.next();
        const auto res = kappa_residues(p, max_n);
        if (!res) continue;
        ++used;
        const u64 m_mod_p = mpz_fdiv_ui(modulus.raw(), p);
        const u64 m_inv = powmod(m_mod_p, p - 2, p);
        for (std::size_t n = 0; n < count; ++n) {
            if (done[n]) continue;
            const u64 r = (*res)[n];
            if (candidate[n]) {
                if (reduce(*candidate[n], p) == r) {
                    if (++pending[n] >= opt.confirm_primes) {
                        done[n] = std::move(candidate[n]);
                        ++finished;
                        acc[n] = BigInt();
                        continue;
                    }
                } else {
                    candidate[n].reset();
                    pending[n] = 0;
                    target_bits[n] *= 1.25;
                }
            }
            // x += M * ((r - x) / M mod p)
            const u64 x_mod_p = mpz_fdiv_ui(acc[n].raw(), p);
            const u64 delta = mulmod((r + p - x_mod_p) % p, m_inv, p);
            acc[n].add_mul(modulus, BigInt(static_cast<unsigned long>(delta)));
        }
        modulus *= BigInt(static_cast<unsigned long>(p));
        for (std::size_t n = 0; n < count; ++n) {
            if (done[n] || candidate[n]) continue;
            refresh_target(n);
            if (static_cast<double>(modulus.bit_length()) < 2.0 * target_bits[n]) continue;
            candidate[n] = rational_reconstruct(acc[n], modulus);
            pending[n] = 0;
            if (!candidate[n]) target_bits[n] *= 1.25;
        }
        if (opt.progress) opt.progress(used, finished);
    }

    std::vector<BigRat> out;
    out.reserve(count);
    for (auto& d : done) out.push_back(std::move(*d));
    for (std::size_t n = 0; n < opt.known.size() && n < out.size(); ++n) {
        if (opt.known[n] != out[n]) {
            throw InconsistencyError("multimodular kappa_" + std::to_string(n) + " disagrees with the exact value");
        }
    }
    return out;
}

}  // namespace stribola::modular

#endif  // STRIBOLA_MODULAR_HPP
