// Dense univariate polynomials over BigInt / BigRat.
#ifndef STRIBOLA_POLYQ_HPP
#define STRIBOLA_POLYQ_HPP

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stribola/exactnum.hpp"

namespace stribola {

/// Coefficients indexed by power of X; the highest stored coefficient is
/// nonzero, so the zero polynomial stores nothing.
template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

    static Poly monomial(T coeff, std::size_t power) {
        std::vector<T> c(power + 1);
        c[power] = std::move(coeff);
        return Poly(std::move(c));
    }

    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
    /// std::nullopt stands for -infinity.
    [[nodiscard]] std::optional<std::size_t> degree() const noexcept {
        if (c_.empty()) return std::nullopt;
        return c_.size() - 1;
    }
    [[nodiscard]] std::span<const T> coeffs() const noexcept { return c_; }
    /// Coefficient of X^i; zero above the degree.
    [[nodiscard]] T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
    [[nodiscard]] const T& leading() const { return c_.back(); }

    /// Hands the coefficient vector out; leaves *this as zero.
    [[nodiscard]] std::vector<T> release() && {
        std::vector<T> out;
        out.swap(c_);
        return out;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const T& s) {
        if (s == T(0)) {
            c_.clear();
            return *this;
        }
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const T& s) { return a *= s; }
    [[nodiscard]] Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<BigRat>;

/// num / den with a single positive integer denominator (not necessarily reduced).
struct FracPoly {
    IntPoly num;
    BigInt den{1};

    [[nodiscard]] RatPoly to_rat() const {
        std::vector<BigRat> c;
        c.reserve(num.size());
        for (const auto& x : num.coeffs()) c.emplace_back(x, den);
        return RatPoly(std::move(c));
    }
};

template <class T>
std::optional<std::size_t> valuation(const Poly<T>& p) {
    const auto c = p.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] == T(0))) return i;
    }
    return std::nullopt;
}

template <class T>
Poly<T> derivative(const Poly<T>& p) {
    const auto c = p.coeffs();
    if (c.size() <= 1) return {};
    std::vector<T> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T(static_cast<long>(i));
    return Poly<T>(std::move(d));
}

/// Antiderivative with zero constant term.
inline RatPoly integrate0(const RatPoly& p) {
    const auto c = p.coeffs();
    if (c.empty()) return {};
    std::vector<BigRat> out(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) out[i + 1] = c[i] / BigRat(static_cast<long>(i + 1));
    return RatPoly(std::move(out));
}

/// Antiderivative of an integer polynomial over the common denominator lcm(1..deg+1).
inline FracPoly integrate0(const IntPoly& p) {
    const auto c = p.coeffs();
    if (c.empty()) return {};
    BigInt l = lcm_upto(c.size());
    std::vector<BigInt> out(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        BigInt w = l;
        mpz_divexact_ui(w.raw(), w.raw(), i + 1);
        out[i + 1] = c[i] * w;
    }
    return {IntPoly(std::move(out)), std::move(l)};
}

/// Content (>= 1, gcd of the coefficients) and primitive part, p = content * primitive.
/// The sign stays with the primitive part.
inline std::pair<BigInt, IntPoly> content_primitive(const IntPoly& p) {
    if (p.is_zero()) throw std::domain_error("content_primitive: zero polynomial");
    BigInt g;
    for (const auto& x : p.coeffs()) {
        mpz_gcd(g.raw(), g.raw(), x.raw());
        if (g.is_one()) return {std::move(g), p};
    }
    std::vector<BigInt> prim;
    prim.reserve(p.size());
    for (const auto& x : p.coeffs()) prim.push_back(x.divexact(g));
    return {std::move(g), IntPoly(std::move(prim))};
}

inline BigInt content(const IntPoly& p) {
    BigInt g;
    for (const auto& x : p.coeffs()) {
        mpz_gcd(g.raw(), g.raw(), x.raw());
        if (g.is_one()) break;
    }
    return g;
}

inline BigInt eval_at_one(const IntPoly& p) {
    BigInt s;
    for (const auto& x : p.coeffs()) s += x;
    return s;
}

/// Exact Horner evaluation at a rational point.
inline BigRat evaluate(const IntPoly& p, const BigRat& x) {
    const auto c = p.coeffs();
    if (c.empty()) return {};
    if (x.den().is_one()) {
        BigInt acc = c.back();
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            acc *= x.num();
            acc += c[i];
        }
        return BigRat(std::move(acc));
    }
    // homogeneous form: sum c_i a^i b^(D-i) over b^D
    BigInt acc = c.back();
    BigInt bpow(1);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        bpow *= x.den();
        acc *= x.num();
        acc.add_mul(c[i], bpow);
    }
    return {std::move(acc), std::move(bpow)};
}

inline BigRat evaluate(const RatPoly& p, const BigRat& x) {
    const auto c = p.coeffs();
    if (c.empty()) return {};
    BigRat acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

inline RatPoly to_rat(const IntPoly& p) {
    std::vector<BigRat> c(p.coeffs().begin(), p.coeffs().end());
    return RatPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Multiplication

enum class MulAlgorithm { Auto, Schoolbook, Karatsuba, Kronecker };

struct MulOptions {
    MulAlgorithm algorithm = MulAlgorithm::Auto;
    /// Operands shorter than this (in coefficients) use schoolbook.
    std::size_t schoolbook_threshold = 16;
};

namespace detail {

using CoeffSpan = std::span<const BigInt>;

inline void schoolbook_into(CoeffSpan a, CoeffSpan b, std::vector<BigInt>& out, std::size_t offset) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[offset + i + j].add_mul(a[i], b[j]);
    }
}

inline std::vector<BigInt> karatsuba(CoeffSpan a, CoeffSpan b, std::size_t threshold) {
    std::vector<BigInt> out(a.size() + b.size() - 1);
    if (std::min(a.size(), b.size()) < std::max<std::size_t>(threshold, 2)) {
        schoolbook_into(a, b, out, 0);
        return out;
    }
    const std::size_t k = std::max(a.size(), b.size()) / 2;
    if (a.size() <= k || b.size() <= k) {
        // lopsided: split only the longer operand
        auto [lng, sht] = a.size() > b.size() ? std::pair{a, b} : std::pair{b, a};
        auto lo = karatsuba(lng.first(k), sht, threshold);
        auto hi = karatsuba(lng.subspan(k), sht, threshold);
        for (std::size_t i = 0; i < lo.size(); ++i) out[i] += lo[i];
        for (std::size_t i = 0; i < hi.size(); ++i) out[k + i] += hi[i];
        return out;
    }
    const auto a0 = a.first(k), a1 = a.subspan(k);
    const auto b0 = b.first(k), b1 = b.subspan(k);
    auto z0 = karatsuba(a0, b0, threshold);
    auto z2 = karatsuba(a1, b1, threshold);
    std::vector<BigInt> as(std::max(a0.size(), a1.size()));
    std::vector<BigInt> bs(std::max(b0.size(), b1.size()));
    for (std::size_t i = 0; i < a0.size(); ++i) as[i] += a0[i];
    for (std::size_t i = 0; i < a1.size(); ++i) as[i] += a1[i];
    for (std::size_t i = 0; i < b0.size(); ++i) bs[i] += b0[i];
    for (std::size_t i = 0; i < b1.size(); ++i) bs[i] += b1[i];
    auto z1 = karatsuba(as, bs, threshold);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
    for (std::size_t i = 0; i < z1.size() && k + i < out.size(); ++i) out[k + i] += z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * k + i] += z2[i];
    return out;
}

inline std::size_t max_bits(CoeffSpan a) {
    std::size_t m = 0;
    for (const auto& x : a) m = std::max(m, x.bit_length());
    return m;
}

/// Packs sum c_i * 2^(64*slot*i) into one integer.
inline BigInt kronecker_pack(CoeffSpan a, std::size_t slot) {
    const std::size_t total = a.size() * slot;
    BigInt pos;
    BigInt neg;
    mp_limb_t* pp = mpz_limbs_write(pos.raw(), static_cast<mp_size_t>(total));
    mp_limb_t* np = mpz_limbs_write(neg.raw(), static_cast<mp_size_t>(total));
    std::memset(pp, 0, total * sizeof(mp_limb_t));
    std::memset(np, 0, total * sizeof(mp_limb_t));
    bool any_neg = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto n = mpz_size(a[i].raw());
        if (n == 0) continue;
        mp_limb_t* dst = (a[i].sign() > 0 ? pp : np) + i * slot;
        any_neg = any_neg || a[i].sign() < 0;
        std::memcpy(dst, mpz_limbs_read(a[i].raw()), n * sizeof(mp_limb_t));
    }
    mpz_limbs_finish(pos.raw(), static_cast<mp_size_t>(total));
    mpz_limbs_finish(neg.raw(), static_cast<mp_size_t>(total));
    if (any_neg) pos -= neg;
    return pos;
}

/// Inverse of kronecker_pack for balanced digits |c_i| < 2^(64*slot - 1).
inline std::vector<BigInt> kronecker_unpack(const BigInt& packed, std::size_t count, std::size_t slot) {
    std::vector<BigInt> out(count);
    const int s = packed.sign();
    if (s == 0) return out;
    const mp_limb_t* src = mpz_limbs_read(packed.raw());
    const std::size_t have = mpz_size(packed.raw());
    const std::size_t slot_bits = 64 * slot;
    const BigInt base = BigInt(1) << slot_bits;
    bool carry = false;
    for (std::size_t i = 0; i < count; ++i) {
        BigInt& v = out[i];
        const std::size_t begin = i * slot;
        if (begin < have) {
            const std::size_t n = std::min(slot, have - begin);
            mp_limb_t* dst = mpz_limbs_write(v.raw(), static_cast<mp_size_t>(n));
            std::memcpy(dst, src + begin, n * sizeof(mp_limb_t));
            mpz_limbs_finish(v.raw(), static_cast<mp_size_t>(n));
        }
        if (carry) mpz_add_ui(v.raw(), v.raw(), 1);
        carry = !v.is_zero() && mpz_sizeinbase(v.raw(), 2) >= slot_bits;
        if (carry) v -= base;
        if (s < 0) v.negate();
    }
    return out;
}

inline std::vector<BigInt> kronecker(CoeffSpan a, CoeffSpan b) {
    const std::size_t shorter = std::min(a.size(), b.size());
    std::size_t bound = max_bits(a) + max_bits(b) + BigInt(static_cast<unsigned long>(shorter)).bit_length() + 1;
    const std::size_t slot = bound / 64 + 1;
    const BigInt pa = kronecker_pack(a, slot);
    const BigInt pb = kronecker_pack(b, slot);
    BigInt prod = pa * pb;
    return kronecker_unpack(prod, a.size() + b.size() - 1, slot);
}

}  // namespace detail

inline IntPoly mul_schoolbook(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> out(a.size() + b.size() - 1);
    detail::schoolbook_into(a.coeffs(), b.coeffs(), out, 0);
    return IntPoly(std::move(out));
}

inline IntPoly mul(const IntPoly& a, const IntPoly& b, const MulOptions& opt = {}) {
    if (a.is_zero() || b.is_zero()) return {};
    auto alg = opt.algorithm;
    if (alg == MulAlgorithm::Auto) {
        alg = std::min(a.size(), b.size()) < opt.schoolbook_threshold ? MulAlgorithm::Schoolbook
                                                                      : MulAlgorithm::Kronecker;
    }
    switch (alg) {
        case MulAlgorithm::Schoolbook:
            return mul_schoolbook(a, b);
        case MulAlgorithm::Karatsuba:
            return IntPoly(detail::karatsuba(a.coeffs(), b.coeffs(), opt.schoolbook_threshold));
        default:
            return IntPoly(detail::kronecker(a.coeffs(), b.coeffs()));
    }
}

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) { return mul(a, b); }

// ---------------------------------------------------------------------------

/// constant + prim / denom, with prim primitive and free of a constant term.
///
/// normalize() always yields an exact representation; prim is primitive
/// whenever the scalar in front of the primitive part has numerator 1,
/// which is_normal() reports.
struct ScaledPoly {
    BigRat constant;
    BigInt denom{1};
    IntPoly prim;

    /// constant + factor * numerator, with the content of numerator pulled into
    /// the scalar before any big multiplication happens.
    static ScaledPoly from_scaled(BigRat constant, IntPoly numerator, const BigRat& factor) {
        auto c = std::move(numerator).release();
        if (!c.empty() && !c[0].is_zero()) {
            constant += factor * BigRat(c[0]);
            c[0] = BigInt(0);
        }
        IntPoly num(std::move(c));
        if (num.is_zero() || factor.is_zero()) return {std::move(constant), BigInt(1), {}};
        auto [g, prim] = content_primitive(num);
        const BigRat scale = factor * BigRat(std::move(g));
        if (scale.sign() < 0) prim = -prim;
        const BigInt lead = scale.num().abs();
        if (!lead.is_one()) prim *= lead;
        return {std::move(constant), scale.den(), std::move(prim)};
    }

    static ScaledPoly normalize(BigRat constant, IntPoly numerator, const BigInt& denominator) {
        if (denominator.sign() <= 0) throw std::domain_error("ScaledPoly: denominator must be positive");
        return from_scaled(std::move(constant), std::move(numerator), BigRat(BigInt(1), denominator));
    }

    [[nodiscard]] bool is_normal() const {
        if (prim.is_zero()) return denom.is_one();
        return denom.sign() > 0 && prim[0].is_zero() && content(prim).is_one();
    }
    [[nodiscard]] std::optional<std::size_t> degree() const {
        if (prim.is_zero()) return constant.is_zero() ? std::nullopt : std::optional<std::size_t>(0);
        return prim.degree();
    }
    /// Valuation of (q - q(0)).
    [[nodiscard]] std::optional<std::size_t> valuation() const { return stribola::valuation(prim); }

    [[nodiscard]] BigRat operator()(const BigRat& x) const {
        return constant + evaluate(prim, x) / BigRat(denom);
    }
    [[nodiscard]] FracPoly derivative() const { return {stribola::derivative(prim), denom}; }
    /// Integer numerator over denom: denom*constant must be integral.
    [[nodiscard]] IntPoly numerator_over_denom() const {
        if (!(constant * BigRat(denom)).den().is_one()) {
            throw std::domain_error("ScaledPoly: constant not integral over denominator");
        }
        auto c = IntPoly(prim).release();
        if (c.empty()) c.resize(1);
        c[0] += (constant * BigRat(denom)).num();
        return IntPoly(std::move(c));
    }
    [[nodiscard]] RatPoly to_rat() const {
        auto r = FracPoly{prim, denom}.to_rat();
        return r + RatPoly{constant};
    }

    friend bool operator==(const ScaledPoly&, const ScaledPoly&) = default;
};

}  // namespace stribola

#endif  // STRIBOLA_POLYQ_HPP
