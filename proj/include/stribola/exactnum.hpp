// Exact integers and rationals.
//
// BigInt is a thin value type over a GMP integer; BigRat keeps a reduced
// fraction with a positive denominator. Decimal rendering rounds to nearest
// with ties away from zero.
#ifndef STRIBOLA_EXACTNUM_HPP
#define STRIBOLA_EXACTNUM_HPP

#include <gmp.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace stribola {

class BigInt {
public:
    BigInt() { mpz_init(v_); }
    BigInt(long x) { mpz_init_set_si(v_, x); }  // NOLINT(google-explicit-constructor)
    BigInt(int x) : BigInt(static_cast<long>(x)) {}  // NOLINT(google-explicit-constructor)
    BigInt(unsigned long x) { mpz_init_set_ui(v_, x); }  // NOLINT(google-explicit-constructor)
    BigInt(unsigned x) : BigInt(static_cast<unsigned long>(x)) {}  // NOLINT(google-explicit-constructor)
    BigInt(long long x) : BigInt(static_cast<long>(x)) {}  // NOLINT(google-explicit-constructor)
    BigInt(unsigned long long x) : BigInt(static_cast<unsigned long>(x)) {}  // NOLINT(google-explicit-constructor)

    explicit BigInt(std::string_view decimal) {
        mpz_init(v_);
        std::string s(decimal);
        if (!s.empty() && s.front() == '+') s.erase(0, 1);
        if (s.empty() || mpz_set_str(v_, s.c_str(), 10) != 0) {
            mpz_clear(v_);
            throw std::invalid_argument("BigInt: malformed decimal '" + std::string(decimal) + "'");
        }
    }

    BigInt(const BigInt& o) { mpz_init_set(v_, o.v_); }
    BigInt(BigInt&& o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    BigInt& operator=(const BigInt& o) {
        if (this != &o) mpz_set(v_, o.v_);
        return *this;
    }
    BigInt& operator=(BigInt&& o) noexcept {
        mpz_swap(v_, o.v_);
        return *this;
    }
    ~BigInt() { mpz_clear(v_); }

    [[nodiscard]] mpz_srcptr raw() const noexcept { return v_; }
    [[nodiscard]] mpz_ptr raw() noexcept { return v_; }

    [[nodiscard]] int sign() const noexcept { return mpz_sgn(v_); }
    [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
    [[nodiscard]] bool is_one() const noexcept { return mpz_cmp_ui(v_, 1) == 0; }
    [[nodiscard]] bool is_odd() const noexcept { return mpz_odd_p(v_) != 0; }
    /// Number of bits in |x|; 0 for zero.
    [[nodiscard]] std::size_t bit_length() const noexcept {
        return is_zero() ? 0 : mpz_sizeinbase(v_, 2);
    }
    [[nodiscard]] bool fits_long() const noexcept { return mpz_fits_slong_p(v_) != 0; }
    [[nodiscard]] long to_long() const {
        if (!fits_long()) throw std::overflow_error("BigInt: value does not fit in long");
        return mpz_get_si(v_);
    }
    [[nodiscard]] double to_double() const noexcept { return mpz_get_d(v_); }

    [[nodiscard]] std::string to_string() const {
        std::string out(mpz_sizeinbase(v_, 10) + 2, '\0');
        mpz_get_str(out.data(), 10, v_);
        out.resize(std::char_traits<char>::length(out.c_str()));
        return out;
    }

    [[nodiscard]] BigInt abs() const {
        BigInt r;
        mpz_abs(r.v_, v_);
        return r;
    }
    void negate() noexcept { mpz_neg(v_, v_); }

    BigInt& operator+=(const BigInt& o) {
        mpz_add(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator-=(const BigInt& o) {
        mpz_sub(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator*=(const BigInt& o) {
        mpz_mul(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator*=(long o) {
        mpz_mul_si(v_, v_, o);
        return *this;
    }
    /// Truncating division (rounds toward zero), like built-in integers.
    BigInt& operator/=(const BigInt& o) {
        if (o.is_zero()) throw std::domain_error("BigInt: division by zero");
        mpz_tdiv_q(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator%=(const BigInt& o) {
        if (o.is_zero()) throw std::domain_error("BigInt: division by zero");
        mpz_tdiv_r(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator<<=(std::size_t bits) {
        mpz_mul_2exp(v_, v_, bits);
        return *this;
    }

    /// Add a*b in place without a temporary.
    void add_mul(const BigInt& a, const BigInt& b) { mpz_addmul(v_, a.v_, b.v_); }
    void sub_mul(const BigInt& a, const BigInt& b) { mpz_submul(v_, a.v_, b.v_); }

    /// Division known to be exact; undefined result otherwise.
    [[nodiscard]] BigInt divexact(const BigInt& d) const {
        BigInt r;
        mpz_divexact(r.v_, v_, d.v_);
        return r;
    }
    [[nodiscard]] bool divisible_by(const BigInt& d) const {
        return mpz_divisible_p(v_, d.v_) != 0;
    }

    [[nodiscard]] BigInt operator-() const {
        BigInt r;
        mpz_neg(r.v_, v_);
        return r;
    }

    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_mul(r.v_, a.v_, b.v_);
        return r;
    }
    friend BigInt operator/(BigInt a, const BigInt& b) { return a /= b; }
    friend BigInt operator%(BigInt a, const BigInt& b) { return a %= b; }
    friend BigInt operator<<(BigInt a, std::size_t bits) { return a <<= bits; }

    friend bool operator==(const BigInt& a, const BigInt& b) noexcept { return mpz_cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) noexcept {
        const int c = mpz_cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend bool operator==(const BigInt& a, long b) noexcept { return mpz_cmp_si(a.v_, b) == 0; }
    friend std::strong_ordering operator<=>(const BigInt& a, long b) noexcept {
        const int c = mpz_cmp_si(a.v_, b);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const BigInt& x) { return os << x.to_string(); }

    [[nodiscard]] static BigInt pow(const BigInt& base, unsigned long e) {
        BigInt r;
        mpz_pow_ui(r.v_, base.v_, e);
        return r;
    }

private:
    mpz_t v_;
};

/// Nonnegative greatest common divisor; gcd(0, 0) = 0.
inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.raw(), a.raw(), b.raw());
    return r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.raw(), a.raw(), b.raw());
    return r;
}

/// lcm(1, 2, ..., n); 1 for n = 0.
inline BigInt lcm_upto(unsigned long n) {
    BigInt r(1);
    // product tree over prime powers would be faster; linear is fine at n ~ 1e5
    for (unsigned long i = 2; i <= n; ++i) mpz_lcm_ui(r.raw(), r.raw(), i);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.raw(), n, k);
    return r;
}

class BigRat {
public:
    BigRat() : num_(0), den_(1) {}
    BigRat(long x) : num_(x), den_(1) {}  // NOLINT(google-explicit-constructor)
    BigRat(int x) : num_(x), den_(1) {}   // NOLINT(google-explicit-constructor)
    BigRat(BigInt x) : num_(std::move(x)), den_(1) {}  // NOLINT(google-explicit-constructor)
    BigRat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("BigRat: zero denominator");
        normalize();
    }

    /// Parses "p", "p/q" or a decimal "[-]i.fff".
    static BigRat parse(std::string_view text) {
        if (const auto slash = text.find('/'); slash != std::string_view::npos) {
            return {BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1))};
        }
        if (const auto dot = text.find('.'); dot != std::string_view::npos) {
            std::string digits(text.substr(0, dot));
            const auto frac = text.substr(dot + 1);
            digits.append(frac);
            if (digits.empty() || digits == "-" || digits == "+") {
                throw std::invalid_argument("BigRat: malformed decimal");
            }
            return {BigInt(digits), BigInt::pow(BigInt(10), frac.size())};
        }
        return BigRat(BigInt(text));
    }

    [[nodiscard]] const BigInt& num() const noexcept { return num_; }
    [[nodiscard]] const BigInt& den() const noexcept { return den_; }
    [[nodiscard]] int sign() const noexcept { return num_.sign(); }
    [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }

    [[nodiscard]] std::string to_string() const {
        return den_.is_one() ? num_.to_string() : num_.to_string() + "/" + den_.to_string();
    }
    [[nodiscard]] double to_double() const {
        mpq_t q;
        mpq_init(q);
        mpz_set(mpq_numref(q), num_.raw());
        mpz_set(mpq_denref(q), den_.raw());
        const double d = mpq_get_d(q);
        mpq_clear(q);
        return d;
    }

    [[nodiscard]] BigRat abs() const { return {num_.abs(), den_, Reduced{}}; }
    [[nodiscard]] BigRat reciprocal() const {
        if (num_.is_zero()) throw std::domain_error("BigRat: reciprocal of zero");
        return num_.sign() > 0 ? BigRat(den_, num_, Reduced{}) : BigRat(-den_, -num_, Reduced{});
    }
    [[nodiscard]] BigRat operator-() const { return {-num_, den_, Reduced{}}; }

    friend BigRat operator+(const BigRat& a, const BigRat& b) {
        if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend BigRat operator-(const BigRat& a, const BigRat& b) {
        if (a.den_ == b.den_) return {a.num_ - b.num_, a.den_};
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend BigRat operator*(const BigRat& a, const BigRat& b) {
        // cross-cancel first so the products stay small
        const BigInt g1 = gcd(a.num_, b.den_);
        const BigInt g2 = gcd(b.num_, a.den_);
        return {a.num_.divexact(g1) * b.num_.divexact(g2), a.den_.divexact(g2) * b.den_.divexact(g1),
                Reduced{}};
    }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        if (b.is_zero()) throw std::domain_error("BigRat: division by zero");
        return a * b.reciprocal();
    }
    BigRat& operator+=(const BigRat& o) { return *this = *this + o; }
    BigRat& operator-=(const BigRat& o) { return *this = *this - o; }
    BigRat& operator*=(const BigRat& o) { return *this = *this * o; }
    BigRat& operator/=(const BigRat& o) { return *this = *this / o; }

    friend bool operator==(const BigRat& a, const BigRat& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const BigRat& a, const BigRat& b) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigRat& x) { return os << x.to_string(); }

    static BigRat pow(const BigRat& base, long e) {
        if (e < 0) return pow(base.reciprocal(), -e);
        const auto ue = static_cast<unsigned long>(e);
        return {BigInt::pow(base.num_, ue), BigInt::pow(base.den_, ue), Reduced{}};
    }

private:
    struct Reduced {};
    BigRat(BigInt num, BigInt den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize() {
        if (den_.sign() < 0) {
            num_.negate();
            den_.negate();
        }
        const BigInt g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_.divexact(g);
            den_ = den_.divexact(g);
        }
    }

    BigInt num_;
    BigInt den_;
};

enum class Rounding { Nearest, Down, Up };

/// x rounded to `places` fractional digits: Nearest rounds ties away from zero,
/// Down and Up round toward -inf and +inf. Trailing zeros are kept; a value
/// that rounds to zero carries no sign.
inline std::string to_decimal(const BigRat& x, std::size_t places, Rounding mode = Rounding::Nearest) {
    if (places == 0) throw std::invalid_argument("to_decimal: places must be >= 1");
    BigInt scaled = x.num().abs() * BigInt::pow(BigInt(10), places);
    BigInt q;
    BigInt r;
    mpz_tdiv_qr(q.raw(), r.raw(), scaled.raw(), x.den().raw());
    // q is |x| truncated; decide whether the magnitude goes up by one unit
    bool bump = false;
    if (mode == Rounding::Nearest) {
        r <<= 1;
        bump = r >= x.den();
    } else if (!r.is_zero()) {
        bump = (mode == Rounding::Up) == (x.sign() > 0);
    }
    if (bump) q += BigInt(1);

    std::string digits = q.to_string();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out;
    if (x.sign() < 0 && !q.is_zero()) out.push_back('-');
    out.append(digits, 0, digits.size() - places);
    out.push_back('.');
    out.append(digits, digits.size() - places, places);
    return out;
}

}  // namespace stribola

#endif  // STRIBOLA_EXACTNUM_HPP
