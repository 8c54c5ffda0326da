// Derivatives b_n of the standard stribola at its fixpoint tau, as integer
// Laurent polynomials in tau, from the Faa di Bruno identities
//   sum_{k=1}^n B_{n,k}(b_1, ..., b_{n-k+1}) b_{k+1} = 0   (n >= 2).
#ifndef STRIBOLA_TAYLOR_HPP
#define STRIBOLA_TAYLOR_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stribola/exactnum.hpp"

namespace stribola {

/// Sparse sum of c_e * tau^e with integer c_e != 0.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(std::initializer_list<std::pair<const long, BigInt>> terms) {
        for (const auto& [e, c] : terms) add_term(e, c);
    }
    static LaurentPoly monomial(BigInt c, long e) {
        LaurentPoly p;
        p.add_term(e, c);
        return p;
    }
    static LaurentPoly constant(BigInt c) { return monomial(std::move(c), 0); }

    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] const std::map<long, BigInt>& terms() const noexcept { return terms_; }
    [[nodiscard]] std::optional<long> lowest_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }
    [[nodiscard]] BigInt coeff(long e) const {
        const auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    void add_term(long e, const BigInt& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        }
        return r;
    }
    friend LaurentPoly operator*(LaurentPoly a, const BigInt& s) {
        if (s.is_zero()) return {};
        for (auto& [e, c] : a.terms_) c *= s;
        return a;
    }
    [[nodiscard]] LaurentPoly operator-() const { return *this * BigInt(-1); }

    /// Exact division by c * tau^e; throws if some coefficient is not divisible by c.
    [[nodiscard]] LaurentPoly divide_monomial(const BigInt& c, long e) const {
        if (c.is_zero()) throw std::domain_error("LaurentPoly: division by zero monomial");
        LaurentPoly r;
        for (const auto& [ex, cx] : terms_) {
            if (!cx.divisible_by(c)) throw std::logic_error("LaurentPoly: inexact division");
            r.terms_.emplace(ex - e, cx.divexact(c));
        }
        return r;
    }

    static LaurentPoly pow(const LaurentPoly& base, std::size_t k) {
        LaurentPoly r = constant(BigInt(1));
        for (std::size_t i = 0; i < k; ++i) r = r * base;
        return r;
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    /// Descending powers, e.g. "3*t^-7 - t^-8"; `t` stands for tau.
    [[nodiscard]] std::string to_string(std::string_view var = "t") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            const BigInt mag = c.abs();
            if (first) {
                if (c.sign() < 0) os << '-';
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
            }
            first = false;
            if (e == 0) {
                os << mag;
                continue;
            }
            if (!mag.is_one()) os << mag << '*';
            os << var;
            if (e != 1) os << '^' << e;
        }
        return os.str();
    }

private:
    std::map<long, BigInt> terms_;
};

/// Partial exponential Bell polynomials B_{m,j}(x_1, x_2, ...) for m <= n,
/// memoised over B_{m,j} = sum_{i=1}^{m-j+1} C(m-1, i-1) x_i B_{m-i,j-1}.
/// Entry (m, j) only reads x_1 .. x_{m-j+1}.
class BellTable {
public:
    /// args[0] is x_1.
    BellTable(std::size_t n, std::span<const LaurentPoly> args) : n_(n), args_(args), rows_(n + 1) {
        for (std::size_t m = 0; m <= n; ++m) rows_[m].resize(m + 1);
    }

    /// B_{m,j}; zero for j > m or (j == 0, m > 0).
    [[nodiscard]] const LaurentPoly& at(std::size_t m, std::size_t j) {
        static const LaurentPoly zero;
        if (m > n_) throw std::out_of_range("BellTable: row beyond table");
        if (j > m || (j == 0 && m > 0)) return zero;
        auto& slot = rows_[m][j];
        if (slot) return *slot;
        if (m == 0) return *(slot = LaurentPoly::constant(BigInt(1)));
        if (m - j + 1 > args_.size()) throw std::invalid_argument("bell_eval: too few arguments");
        LaurentPoly acc;
        for (std::size_t i = 1; i <= m - j + 1; ++i) {
            const LaurentPoly& below = at(m - i, j - 1);
            if (below.is_zero()) continue;
            acc += (args_[i - 1] * below) * binomial(m - 1, i - 1);
        }
        return *(rows_[m][j] = std::move(acc));
    }

private:
    std::size_t n_;
    std::span<const LaurentPoly> args_;
    std::vector<std::vector<std::optional<LaurentPoly>>> rows_;
};

/// B_{n,k}(x_1, ..., x_{n-k+1}); requires 1 <= k <= n and at least n-k+1 arguments.
inline LaurentPoly bell_eval(std::size_t n, std::size_t k, std::span<const LaurentPoly> args) {
    if (k < 1 || k > n) throw std::invalid_argument("bell_eval: need 1 <= k <= n");
    if (args.size() < n - k + 1) throw std::invalid_argument("bell_eval: too few arguments");
    BellTable table(n, args.first(n - k + 1));
    return table.at(n, k);
}

/// b_0, ..., b_{up_to} with b_0 = tau, b_1 = -tau, b_2 = tau^-1.
inline std::vector<LaurentPoly> taylor_b(std::size_t up_to) {
    std::vector<LaurentPoly> b{LaurentPoly::monomial(BigInt(1), 1), LaurentPoly::monomial(BigInt(-1), 1),
                               LaurentPoly::monomial(BigInt(1), -1)};
    for (std::size_t n = 2; b.size() <= up_to; ++n) {
        const std::span<const LaurentPoly> args(b.data() + 1, b.size() - 1);  // b_1 .. b_n
        BellTable table(n, args);
        LaurentPoly acc;
        for (std::size_t k = 1; k + 1 <= n; ++k) acc += table.at(n, k) * b[k + 1];
        // b_{n+1} = -acc / b_1^n with b_1^n = (-1)^n tau^n
        b.push_back(acc.divide_monomial(BigInt(n % 2 == 0 ? -1 : 1), static_cast<long>(n)));
    }
    b.resize(up_to + 1);
    return b;
}

/// sum_{k=1}^n B_{n,k}(b_1, ...) b_{k+1}; zero for a consistent list (needs b_0..b_{n+1}).
inline LaurentPoly faa_di_bruno_residual(std::span<const LaurentPoly> b, std::size_t n) {
    if (n + 1 >= b.size()) throw std::out_of_range("faa_di_bruno_residual: need b_0..b_{n+1}");
    BellTable table(n, b.subspan(1, n));
    LaurentPoly acc;
    for (std::size_t k = 1; k <= n; ++k) acc += table.at(n, k) * b[k + 1];
    return acc;
}

}  // namespace stribola

#endif  // STRIBOLA_TAYLOR_HPP
