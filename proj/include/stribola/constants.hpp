// Convergence ratios, Aitken acceleration and enclosures of the stribolic
// constant, all over exact rationals.
#ifndef STRIBOLA_CONSTANTS_HPP
#define STRIBOLA_CONSTANTS_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stribola/exactnum.hpp"

namespace stribola {

/// kappa_{n-1} = kappa_n, so theta_n is undefined.
class DegenerateDifferenceError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// kappa_{n-1} - 2 kappa_n + kappa_{n+1} = 0, so the Aitken value is undefined.
class ZeroSecondDifferenceError : public std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {
inline void require_interior(std::span<const BigRat> seq, std::size_t n, const char* what) {
    if (n < 1 || n + 1 >= seq.size()) {
        throw std::out_of_range(std::string(what) + ": index " + std::to_string(n) + " needs neighbours");
    }
}
}  // namespace detail

/// theta_n = (kappa_n - kappa_{n+1}) / (kappa_{n-1} - kappa_n).
inline BigRat theta(std::span<const BigRat> kappas, std::size_t n) {
    detail::require_interior(kappas, n, "theta");
    const BigRat lower = kappas[n - 1] - kappas[n];
    if (lower.is_zero()) throw DegenerateDifferenceError("theta: kappa_{n-1} = kappa_n at n = " + std::to_string(n));
    return (kappas[n] - kappas[n + 1]) / lower;
}

/// kappa'_n = (kappa_{n-1} kappa_{n+1} - kappa_n^2) / (kappa_{n-1} - 2 kappa_n + kappa_{n+1}).
inline BigRat aitken(std::span<const BigRat> seq, std::size_t n) {
    detail::require_interior(seq, n, "aitken");
    const BigRat second = seq[n - 1] - seq[n] - seq[n] + seq[n + 1];
    if (second.is_zero()) {
        throw ZeroSecondDifferenceError("aitken: zero second difference at n = " + std::to_string(n));
    }
    return (seq[n - 1] * seq[n + 1] - seq[n] * seq[n]) / second;
}

/// Level j holds the j-fold Aitken transform over indices [j, N - j].
class AccelLadder {
public:
    struct Level {
        std::size_t start = 0;
        std::vector<BigRat> values;

        /// Value at absolute index n.
        [[nodiscard]] const BigRat& at(std::size_t n) const {
            if (n < start || n - start >= values.size()) {
                throw std::out_of_range("AccelLadder: index " + std::to_string(n) + " outside level");
            }
            return values[n - start];
        }
        [[nodiscard]] bool contains(std::size_t n) const { return n >= start && n - start < values.size(); }
        [[nodiscard]] std::size_t last() const { return start + values.size() - 1; }
    };

    explicit AccelLadder(std::vector<Level> levels) : levels_(std::move(levels)) {}

    [[nodiscard]] std::size_t depth() const noexcept { return levels_.size() - 1; }
    [[nodiscard]] const Level& level(std::size_t j) const { return levels_.at(j); }

private:
    std::vector<Level> levels_;
};

inline AccelLadder ladder(std::span<const BigRat> kappas, std::size_t levels) {
    if (levels < 1) throw std::invalid_argument("ladder: levels must be >= 1");
    if (kappas.size() < 2 * levels + 1) {
        throw std::invalid_argument("ladder: need at least " + std::to_string(2 * levels + 1) + " values");
    }
    std::vector<AccelLadder::Level> out;
    out.push_back({0, std::vector<BigRat>(kappas.begin(), kappas.end())});
    for (std::size_t j = 1; j <= levels; ++j) {
        const auto& prev = out.back().values;
        std::vector<BigRat> next;
        next.reserve(prev.size() - 2);
        for (std::size_t i = 1; i + 1 < prev.size(); ++i) next.push_back(aitken(prev, i));
        out.push_back({j, std::move(next)});
    }
    return AccelLadder(std::move(out));
}

/// kappa_n - 1 + kappa_n / kappa_{n-1}; an unconditional lower bound for kappa.
inline BigRat lower_bound_prop1(std::span<const BigRat> kappas, std::size_t n) {
    if (n < 1 || n >= kappas.size()) throw std::out_of_range("lower_bound: index out of range");
    return kappas[n] - BigRat(1) + kappas[n] / kappas[n - 1];
}

enum class BoundSource { Prop1LowerBound, KappaN, ConjecturalAitken, ConjecturalLadder };

inline std::string_view to_string(BoundSource s) {
    switch (s) {
        case BoundSource::Prop1LowerBound: return "kappa_n - 1 + kappa_n/kappa_{n-1} (unconditional)";
        case BoundSource::KappaN: return "kappa_n (unconditional)";
        case BoundSource::ConjecturalAitken: return "kappa'_n (conditional on Conjecture 1)";
        case BoundSource::ConjecturalLadder: return "iterated kappa' (conjectural)";
    }
    return "?";
}

inline bool is_conditional(BoundSource s) {
    return s == BoundSource::ConjecturalAitken || s == BoundSource::ConjecturalLadder;
}

struct RationalInterval {
    BigRat lo;
    BigRat hi;
    BoundSource lo_source = BoundSource::Prop1LowerBound;
    BoundSource hi_source = BoundSource::KappaN;
    std::size_t lo_index = 0;
    std::size_t hi_index = 0;

    [[nodiscard]] bool conditional() const { return is_conditional(lo_source) || is_conditional(hi_source); }
    [[nodiscard]] BigRat width() const { return hi - lo; }
};

enum class EnclosureMode { Unconditional, Conjectural };

/// Unconditional: [lower_bound_prop1(N), kappa_N] for N = last index.
/// Conjectural: [kappa'_{2m-1}, kappa'_{2m}] for the largest m with 2m <= N - 1.
inline RationalInterval enclosure(std::span<const BigRat> kappas, EnclosureMode mode) {
    if (kappas.size() < 2) throw std::invalid_argument("enclosure: need kappa_0 and kappa_1");
    const std::size_t last = kappas.size() - 1;
    RationalInterval iv;
    if (mode == EnclosureMode::Unconditional) {
        iv = {lower_bound_prop1(kappas, last), kappas[last], BoundSource::Prop1LowerBound, BoundSource::KappaN,
              last, last};
    } else {
        if (last < 3) throw std::invalid_argument("enclosure: conjectural mode needs kappa_0..kappa_3");
        std::size_t even = last - 1;
        if (even % 2 == 1) --even;
        iv = {aitken(kappas, even - 1), aitken(kappas, even), BoundSource::ConjecturalAitken,
              BoundSource::ConjecturalAitken, even - 1, even};
    }
    if (!(iv.lo < iv.hi)) throw std::logic_error("enclosure: empty interval");
    return iv;
}

struct RatioChainLink {
    std::size_t m = 0;
    bool holds = false;
};

/// theta_{2m} < theta_{2m+2} < theta_{2m+3} < theta_{2m+1} for each m >= 1 with 2m+3 <= N-1.
inline std::vector<RatioChainLink> check_ratio_chain(std::span<const BigRat> kappas) {
    if (kappas.size() < 5) throw std::invalid_argument("check_ratio_chain: need kappa_0..kappa_4");
    const std::size_t last = kappas.size() - 1;
    std::vector<BigRat> th(last);
    for (std::size_t n = 1; n < last; ++n) th[n] = theta(kappas, n);
    std::vector<RatioChainLink> out;
    for (std::size_t m = 1; 2 * m + 3 <= last - 1; ++m) {
        const bool ok = th[2 * m] < th[2 * m + 2] && th[2 * m + 2] < th[2 * m + 3] && th[2 * m + 3] < th[2 * m + 1];
        out.push_back({m, ok});
    }
    return out;
}

}  // namespace stribola

#endif  // STRIBOLA_CONSTANTS_HPP
