// Numerical access to h_n and h_n^* through the parametrisation
// x = q_{n-1}(t), y = q_n(t), using bisection over exact rationals.
#ifndef STRIBOLA_CURVES_HPP
#define STRIBOLA_CURVES_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stribola/exactnum.hpp"
#include "stribola/iterates.hpp"
#include "stribola/polyq.hpp"

namespace stribola {

class Tolerance {
public:
    explicit Tolerance(BigRat eps) : eps_(std::move(eps)) {
        if (eps_.sign() <= 0) throw std::invalid_argument("Tolerance: eps must be positive");
    }
    /// eps = 2^-bits
    static Tolerance pow2(unsigned bits) { return Tolerance(BigRat(BigInt(1), BigInt(1) << bits)); }

    [[nodiscard]] const BigRat& eps() const noexcept { return eps_; }

private:
    BigRat eps_;
};

inline const Tolerance& default_tolerance() {
    static const Tolerance t = Tolerance::pow2(64);
    return t;
}

class OutOfRangeError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// q_n'(t) = 0 at an interior sample of ide_residual.
class DerivativeSingularityError : public std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline void require_unit(const BigRat& v, const char* what) {
    if (v.sign() < 0 || v > BigRat(1)) throw OutOfRangeError(std::string(what) + ": argument outside [0, 1]");
}

/// Bisection for a monotone f on [lo, hi] with f(lo), f(hi) of opposite sign
/// (or zero). Stops once |f(mid)| <= eps and the bracket is narrower than eps.
template <class F>
BigRat bisect(F&& f, BigRat lo, BigRat hi, const BigRat& eps) {
    BigRat flo = f(lo);
    if (flo.is_zero()) return lo;
    const BigRat fhi = f(hi);
    if (fhi.is_zero()) return hi;
    if (flo.sign() == fhi.sign()) throw std::logic_error("bisect: no sign change");
    const BigRat half(BigInt(1), BigInt(2));
    for (int iter = 0; iter < 4096; ++iter) {
        BigRat mid = (lo + hi) * half;
        const BigRat fm = f(mid);
        if (fm.is_zero() || (fm.abs() <= eps && hi - lo <= eps)) return mid;
        if (fm.sign() == flo.sign()) {
            lo = std::move(mid);
            flo = fm;
        } else {
            hi = std::move(mid);
        }
    }
    throw std::runtime_error("bisect: no convergence");
}

inline const IterateRecord& record_at(std::span<const IterateRecord> recs, std::size_t n) {
    if (n >= recs.size()) throw std::out_of_range("curves: record " + std::to_string(n) + " not in cache");
    return recs[n];
}

}  // namespace detail

/// t in [0, 1] with |q_n(t) - y| <= eps. Degree-one q_n are inverted exactly.
inline BigRat invert_q(const IterateRecord& rec, const BigRat& y, const Tolerance& tol = default_tolerance()) {
    detail::require_unit(y, "invert_q");
    const ScaledPoly& q = rec.q;
    if (q.prim.degree() == std::optional<std::size_t>(1)) {
        // y = c + a t / d
        return (y - q.constant) * BigRat(q.denom) / BigRat(q.prim[1]);
    }
    return detail::bisect([&](const BigRat& t) { return q(t) - y; }, BigRat(0), BigRat(1), tol.eps());
}

/// h_n(x) for n >= 1 as q_n(t) with q_{n-1}(t) = x; h_0 = 1.
inline BigRat eval_h(std::size_t n, const BigRat& x, std::span<const IterateRecord> recs,
                     const Tolerance& tol = default_tolerance()) {
    detail::require_unit(x, "eval_h");
    if (n == 0) return BigRat(1);
    const BigRat t = invert_q(detail::record_at(recs, n - 1), x, tol);
    return detail::record_at(recs, n).q(t);
}

/// h_n^*(y): the compositional inverse for n >= 1; sup of [0, 1] (= 1) for the indicator h_0.
inline BigRat eval_h_star(std::size_t n, const BigRat& y, std::span<const IterateRecord> recs,
                          const Tolerance& tol = default_tolerance()) {
    detail::require_unit(y, "eval_h_star");
    if (n == 0) return BigRat(1);
    const BigRat t = invert_q(detail::record_at(recs, n), y, tol);
    return detail::record_at(recs, n - 1).q(t);
}

/// max |kappa_n h_{n+1}'(x) + h_n^*(x)| over the interior samples; x in {0, 1} is skipped.
inline BigRat ide_residual(std::size_t n, std::span<const BigRat> xs, std::span<const IterateRecord> recs,
                           const Tolerance& tol = default_tolerance()) {
    if (n < 1) throw std::invalid_argument("ide_residual: n must be >= 1");
    const IterateRecord& cur = detail::record_at(recs, n);
    const IterateRecord& next = detail::record_at(recs, n + 1);
    const FracPoly dq_cur = cur.q.derivative();
    const FracPoly dq_next = next.q.derivative();
    BigRat worst;
    for (const auto& x : xs) {
        detail::require_unit(x, "ide_residual");
        if (x.is_zero() || x == BigRat(1)) continue;
        const BigRat t = invert_q(cur, x, tol);
        const BigRat slope_cur = evaluate(dq_cur.num, t) / BigRat(dq_cur.den);
        if (slope_cur.is_zero()) {
            throw DerivativeSingularityError("ide_residual: q_n'(t) = 0 at x = " + x.to_string());
        }
        const BigRat h_next_prime = evaluate(dq_next.num, t) / BigRat(dq_next.den) / slope_cur;
        const BigRat r = (cur.kappa * h_next_prime + eval_h_star(n, x, recs, tol)).abs();
        if (r > worst) worst = r;
    }
    return worst;
}

/// Fixpoint of (1/kappa_n) h_n(kappa_n t). Solved as h_n(x) = x, i.e.
/// q_n(s) = q_{n-1}(s), whose difference is strictly monotone in s.
inline BigRat estimate_tau(std::size_t n, std::span<const IterateRecord> recs,
                           const Tolerance& tol = default_tolerance()) {
    if (n < 1) throw std::invalid_argument("estimate_tau: n must be >= 1");
    const IterateRecord& cur = detail::record_at(recs, n);
    const IterateRecord& prev = detail::record_at(recs, n - 1);
    // tau error is (x error)/kappa_n and kappa_n >= 1/4 here, so tighten by 4
    const BigRat eps = tol.eps() * BigRat(BigInt(1), BigInt(4));
    const BigRat s = detail::bisect([&](const BigRat& u) { return cur.q(u) - prev.q(u); }, BigRat(0), BigRat(1), eps);
    return prev.q(s) / cur.kappa;
}

enum class SampleSpacing { Parameter, Abscissa };

struct SampleOptions {
    std::size_t points = 256;
    std::size_t places = 17;
    SampleSpacing spacing = SampleSpacing::Parameter;
};

struct CurveSample {
    std::size_t n = 0;
    BigRat t;
    BigRat x;
    BigRat y;
};

/// `points` samples per n, equally spaced in t (or in x with SampleSpacing::Abscissa).
/// h_0 is sampled as x = t, y = 1.
inline std::vector<CurveSample> sample_curve(std::size_t n, std::span<const IterateRecord> recs,
                                             const SampleOptions& opt, const Tolerance& tol = default_tolerance()) {
    if (opt.points < 2) throw std::invalid_argument("sample: points must be >= 2");
    std::vector<CurveSample> out;
    out.reserve(opt.points);
    const BigInt last(static_cast<unsigned long>(opt.points - 1));
    for (std::size_t k = 0; k < opt.points; ++k) {
        const BigRat u(BigInt(static_cast<unsigned long>(k)), last);
        if (n == 0) {
            out.push_back({0, u, u, BigRat(1)});
        } else if (opt.spacing == SampleSpacing::Parameter) {
            out.push_back({n, u, detail::record_at(recs, n - 1).q(u), detail::record_at(recs, n).q(u)});
        } else {
            const BigRat t = invert_q(detail::record_at(recs, n - 1), u, tol);
            out.push_back({n, t, u, detail::record_at(recs, n).q(t)});
        }
    }
    return out;
}

inline void sample_csv(std::ostream& os, std::span<const std::size_t> ns, std::span<const IterateRecord> recs,
                       const SampleOptions& opt, const Tolerance& tol = default_tolerance()) {
    os << "n,t,x,y\n";
    for (const std::size_t n : ns) {
        for (const auto& s : sample_curve(n, recs, opt, tol)) {
            os << s.n << ',' << to_decimal(s.t, opt.places) << ',' << to_decimal(s.x, opt.places) << ','
               << to_decimal(s.y, opt.places) << '\n';
        }
    }
}

}  // namespace stribola

#endif  // STRIBOLA_CURVES_HPP
