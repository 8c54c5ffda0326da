// Canonical stribolic iterates q_n = h_n o ... o h_1 and kappa_n = area(h_n).
//
// With Q_n = int_0^x q_n' q_{n-1}:
//   kappa_n = (-1)^n Q_n(1),   q_{n+1} = ((n+1) mod 2) - Q_n / kappa_n.
// Every q_n is kept as q_n(0) + prim / d_n with prim primitive in Z[X].
#ifndef STRIBOLA_ITERATES_HPP
#define STRIBOLA_ITERATES_HPP

#include <chrono>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stribola/exactnum.hpp"
#include "stribola/polyq.hpp"

namespace stribola {

struct IterateRecord {
    std::size_t n = 0;
    BigRat kappa;
    ScaledPoly q;

    friend bool operator==(const IterateRecord&, const IterateRecord&) = default;
};

/// Recomputed kappa_n disagrees with the stored one.
class InconsistencyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A cache file or loaded record violates the iterate invariants.
class CacheCorruptionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// F_0 = 0, F_1 = 1, ...
inline std::size_t fibonacci(std::size_t k) {
    std::size_t a = 0, b = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t t = a + b;
        a = b;
        b = t;
    }
    return a;
}

inline std::size_t expected_degree(std::size_t n) { return fibonacci(n + 1); }
inline std::size_t expected_valuation(std::size_t n) { return std::size_t{1} << (n / 2); }

/// (record 0, record 1): kappa_0 = 1, q_0 = X; kappa_1 = 1/2, q_1 = 1 - X.
inline std::pair<IterateRecord, IterateRecord> base_records() {
    IterateRecord r0{0, BigRat(1), ScaledPoly{BigRat(0), BigInt(1), IntPoly{0, 1}}};
    IterateRecord r1{1, BigRat(BigInt(1), BigInt(2)), ScaledPoly{BigRat(1), BigInt(1), IntPoly{0, -1}}};
    return {std::move(r0), std::move(r1)};
}

namespace detail {

/// prim_cur' * (d_prev q_prev); Q_n = integrate0(this) / (d_cur d_prev).
inline IntPoly integrand(const ScaledPoly& q_prev, const ScaledPoly& q_cur, const MulOptions& opt) {
    return mul(derivative(q_cur.prim), q_prev.numerator_over_denom(), opt);
}

/// (-1)^n Q_n(1) from the integrand product, without materialising Q_n.
inline BigRat kappa_from_integrand(std::size_t n, const IntPoly& product, const BigInt& d_cur,
                                   const BigInt& d_prev) {
    const auto c = product.coeffs();
    const BigInt l = lcm_upto(c.size());
    BigInt sum;
    BigInt w;
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_divexact_ui(w.raw(), l.raw(), i + 1);
        sum.add_mul(c[i], w);
    }
    if (n % 2 == 1) sum.negate();
    return {std::move(sum), l * d_cur * d_prev};
}

/// q_{n+1} from the integrand of Q_n and kappa_n.
inline ScaledPoly next_q(std::size_t n, IntPoly product, const BigInt& d_cur, const BigInt& d_prev,
                         const BigRat& kappa_n) {
    const auto c = std::move(product).release();
    if (c.empty()) throw InconsistencyError("step: vanishing integrand");
    const BigInt l = lcm_upto(c.size());
    std::vector<BigInt> q(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_divexact_ui(q[i + 1].raw(), l.raw(), i + 1);
        q[i + 1] *= c[i];
    }
    // -Q_n / kappa_n with Q_n = sum / (l d_cur d_prev)
    const BigRat factor = -(BigRat(BigInt(1), l * d_cur * d_prev) / kappa_n);
    return ScaledPoly::from_scaled(BigRat(static_cast<long>((n + 1) % 2)), IntPoly(std::move(q)), factor);
}

}  // namespace detail

/// Q_n as an explicit rational polynomial; for checks and small n.
inline RatPoly antiderivative_q(const IterateRecord& prev, const IterateRecord& cur) {
    auto f = integrate0(detail::integrand(prev.q, cur.q, {}));
    f.den *= cur.q.denom * prev.q.denom;
    return f.to_rat();
}

/// Record n+1 from records n-1 and n. Recomputes kappa_n on the way and
/// throws InconsistencyError if it differs from cur.kappa.
inline IterateRecord step(const IterateRecord& prev, const IterateRecord& cur, const MulOptions& opt = {}) {
    if (prev.n + 1 != cur.n) throw std::invalid_argument("step: records are not consecutive");
    IntPoly prod = detail::integrand(prev.q, cur.q, opt);
    const BigRat kappa = detail::kappa_from_integrand(cur.n, prod, cur.q.denom, prev.q.denom);
    if (kappa != cur.kappa) {
        throw InconsistencyError("step: recomputed kappa_" + std::to_string(cur.n) + " = " + kappa.to_string() +
                                 " differs from stored " + cur.kappa.to_string());
    }
    ScaledPoly q_next = detail::next_q(cur.n, std::move(prod), cur.q.denom, prev.q.denom, kappa);
    const IntPoly next_prod = detail::integrand(cur.q, q_next, opt);
    BigRat kappa_next = detail::kappa_from_integrand(cur.n + 1, next_prod, q_next.denom, cur.q.denom);
    return {cur.n + 1, std::move(kappa_next), std::move(q_next)};
}

/// Walks the recurrence forward, computing each integrand product once.
class Generator {
public:
    Generator(IterateRecord prev, IterateRecord cur, MulOptions opt = {})
        : prev_(std::move(prev)), cur_(std::move(cur)), opt_(opt) {
        if (prev_.n + 1 != cur_.n) throw std::invalid_argument("Generator: records are not consecutive");
    }

    [[nodiscard]] const IterateRecord& current() const noexcept { return cur_; }

    const IterateRecord& advance() {
        IntPoly prod = pending_ ? std::move(*pending_) : detail::integrand(prev_.q, cur_.q, opt_);
        pending_.reset();
        const BigRat kappa = detail::kappa_from_integrand(cur_.n, prod, cur_.q.denom, prev_.q.denom);
        if (kappa != cur_.kappa) {
            throw InconsistencyError("generate: recomputed kappa_" + std::to_string(cur_.n) +
                                     " differs from stored value");
        }
        ScaledPoly q_next = detail::next_q(cur_.n, std::move(prod), cur_.q.denom, prev_.q.denom, kappa);
        IntPoly next_prod = detail::integrand(cur_.q, q_next, opt_);
        BigRat kappa_next = detail::kappa_from_integrand(cur_.n + 1, next_prod, q_next.denom, cur_.q.denom);
        pending_ = std::move(next_prod);
        prev_ = std::move(cur_);
        cur_ = IterateRecord{prev_.n + 1, std::move(kappa_next), std::move(q_next)};
        return cur_;
    }

private:
    IterateRecord prev_;
    IterateRecord cur_;
    MulOptions opt_;
    std::optional<IntPoly> pending_;
};

// ---------------------------------------------------------------------------
// Invariants

enum class ClauseStatus { Pass, Fail, Skipped };

struct ClauseResult {
    std::string clause;
    ClauseStatus status = ClauseStatus::Skipped;
    std::string detail;
};

struct InvariantReport {
    std::size_t n = 0;
    std::vector<ClauseResult> clauses;

    [[nodiscard]] bool all_pass() const {
        for (const auto& c : clauses) {
            if (c.status == ClauseStatus::Fail) return false;
        }
        return true;
    }
};

/// Single-record invariants; empty string when the record is sound.
inline std::string record_defect(const IterateRecord& r) {
    const std::size_t n = r.n;
    if (r.q.constant != BigRat(static_cast<long>(n % 2))) return "q(0) != n mod 2";
    if (r.q.denom.sign() <= 0) return "non-positive denominator";
    if (r.q.prim.is_zero()) return "constant polynomial";
    if (!r.q.prim[0].is_zero()) return "primitive part has a constant term";
    const BigInt at_one = eval_at_one(r.q.prim);
    if (at_one != (n % 2 == 0 ? r.q.denom : -r.q.denom)) return "q(1) - q(0) != (-1)^n";
    if (*r.q.prim.degree() != expected_degree(n)) return "degree != F_{n+1}";
    if (*r.q.valuation() != expected_valuation(n)) return "valuation != 2^floor(n/2)";
    if (!content(r.q.prim).is_one()) return "primitive part has nontrivial content";
    if (r.kappa.sign() <= 0 || r.kappa > BigRat(1)) return "kappa outside (0, 1]";
    return {};
}

/// Invariant report for record `n` of `records` (contiguous from 0).
/// The polynomial identity kappa_n q_{n+1}' + q_n' q_{n-1} = 0 needs the
/// neighbours and is skipped at the ends of the range.
inline InvariantReport check_invariants(std::span<const IterateRecord> records, std::size_t n) {
    if (n >= records.size()) throw std::out_of_range("check_invariants: index not in range");
    const IterateRecord& r = records[n];
    InvariantReport rep{n, {}};
    auto add = [&](std::string clause, bool ok, std::string detail) {
        rep.clauses.push_back({std::move(clause), ok ? ClauseStatus::Pass : ClauseStatus::Fail, std::move(detail)});
    };

    const BigRat q0 = r.q.constant;
    const BigRat q1 = r.q(BigRat(1));
    add("a: q(0) = n mod 2", q0 == BigRat(static_cast<long>(n % 2)), "q(0) = " + q0.to_string());
    add("a: q(1) - q(0) = (-1)^n", q1 - q0 == BigRat(n % 2 == 0 ? 1 : -1), "q(1) = " + q1.to_string());

    if (n >= 1 && n + 1 < records.size()) {
        const IterateRecord& prev = records[n - 1];
        const IterateRecord& next = records[n + 1];
        // mu d_n d_{n-1} prim_{n+1}' + nu d_{n+1} prim_n' N_{n-1} = 0, N_{n-1} = d_{n-1} q_{n-1}
        IntPoly lhs = derivative(next.q.prim) * (r.kappa.num() * r.q.denom * prev.q.denom);
        IntPoly rhs = mul(derivative(r.q.prim), prev.q.numerator_over_denom(), {MulAlgorithm::Karatsuba, 16}) *
                      (r.kappa.den() * next.q.denom);
        const bool ok = (lhs + rhs).is_zero();
        add("b: kappa_n q_{n+1}' + q_n' q_{n-1} = 0", ok, ok ? "exact" : "nonzero residual polynomial");
        const RatPoly big_q = antiderivative_q(prev, r);
        const BigRat k = evaluate(big_q, BigRat(1)) * BigRat(n % 2 == 0 ? 1 : -1);
        add("b: kappa_n = (-1)^n Q_n(1)", k == r.kappa, "Q_n(1) = " + k.to_string());
    } else {
        rep.clauses.push_back({"b: kappa_n q_{n+1}' + q_n' q_{n-1} = 0", ClauseStatus::Skipped, "needs n-1 and n+1"});
    }

    const auto deg = r.q.prim.degree();
    add("c: deg q_n = F_{n+1}", deg && *deg == expected_degree(n),
        "deg = " + (deg ? std::to_string(*deg) : std::string("-inf")) + ", F = " + std::to_string(expected_degree(n)));
    const auto val = r.q.valuation();
    add("c: v_X(q_n - q_n(0)) = 2^floor(n/2)", val && *val == expected_valuation(n),
        "v = " + (val ? std::to_string(*val) : std::string("inf")));
    add("c: d_n (q_n - q_n(0)) primitive", !r.q.prim.is_zero() && content(r.q.prim).is_one() && r.q.denom.sign() > 0,
        "d_n = " + r.q.denom.to_string());
    add("c: kappa_n rational in (0, 1]", r.kappa.sign() > 0 && r.kappa <= BigRat(1), r.kappa.to_string());
    return rep;
}

// ---------------------------------------------------------------------------
// Cache
//
// STRIBOLA-CACHE v1
// n d_n kappa_num/kappa_den v k coeff_v ... coeff_{v+k-1}

inline constexpr const char* kCacheHeader = "STRIBOLA-CACHE v1";

inline void write_record(std::ostream& os, const IterateRecord& r) {
    const auto c = r.q.prim.coeffs();
    const std::size_t v = valuation(r.q.prim).value_or(0);
    os << r.n << ' ' << r.q.denom << ' ' << r.kappa.num() << '/' << r.kappa.den() << ' ' << v << ' ' << (c.size() - v);
    for (std::size_t i = v; i < c.size(); ++i) os << ' ' << c[i];
    os << '\n';
}

namespace detail {

inline std::size_t parse_count(const std::string& tok, const char* what) {
    if (tok.empty() || tok.size() > 18 || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw CacheCorruptionError(std::string("cache: bad ") + what + " '" + tok.substr(0, 40) + "'");
    }
    return std::stoull(tok);
}

}  // namespace detail

/// Parses one record line; every malformation is a CacheCorruptionError.
inline IterateRecord read_record(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw CacheCorruptionError("cache: missing record");
    std::istringstream ls(line);
    std::string n_s, d_s, k_s, v_s, len_s;
    if (!(ls >> n_s >> d_s >> k_s >> v_s >> len_s)) throw CacheCorruptionError("cache: truncated record header");
    IterateRecord r;
    r.n = detail::parse_count(n_s, "index");
    const std::size_t v = detail::parse_count(v_s, "valuation");
    const std::size_t k = detail::parse_count(len_s, "coefficient count");
    // checked before allocating; fibonacci(n + 1) overflows beyond n = 90
    if (r.n > 90 || v != expected_valuation(r.n) || v + k != expected_degree(r.n) + 1) {
        throw CacheCorruptionError("cache: record " + n_s + " has the wrong valuation or length");
    }
    try {
        const auto slash = k_s.find('/');
        if (slash == std::string::npos) throw CacheCorruptionError("cache: kappa is not num/den");
        r.kappa = BigRat(BigInt(k_s.substr(0, slash)), BigInt(k_s.substr(slash + 1)));
        std::vector<BigInt> c;
        std::string tok;
        while (ls >> tok) {
            if (c.size() == k) throw CacheCorruptionError("cache: trailing data after record " + n_s);
            c.emplace_back(tok);
        }
        if (c.size() != k) throw CacheCorruptionError("cache: truncated coefficient list in record " + n_s);
        c.insert(c.begin(), v, BigInt(0));
        r.q = ScaledPoly{BigRat(static_cast<long>(r.n % 2)), BigInt(d_s), IntPoly(std::move(c))};
    } catch (const std::invalid_argument& e) {
        throw CacheCorruptionError(std::string("cache: malformed number: ") + e.what());
    } catch (const std::domain_error& e) {
        throw CacheCorruptionError(std::string("cache: ") + e.what());
    }
    return r;
}

/// Contiguous records from n = 0 upward.
class IterateCache {
public:
    IterateCache() = default;

    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    /// Highest stored index; only meaningful when non-empty.
    [[nodiscard]] std::size_t max_n() const noexcept { return records_.size() - 1; }
    [[nodiscard]] const IterateRecord& operator[](std::size_t n) const { return records_.at(n); }
    [[nodiscard]] std::span<const IterateRecord> records() const noexcept { return records_; }

    [[nodiscard]] std::vector<BigRat> kappas() const {
        std::vector<BigRat> k;
        k.reserve(records_.size());
        for (const auto& r : records_) k.push_back(r.kappa);
        return k;
    }

    /// Appends after validating index, invariants and monotonicity of kappa.
    void push(IterateRecord r) {
        if (r.n != records_.size()) {
            throw CacheCorruptionError("cache: expected record " + std::to_string(records_.size()) + ", got " +
                                       std::to_string(r.n));
        }
        if (auto defect = record_defect(r); !defect.empty()) {
            throw CacheCorruptionError("cache: record " + std::to_string(r.n) + ": " + defect);
        }
        if (!records_.empty() && !(r.kappa < records_.back().kappa)) {
            throw CacheCorruptionError("cache: kappa not strictly decreasing at " + std::to_string(r.n));
        }
        records_.push_back(std::move(r));
    }

    void truncate(std::size_t count) {
        if (count < records_.size()) records_.resize(count);
    }

    void write(std::ostream& os) const {
        os << kCacheHeader << '\n';
        for (const auto& r : records_) write_record(os, r);
    }

    /// Reads at most max_records (all when nullopt), validating each one.
    static IterateCache read(std::istream& is, std::optional<std::size_t> max_records = std::nullopt) {
        std::string header;
        if (!std::getline(is, header) || header != kCacheHeader) {
            throw CacheCorruptionError("cache: missing or unknown header");
        }
        IterateCache cache;
        while (!max_records || cache.size() < *max_records) {
            is >> std::ws;
            if (is.peek() == std::char_traits<char>::eof()) break;
            cache.push(read_record(is));
        }
        return cache;
    }

    static IterateCache load(const std::filesystem::path& path, std::optional<std::size_t> max_records = std::nullopt) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cache: cannot open " + path.string());
        return read(in, max_records);
    }

    void save(const std::filesystem::path& path) const {
        atomic_write(path, [&](std::ofstream& out) { write(out); });
    }

    /// Rewrites `path` with one more record: copy + append to a temp file, then rename.
    static void append_atomic(const std::filesystem::path& path, const IterateRecord& r) {
        namespace fs = std::filesystem;
        const bool existing = fs::exists(path);
        atomic_write(path, [&](std::ofstream& out) {
            if (existing) {
                std::ifstream in(path, std::ios::binary);
                out << in.rdbuf();
            } else {
                out << kCacheHeader << '\n';
            }
            write_record(out, r);
        });
    }

private:
    template <class Fn>
    static void atomic_write(const std::filesystem::path& path, Fn&& body) {
        namespace fs = std::filesystem;
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
            body(out);
            out.flush();
            if (!out) throw std::runtime_error("cache: write failed for " + tmp.string());
        }
        fs::rename(tmp, path);
    }

    std::vector<IterateRecord> records_;
};

inline constexpr const char* kKappaHeader = "STRIBOLA-KAPPA v1";

/// Header, then one line "n num/den" per n from 0 upward.
inline void write_kappa_table(std::ostream& os, std::span<const BigRat> kappas) {
    os << kKappaHeader << '\n';
    for (std::size_t n = 0; n < kappas.size(); ++n) os << n << ' ' << kappas[n].to_string() << '\n';
}

/// Values must be contiguous from 0, lie in (0, 1] and strictly decrease.
inline std::vector<BigRat> read_kappa_table(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != kKappaHeader) {
        throw CacheCorruptionError("kappa table: missing or unknown header");
    }
    std::vector<BigRat> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t n = 0;
        std::string value;
        std::string extra;
        if (!(ls >> n >> value) || (ls >> extra)) {
            throw CacheCorruptionError("kappa table: malformed line " + std::to_string(out.size() + 2));
        }
        if (n != out.size()) throw CacheCorruptionError("kappa table: expected index " + std::to_string(out.size()));
        BigRat k;
        try {
            k = BigRat::parse(value);
        } catch (const std::exception&) {
            throw CacheCorruptionError("kappa table: bad value at index " + std::to_string(n));
        }
        if (k.sign() <= 0 || k > BigRat(1) || (!out.empty() && !(k < out.back()))) {
            throw CacheCorruptionError("kappa table: value out of order at index " + std::to_string(n));
        }
        out.push_back(std::move(k));
    }
    return out;
}

inline std::vector<BigRat> load_kappa_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("kappa table: cannot open " + path.string());
    return read_kappa_table(in);
}

inline void save_kappa_table(const std::filesystem::path& path, std::span<const BigRat> kappas) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("kappa table: cannot write " + tmp.string());
        write_kappa_table(out, kappas);
        out.flush();
        if (!out) throw std::runtime_error("kappa table: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct GenerateOptions {
    MulOptions mul;
    /// When set, each new record is appended to this cache file atomically.
    std::optional<std::filesystem::path> persist_to;
    /// Called after each new record with its wall time.
    std::function<void(const IterateRecord&, std::chrono::duration<double>)> on_record;
};

/// Extends `cache` contiguously up to index up_to.
inline void generate(std::size_t up_to, IterateCache& cache, const GenerateOptions& opt = {}) {
    auto emit = [&](const IterateRecord& r, std::chrono::duration<double> dt) {
        if (opt.persist_to) IterateCache::append_atomic(*opt.persist_to, r);
        if (opt.on_record) opt.on_record(r, dt);
    };
    auto [r0, r1] = base_records();
    if (cache.empty()) {
        cache.push(r0);
        emit(cache[0], {});
    }
    if (up_to >= 1 && cache.size() < 2) {
        cache.push(r1);
        emit(cache[1], {});
    }
    if (cache.max_n() >= up_to || cache.size() < 2) return;

    Generator gen(cache[cache.max_n() - 1], cache[cache.max_n()], opt.mul);
    while (cache.max_n() < up_to) {
        const auto t0 = std::chrono::steady_clock::now();
        const IterateRecord& r = gen.advance();
        const auto dt = std::chrono::steady_clock::now() - t0;
        cache.push(r);
        emit(cache[cache.max_n()], dt);
    }
}

}  // namespace stribola

#endif  // STRIBOLA_ITERATES_HPP
