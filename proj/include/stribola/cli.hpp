// Command layer behind the `stribola` executable. Every command writes its
// report to `out` and progress or timing to `log`; `out` depends only on the
// configuration and the cache contents.
#ifndef STRIBOLA_CLI_HPP
#define STRIBOLA_CLI_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stribola/constants.hpp"
#include "stribola/curves.hpp"
#include "stribola/exactnum.hpp"
#include "stribola/iterates.hpp"
#include "stribola/modular.hpp"
#include "stribola/observations.hpp"
#include "stribola/taylor.hpp"

namespace stribola::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInconsistent = 4;

/// Largest max_n that generate accepts without --allow-long.
inline constexpr std::size_t kShortRunLimit = 16;

enum class Format { Text, Csv };

struct Config {
    std::filesystem::path cache_path = "stribola.cache";
    /// Exact kappa table: written by generate, read by the kappa-only commands.
    std::optional<std::filesystem::path> kappa_path;
    std::size_t max_n = 10;
    /// Unset means the command's own default (20, or 17 for sample).
    std::optional<std::size_t> decimal_places;
    std::size_t ladder_levels = 4;
    unsigned eps_bits = 64;
    std::size_t sample_points = 256;
    SampleSpacing spacing = SampleSpacing::Parameter;
    std::size_t up_to = 6;
    Format format = Format::Text;
    bool allow_long = false;

    [[nodiscard]] std::size_t places(std::size_t fallback = 20) const { return decimal_places.value_or(fallback); }
};

class UsageError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The cache (and kappa table) do not reach the requested index.
class MissingDataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate(const Config& c) {
    if (c.decimal_places && *c.decimal_places < 1) throw UsageError("--digits must be >= 1");
    if (c.ladder_levels < 1) throw UsageError("--levels must be >= 1");
    if (c.eps_bits < 1) throw UsageError("--eps-bits must be >= 1");
    if (c.sample_points < 2) throw UsageError("--points must be >= 2");
}

// ---------------------------------------------------------------------------
// Tables

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        row.resize(header_.size());
        rows_.push_back(std::move(row));
    }

    void render(std::ostream& os, Format f) const {
        if (f == Format::Csv) {
            write_csv_row(os, header_);
            for (const auto& r : rows_) write_csv_row(os, r);
            return;
        }
        std::vector<std::size_t> width(header_.size());
        for (std::size_t j = 0; j < header_.size(); ++j) {
            width[j] = header_[j].size();
            for (const auto& r : rows_) width[j] = std::max(width[j], r[j].size());
        }
        auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j > 0) s += "  ";
                // first column right-aligned, the rest left-aligned
                const std::string pad(width[j] - r[j].size(), ' ');
                s += j == 0 ? pad + r[j] : r[j] + pad;
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            os << s << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

private:
    static void write_csv_row(std::ostream& os, const std::vector<std::string>& r) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j > 0) os << ',';
            const bool quote = r[j].find_first_of(",\"") != std::string::npos;
            if (!quote) {
                os << r[j];
                continue;
            }
            os << '"';
            for (const char ch : r[j]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
            os << '"';
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Full fraction up to `limit` characters, otherwise a digit count.
inline std::string render_fraction(const BigRat& x, std::size_t limit = 1000) {
    std::string s = x.to_string();
    if (s.size() <= limit) return s;
    return "[" + std::to_string(x.num().to_string().size()) + "/" + std::to_string(x.den().to_string().size()) +
           "-digit fraction]";
}

// ---------------------------------------------------------------------------
// Data access

inline std::string regenerate_hint(std::size_t max_n) {
    std::string hint = "run `stribola generate --max-n " + std::to_string(max_n);
    if (max_n > kShortRunLimit) hint += " --allow-long";
    return hint + "`";
}

/// Records 0..max_n from the cache file.
inline IterateCache load_records(const Config& c, std::size_t max_n) {
    if (!std::filesystem::exists(c.cache_path)) {
        throw MissingDataError("no cache at " + c.cache_path.string() + "; " + regenerate_hint(max_n));
    }
    IterateCache cache = IterateCache::load(c.cache_path, max_n + 1);
    if (cache.size() < max_n + 1) {
        throw MissingDataError("cache " + c.cache_path.string() + " ends at n = " + std::to_string(cache.max_n()) +
                               "; " + regenerate_hint(max_n));
    }
    return cache;
}

/// kappa_0..kappa_max_n from the cache, extended by the kappa table when one is
/// configured. Overlapping entries must agree.
inline std::vector<BigRat> load_kappas(const Config& c, std::size_t max_n) {
    std::vector<BigRat> out;
    if (std::filesystem::exists(c.cache_path)) out = IterateCache::load(c.cache_path, max_n + 1).kappas();
    if (c.kappa_path && out.size() < max_n + 1) {
        const std::vector<BigRat> table = load_kappa_table(*c.kappa_path);
        for (std::size_t n = 0; n < std::min(out.size(), table.size()); ++n) {
            if (out[n] != table[n]) {
                throw InconsistencyError("kappa table disagrees with the cache at n = " + std::to_string(n));
            }
        }
        for (std::size_t n = out.size(); n < table.size() && n <= max_n; ++n) out.push_back(table[n]);
    }
    if (out.size() < max_n + 1) {
        const std::string have = out.empty() ? "nothing" : "kappa_0..kappa_" + std::to_string(out.size() - 1);
        throw MissingDataError("need kappa_0..kappa_" + std::to_string(max_n) + " but found " + have + "; " +
                               regenerate_hint(max_n));
    }
    out.resize(max_n + 1);
    return out;
}

// ---------------------------------------------------------------------------
// Commands

inline void generate_line(Table& t, std::size_t n, const BigRat& kappa, std::size_t places) {
    t.add({std::to_string(n), render_fraction(kappa), to_decimal(kappa, places)});
}

inline std::string seconds(std::chrono::duration<double> dt) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << dt.count() << " s";
    return s.str();
}

/// Exact kappa_0..kappa_max_n by multimodular reconstruction into the kappa table.
inline int generate_kappa_table(const Config& c, std::ostream& out, std::ostream& log) {
    modular::ReconstructOptions opt;
    // the exact route supplies the leading values as a cross-check
    IterateCache exact;
    if (std::filesystem::exists(c.cache_path)) {
        exact = IterateCache::load(c.cache_path, c.max_n + 1);
    } else {
        generate(std::min<std::size_t>(c.max_n, 12), exact);
    }
    opt.known = exact.kappas();
    const auto t0 = std::chrono::steady_clock::now();
    opt.progress = [&](std::size_t used, std::size_t finished) {
        if (used % 1000 == 0) {
            log << "[generate] " << used << " primes, " << finished << "/" << c.max_n + 1 << " values, "
                << seconds(std::chrono::steady_clock::now() - t0) << std::endl;
        }
    };
    const std::vector<BigRat> kappas = modular::kappas_multimodular(c.max_n, opt);
    save_kappa_table(*c.kappa_path, kappas);
    log << "[generate] kappa table written in " << seconds(std::chrono::steady_clock::now() - t0) << std::endl;
    Table t({"n", "kappa_n", "decimal"});
    for (std::size_t n = 0; n < kappas.size(); ++n) generate_line(t, n, kappas[n], c.places());
    t.render(out, c.format);
    return kExitOk;
}

inline int cmd_generate(const Config& c, std::ostream& out, std::ostream& log) {
    if (c.max_n > kShortRunLimit && !c.allow_long) {
        throw UsageError("--max-n " + std::to_string(c.max_n) + " exceeds " + std::to_string(kShortRunLimit) +
                         "; pass --allow-long (cost grows about threefold per step)");
    }
    if (c.kappa_path) return generate_kappa_table(c, out, log);

    IterateCache cache;
    if (std::filesystem::exists(c.cache_path)) cache = IterateCache::load(c.cache_path);
    if (!cache.empty()) log << "[generate] resuming from n = " << cache.max_n() << std::endl;
    GenerateOptions opt;
    opt.persist_to = c.cache_path;
    opt.on_record = [&](const IterateRecord& r, std::chrono::duration<double> dt) {
        log << "[generate] n = " << r.n << "  " << seconds(dt) << std::endl;
    };
    generate(c.max_n, cache, opt);
    Table t({"n", "kappa_n", "decimal"});
    for (std::size_t n = 0; n <= c.max_n; ++n) generate_line(t, n, cache[n].kappa, c.places());
    t.render(out, c.format);
    return kExitOk;
}

inline int cmd_constants(const Config& c, std::ostream& out, std::ostream&) {
    const std::vector<BigRat> k = load_kappas(c, c.max_n);
    const std::size_t p = c.places();
    Table t({"n", "kappa_n", "theta_n", "kappa'_n"});
    for (std::size_t n = 0; n <= c.max_n; ++n) {
        std::vector<std::string> row{std::to_string(n), to_decimal(k[n], p)};
        if (n >= 1 && n + 1 <= c.max_n) {
            row.push_back(to_decimal(theta(k, n), p));
            row.push_back(to_decimal(aitken(k, n), p));
        }
        t.add(std::move(row));
    }
    t.render(out, c.format);
    return kExitOk;
}

inline int cmd_bounds(const Config& c, std::ostream& out, std::ostream&) {
    if (c.max_n < 1) throw UsageError("bounds needs --max-n >= 1");
    const std::vector<BigRat> k = load_kappas(c, c.max_n);
    const std::size_t p = c.places();
    Table t({"kind", "lower", "upper", "lower source", "upper source"});
    auto add = [&](const std::string& kind, const RationalInterval& iv) {
        // outward rounding keeps the printed interval an enclosure
        t.add({kind, to_decimal(iv.lo, p, Rounding::Down), to_decimal(iv.hi, p, Rounding::Up),
               std::string(to_string(iv.lo_source)) + " n=" + std::to_string(iv.lo_index),
               std::string(to_string(iv.hi_source)) + " n=" + std::to_string(iv.hi_index)});
    };
    add("unconditional", enclosure(k, EnclosureMode::Unconditional));
    if (c.max_n >= 3) add("conjectural", enclosure(k, EnclosureMode::Conjectural));
    t.render(out, c.format);
    return kExitOk;
}

inline std::string level_name(std::size_t j) { return "kappa" + std::string(j, '\'') + "_n"; }

inline int cmd_accelerate(const Config& c, std::ostream& out, std::ostream&) {
    const std::vector<BigRat> k = load_kappas(c, c.max_n);
    if (k.size() < 2 * c.ladder_levels + 1) {
        throw UsageError("--levels " + std::to_string(c.ladder_levels) + " needs --max-n >= " +
                         std::to_string(2 * c.ladder_levels));
    }
    const AccelLadder lad = ladder(k, c.ladder_levels);
    std::vector<std::string> header{"n"};
    for (std::size_t j = 0; j <= c.ladder_levels; ++j) header.push_back(level_name(j));
    Table t(std::move(header));
    for (std::size_t n = 0; n <= c.max_n; ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (std::size_t j = 0; j <= c.ladder_levels; ++j) {
            const auto& lev = lad.level(j);
            row.push_back(lev.contains(n) ? to_decimal(lev.at(n), c.places()) : std::string());
        }
        t.add(std::move(row));
    }
    t.render(out, c.format);
    return kExitOk;
}

/// Curve samples are always CSV with header n,t,x,y.
inline int cmd_sample(const Config& c, std::ostream& out, std::ostream&) {
    const IterateCache cache = load_records(c, c.max_n);
    std::vector<std::size_t> ns(c.max_n + 1);
    for (std::size_t n = 0; n <= c.max_n; ++n) ns[n] = n;
    const SampleOptions opt{c.sample_points, c.places(17), c.spacing};
    sample_csv(out, ns, cache.records(), opt, Tolerance::pow2(c.eps_bits));
    return kExitOk;
}

inline int cmd_taylor(const Config& c, std::ostream& out, std::ostream&) {
    const std::vector<LaurentPoly> b = taylor_b(c.up_to);
    if (c.format == Format::Csv) {
        Table t({"n", "b_n"});
        for (std::size_t n = 0; n < b.size(); ++n) t.add({std::to_string(n), b[n].to_string()});
        t.render(out, c.format);
        return kExitOk;
    }
    for (std::size_t n = 0; n < b.size(); ++n) out << "b_" << n << " = " << b[n].to_string() << '\n';
    return kExitOk;
}

inline void observation_rows(Table& t, const ObservationReport& rep) {
    for (const auto& e : rep.entries) t.add({std::to_string(e.n), e.quantity, e.value.to_string(), to_string(e.status)});
}

inline void observation_notes(std::ostream& out, const ObservationReport& rep) {
    out << rep.summary() << '\n';
    for (const auto& e : rep.entries) {
        if (e.status != ObsStatus::Holds) out << "  n=" << e.n << ": " << e.note << '\n';
    }
}

/// obs1 over kappa_0..kappa_max_n; obs2 over the cached records within range.
inline int cmd_observations(const Config& c, std::ostream& out, std::ostream&) {
    const std::vector<BigRat> k = load_kappas(c, c.max_n);
    std::vector<IterateRecord> recs;
    if (std::filesystem::exists(c.cache_path)) {
        const IterateCache cache = IterateCache::load(c.cache_path, c.max_n + 1);
        recs.assign(cache.records().begin(), cache.records().end());
    }
    const ObservationReport coprime = obs1_coprimality(k);
    const ObservationReport divides = obs1_divisibility(k);
    const ObservationReport signs = obs2_sign_pattern(recs);
    Table t({"n", "quantity", "value", "status"});
    for (const auto* rep : {&coprime, &divides, &signs}) observation_rows(t, *rep);
    t.render(out, c.format);
    if (c.format == Format::Text) {
        out << '\n';
        for (const auto* rep : {&coprime, &divides, &signs}) observation_notes(out, *rep);
    }
    return kExitOk;
}

inline const char* to_string(ClauseStatus s) {
    switch (s) {
        case ClauseStatus::Pass: return "pass";
        case ClauseStatus::Fail: return "FAIL";
        case ClauseStatus::Skipped: return "skipped";
    }
    return "?";
}

/// Invariant clauses for every record, then the ratio chain and the
/// observations. Only a failed clause changes the exit status.
inline int cmd_verify(const Config& c, std::ostream& out, std::ostream&) {
    const IterateCache cache = load_records(c, c.max_n);
    Table t({"n", "check", "status", "detail"});
    bool failed = false;
    for (std::size_t n = 0; n <= c.max_n; ++n) {
        for (const auto& cl : check_invariants(cache.records(), n).clauses) {
            failed = failed || cl.status == ClauseStatus::Fail;
            t.add({std::to_string(n), cl.clause, to_string(cl.status),
                   cl.status == ClauseStatus::Fail ? cl.detail.substr(0, 200) : std::string()});
        }
    }
    const std::vector<BigRat> k = cache.kappas();
    if (k.size() >= 5) {
        for (const auto& ch : check_ratio_chain(k)) {
            const std::size_t m = ch.m;
            t.add({std::to_string(m), "theta_" + std::to_string(2 * m) + " < theta_" + std::to_string(2 * m + 2) +
                                          " < theta_" + std::to_string(2 * m + 3) + " < theta_" +
                                          std::to_string(2 * m + 1) + " (conditional on Conjecture 1)",
                   ch.holds ? "holds" : "fails", std::string()});
        }
    }
    const ObservationReport reps[] = {obs1_coprimality(k), obs1_divisibility(k), obs2_sign_pattern(cache.records())};
    for (const auto& rep : reps) {
        for (const auto& e : rep.entries) {
            t.add({std::to_string(e.n), rep.title + " [" + e.value.to_string() + "]", to_string(e.status), e.note});
        }
    }
    t.render(out, c.format);
    if (c.format == Format::Text) {
        out << '\n' << (failed ? "invariant failures found" : "all invariant clauses pass") << '\n';
    }
    return failed ? kExitInvariant : kExitOk;
}

enum class Command { Generate, Constants, Bounds, Accelerate, Sample, Taylor, Observations, Verify };

/// Runs one command and maps errors to exit codes; messages go to `log`.
inline int run(Command cmd, const Config& c, std::ostream& out, std::ostream& log) {
    try {
        validate(c);
        switch (cmd) {
            case Command::Generate: return cmd_generate(c, out, log);
            case Command::Constants: return cmd_constants(c, out, log);
            case Command::Bounds: return cmd_bounds(c, out, log);
            case Command::Accelerate: return cmd_accelerate(c, out, log);
            case Command::Sample: return cmd_sample(c, out, log);
            case Command::Taylor: return cmd_taylor(c, out, log);
            case Command::Observations: return cmd_observations(c, out, log);
            case Command::Verify: return cmd_verify(c, out, log);
        }
    } catch (const UsageError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InconsistencyError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const std::exception& e) {
        // missing or corrupt cache, I/O failures
        log << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace stribola::cli

#endif  // STRIBOLA_CLI_HPP
