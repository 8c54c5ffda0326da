#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stribola/cli.hpp"

using namespace stribola;
using namespace stribola::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string log;
};

Run run_cmd(Command cmd, const Config& c) {
    std::ostringstream out, log;
    const int code = run(cmd, c, out, log);
    return {code, out.str(), log.str()};
}

/// Fresh directory per test case.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("stribola_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    [[nodiscard]] Config config(std::size_t max_n) const {
        Config c;
        c.cache_path = dir / "test.cache";
        c.max_n = max_n;
        return c;
    }
};

}  // namespace

TEST_CASE("generate prints exact and decimal kappa", "[cli]") {
    Scratch s("generate");
    const Run r = run_cmd(Command::Generate, s.config(6));
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("6  24941/89148  0.27977071835599228250\n") != std::string::npos);
    CHECK(fs::exists(s.dir / "test.cache"));

    Config zero = s.config(0);
    zero.cache_path = s.dir / "zero.cache";
    const Run z = run_cmd(Command::Generate, zero);
    CHECK(z.out == "n  kappa_n  decimal\n0  1        1.00000000000000000000\n");
    std::ifstream in(zero.cache_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "STRIBOLA-CACHE v1");
}

TEST_CASE("long runs need --allow-long", "[cli]") {
    Scratch s("long");
    const Run r = run_cmd(Command::Generate, s.config(17));
    CHECK(r.code == kExitUsage);
    CHECK(r.log.find("--allow-long") != std::string::npos);
    CHECK_FALSE(fs::exists(s.dir / "test.cache"));
}

TEST_CASE("constants table layout and blanks", "[cli]") {
    Scratch s("constants");
    run_cmd(Command::Generate, s.config(10));
    Config c = s.config(10);
    c.format = Format::Csv;
    const Run r = run_cmd(Command::Constants, c);
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("n,kappa_n,theta_n,kappa'_n\n0,1.00000000000000000000,,\n", 0) == 0);
    CHECK(r.out.find("\n10,0.27889212741232722442,,\n") != std::string::npos);
    CHECK(r.out.find("\n9,0.27891933053410580614,0.36746593866934728811,0.27887632396190421606\n") != std::string::npos);
}

TEST_CASE("missing or corrupt data is a data error", "[cli]") {
    Scratch s("missing");
    const Run none = run_cmd(Command::Constants, s.config(5));
    CHECK(none.code == kExitData);
    CHECK(none.log.find("generate --max-n 5") != std::string::npos);

    run_cmd(Command::Generate, s.config(4));
    CHECK(run_cmd(Command::Constants, s.config(8)).code == kExitData);
    CHECK(run_cmd(Command::Verify, s.config(8)).code == kExitData);

    std::ofstream(s.dir / "test.cache") << "STRIBOLA-CACHE v1\n0 1 1/1 1 1 1\n1 1 1/3 0 1 -1\n";
    CHECK(run_cmd(Command::Generate, s.config(3)).code == kExitData);
    CHECK(run_cmd(Command::Constants, s.config(1)).code == kExitData);
}

TEST_CASE("bounds report both enclosures with their provenance", "[cli]") {
    Scratch s("bounds");
    run_cmd(Command::Generate, s.config(8));
    const Run one = run_cmd(Command::Bounds, s.config(1));
    CHECK(one.code == kExitOk);
    CHECK(one.out.find("unconditional  0.00000000000000000000  0.50000000000000000000") != std::string::npos);
    CHECK(one.out.find("conjectural") == std::string::npos);

    const Run eight = run_cmd(Command::Bounds, s.config(8));
    CHECK(eight.out.find("conjectural") != std::string::npos);
    CHECK(eight.out.find("(conditional on Conjecture 1) n=5") != std::string::npos);
    CHECK(eight.out.find("(conditional on Conjecture 1) n=6") != std::string::npos);
    CHECK(run_cmd(Command::Bounds, s.config(0)).code == kExitUsage);
}

TEST_CASE("accelerate prints one column per level", "[cli]") {
    Scratch s("accelerate");
    run_cmd(Command::Generate, s.config(10));
    Config c = s.config(10);
    c.ladder_levels = 2;
    c.format = Format::Csv;
    const Run r = run_cmd(Command::Accelerate, c);
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("n,kappa_n,kappa'_n,kappa''_n\n0,1.00000000000000000000,,\n", 0) == 0);
    CHECK(r.out.find("\n2,0.33333333333333333333,0.29166666666666666667,") != std::string::npos);
    c.ladder_levels = 6;
    CHECK(run_cmd(Command::Accelerate, c).code == kExitUsage);
}

TEST_CASE("taylor text and csv", "[cli]") {
    Config c;
    c.up_to = 4;
    const Run r = run_cmd(Command::Taylor, c);
    CHECK(r.out == "b_0 = t\nb_1 = -t\nb_2 = t^-1\nb_3 = -t^-4\nb_4 = 3*t^-7 - t^-8\n");
    c.format = Format::Csv;
    CHECK(run_cmd(Command::Taylor, c).out.rfind("n,b_n\n0,t\n", 0) == 0);
}

TEST_CASE("sample emits the curve CSV", "[cli]") {
    Scratch s("sample");
    run_cmd(Command::Generate, s.config(3));
    Config c = s.config(2);
    c.sample_points = 2;
    const Run r = run_cmd(Command::Sample, c);
    CHECK(r.out ==
          "n,t,x,y\n0,0.00000000000000000,0.00000000000000000,1.00000000000000000\n"
          "0,1.00000000000000000,1.00000000000000000,1.00000000000000000\n"
          "1,0.00000000000000000,0.00000000000000000,1.00000000000000000\n"
          "1,1.00000000000000000,1.00000000000000000,0.00000000000000000\n"
          "2,0.00000000000000000,1.00000000000000000,0.00000000000000000\n"
          "2,1.00000000000000000,0.00000000000000000,1.00000000000000000\n");
}

TEST_CASE("observations report columns", "[cli]") {
    Scratch s("observations");
    run_cmd(Command::Generate, s.config(8));
    Config c = s.config(8);
    c.format = Format::Csv;
    const Run r = run_cmd(Command::Observations, c);
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("n,quantity,value,status\n", 0) == 0);
    CHECK(r.out.find("\n5,\"gcd(mu_n,mu_n+1)\",7,exception\n") != std::string::npos);
    CHECK(r.out.find("\n7,\"mu_n/gcd(mu_n,nu_n+1)\",361,exception\n") != std::string::npos);
}

TEST_CASE("verify passes and output is deterministic", "[cli]") {
    Scratch s("verify");
    run_cmd(Command::Generate, s.config(10));
    const Run a = run_cmd(Command::Verify, s.config(10));
    const Run b = run_cmd(Command::Verify, s.config(10));
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("FAIL") == std::string::npos);
    CHECK(a.out.find("all invariant clauses pass") != std::string::npos);
}

TEST_CASE("verify fails on a broken identity", "[cli]") {
    Scratch s("verify_bad");
    run_cmd(Command::Generate, s.config(6));
    // swap in a record that is locally sound but inconsistent with its neighbours
    IterateCache cache = IterateCache::load(s.dir / "test.cache");
    std::vector<IterateRecord> recs(cache.records().begin(), cache.records().end());
    recs[4].kappa = BigRat(BigInt(2), BigInt(7)) - BigRat(BigInt(1), BigInt(1000));
    std::ofstream out(s.dir / "test.cache", std::ios::trunc);
    out << kCacheHeader << '\n';
    for (const auto& r : recs) write_record(out, r);
    out.close();
    CHECK(run_cmd(Command::Verify, s.config(6)).code == kExitInvariant);
}

TEST_CASE("kappa table extends the cache", "[cli]") {
    Scratch s("kappas");
    Config gen = s.config(9);
    gen.kappa_path = s.dir / "k.table";
    CHECK(run_cmd(Command::Generate, gen).code == kExitOk);
    CHECK(load_kappa_table(s.dir / "k.table").size() == 10);

    run_cmd(Command::Generate, s.config(4));
    Config c = s.config(9);
    c.kappa_path = s.dir / "k.table";
    const Run with_table = run_cmd(Command::Constants, c);
    CHECK(with_table.code == kExitOk);
    CHECK(with_table.out.find("0.27891933053410580614") != std::string::npos);
    c.kappa_path.reset();
    CHECK(run_cmd(Command::Constants, c).code == kExitData);
}

TEST_CASE("generate is resumable and rerunning is idempotent", "[cli]") {
    Scratch s("resume");
    run_cmd(Command::Generate, s.config(5));
    const Run full = run_cmd(Command::Generate, s.config(9));
    std::ifstream in(s.dir / "test.cache");
    std::stringstream first;
    first << in.rdbuf();
    in.close();
    const Run again = run_cmd(Command::Generate, s.config(9));
    std::ifstream in2(s.dir / "test.cache");
    std::stringstream second;
    second << in2.rdbuf();
    CHECK(first.str() == second.str());
    CHECK(full.out == again.out);
}
