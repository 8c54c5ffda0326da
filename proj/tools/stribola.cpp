#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "stribola/cli.hpp"

namespace cli = stribola::cli;

int main(int argc, char** argv) {
    CLI::App app{"Exact iterates, constants and bounds for the stribolic operator"};
    app.require_subcommand(1);

    cli::Config cfg;
    std::string cache = cfg.cache_path.string();
    std::string kappas;
    std::string format = "text";
    std::string spacing = "t";
    std::size_t digits = 0;

    const std::map<std::string, cli::Command> names{
        {"generate", cli::Command::Generate},     {"constants", cli::Command::Constants},
        {"bounds", cli::Command::Bounds},         {"accelerate", cli::Command::Accelerate},
        {"sample", cli::Command::Sample},         {"taylor", cli::Command::Taylor},
        {"observations", cli::Command::Observations}, {"verify", cli::Command::Verify}};
    const std::map<std::string, std::string> blurbs{
        {"generate", "extend the iterate cache to --max-n (or write a kappa table with --kappas)"},
        {"constants", "kappa_n, theta_n and kappa'_n for n <= --max-n"},
        {"bounds", "unconditional and conjectural enclosures of kappa"},
        {"accelerate", "iterated acceleration ladder with --levels levels"},
        {"sample", "curve samples of h_0..h_{max-n} as CSV n,t,x,y"},
        {"taylor", "derivatives b_0..b_{up-to} at the fixpoint as Laurent polynomials in t"},
        {"observations", "coprimality, divisibility and sign-pattern reports"},
        {"verify", "invariant suite over the cache; nonzero exit on any failed clause"}};

    for (const auto& [name, cmd] : names) {
        CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
        sub->add_option("--max-n", cfg.max_n, "highest index n")->capture_default_str();
        sub->add_option("--cache", cache, "iterate cache file")->capture_default_str();
        sub->add_option("--kappas", kappas, "exact kappa table (written by generate, read elsewhere)");
        sub->add_option("--digits", digits, "decimal places (default 20; 17 for sample)")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
        if (cmd == cli::Command::Accelerate) {
            sub->add_option("--levels", cfg.ladder_levels, "ladder depth")->capture_default_str();
        }
        if (cmd == cli::Command::Sample) {
            sub->add_option("--points", cfg.sample_points, "samples per curve")->capture_default_str();
            sub->add_option("--eps-bits", cfg.eps_bits, "bisection tolerance 2^-bits")->capture_default_str();
            sub->add_option("--spacing", spacing, "equal steps in the parameter t or in the abscissa x")
                ->check(CLI::IsMember({"t", "x"}))
                ->capture_default_str();
        }
        if (cmd == cli::Command::Taylor) {
            sub->add_option("--up-to", cfg.up_to, "highest derivative index")->capture_default_str();
        }
        if (cmd == cli::Command::Generate) {
            sub->add_flag("--allow-long", cfg.allow_long, "permit --max-n above 16");
        }
    }

    CLI11_PARSE(app, argc, argv);

    cfg.cache_path = cache;
    if (!kappas.empty()) cfg.kappa_path = kappas;
    if (digits > 0) cfg.decimal_places = digits;
    cfg.format = format == "csv" ? cli::Format::Csv : cli::Format::Text;
    cfg.spacing = spacing == "x" ? stribola::SampleSpacing::Abscissa : stribola::SampleSpacing::Parameter;

    const CLI::App* chosen = app.get_subcommands().front();
    return cli::run(names.at(chosen->get_name()), cfg, std::cout, std::cerr);
}
