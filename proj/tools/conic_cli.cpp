// Command line front end: simulate / quantiles / credit / bivariate /
// collapse / verify, each driven by an optional [section] config file with
// flag overrides. Exit codes: 0 success, 1 parameter error, 2 numeric
// failure, 3 verification-suite failure.

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "conic/app/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App cli{"conic: bounded-martingale simulation and survival-probability toolkit"};
    cli.require_subcommand(1);

    conic::app::CliOptions opt;
    std::uint64_t seed_flag = 0;
    std::size_t paths_flag = 0, steps_flag = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "experiment config file");
        sub->add_option("--out", opt.out_dir, "output directory (default: out)");
        sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed_flag, "seed override");
        sub->add_option("--paths", paths_flag, "path count override");
        sub->add_option("--steps", steps_flag, "step count override");
    };

    std::map<std::string, std::function<int(const conic::app::CliOptions&)>> commands{
        {"simulate", conic::app::cmd_simulate},   {"quantiles", conic::app::cmd_quantiles},
        {"credit", conic::app::cmd_credit},       {"bivariate", conic::app::cmd_bivariate},
        {"collapse", conic::app::cmd_collapse},   {"verify", conic::app::cmd_verify},
    };
    const std::map<std::string, std::string> descriptions{
        {"simulate", "sample paths of mapped martingales / the Doleans-Phi map"},
        {"quantiles", "quantile fans of the exponential and Phi martingales"},
        {"credit", "survival surface, running-survival SDE and conditional CDF data"},
        {"bivariate", "joint survival martingale under the Gaussian copula"},
        {"collapse", "long-horizon boundary collapse study"},
        {"verify", "run the invariant suite and emit a report"},
    };
    for (auto& [name, fn] : commands) add_common(cli.add_subcommand(name, descriptions.at(name)));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return 1;  // parameter error
    }

    CLI::App* sub = cli.get_subcommands().front();
    if (sub->count("--seed")) opt.seed = seed_flag;
    if (sub->count("--paths")) opt.paths = paths_flag;
    if (sub->count("--steps")) opt.steps = steps_flag;

    const std::string chosen = sub->get_name();
    try {
        return commands.at(chosen)(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}
