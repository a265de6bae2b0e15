// Command-line front end: parse flags, hand off to the runner, map
// exceptions onto documented exit codes.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "subdiff/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"subdiffusion kernel certification and Harnack harness"};
    app.require_subcommand(0, 1);

    subdiff::RunnerOptions opt;
    app.add_option("--config", opt.config_path, "path to a key = value config file");
    app.add_option("--out", opt.out_override, "output directory for CSV artifacts");
    app.add_option("--threads", opt.threads, "worker threads for sweeps");
    auto* seed_opt =
        app.add_option("--seed", opt.seed, "seed for randomized sampling grids");

    app.add_subcommand("certify", "check kernel assumptions and consequences");
    app.add_subcommand("solve", "run the time-stepping scheme, write the field");
    app.add_subcommand("harnack", "measure the two-box inequality on a solve");
    app.add_subcommand("hoelder", "measure oscillation decay on a solve");
    app.add_subcommand("sweep", "run the configured fleet and aggregate");
    app.add_subcommand("presets", "list built-in kernels, coefficients, and data");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    for (const auto* sub : app.get_subcommands()) opt.mode = sub->get_name();
    opt.have_seed = seed_opt->count() > 0;

    try {
        return subdiff::run(opt);
    } catch (const subdiff::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const subdiff::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const subdiff::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
