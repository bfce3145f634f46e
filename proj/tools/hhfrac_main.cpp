#include "hhfrac/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using hhfrac::RunConfig;

    CLI::App app{"Hilfer-Hadamard pseudo-parabolic toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "out";
    std::uint64_t seed = 7;
    app.add_option("--config", config_path, "flat JSON file with parameters (flags override it)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized suites");

    // One string slot per parameter; typing happens in hhfrac::run so that
    // file and flag values go through the same checks.
    std::map<std::string, std::map<std::string, std::string>> flags;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> about{
        {"laws", "randomized operator-law suite, writes laws.csv"},
        {"certificate", "critical exponent and hypothesis check, writes certificate.json"},
        {"testfn-decay", "time test-function functional over a T ladder, writes decay.csv"},
        {"scaling", "spatial Laplacian functional over a T ladder, writes scaling.csv"},
        {"solve", "integrate the regularized problem, writes norms.csv"},
        {"scan-p", "solve over a list of exponents, writes scan.csv"},
        {"weakcheck", "weak-form residual under mesh refinement, writes weak.csv"},
    };
    for (const auto& name : hhfrac::command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        subs[name] = sub;
        sub->add_option("--config", config_path, "flat JSON file with parameters");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for randomized suites");
        for (const auto& [key, value] : hhfrac::command_defaults(name).items()) {
            auto& slot = flags[name][key];
            sub->add_option("--" + key, slot, "default " + value.dump())->allow_extra_args(false);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hhfrac::kExitInvalidInput;
    }

    RunConfig cfg;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) cfg.command = name;
    cfg.output_path = out_dir;
    cfg.seed = seed;
    try {
        if (!config_path.empty()) cfg.parameters = hhfrac::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hhfrac::kExitInvalidInput;
    }
    auto* sub = subs.at(cfg.command);
    for (const auto& [key, value] : flags[cfg.command])
        if (sub->count("--" + key) > 0) cfg.parameters[key] = value;

    return hhfrac::run(cfg, std::cout, std::cerr);
}
