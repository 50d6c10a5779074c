// Experiment runner: named scenarios over the kinetic-energy geometry of the
// Mobius actions, plus the acceptance suite.

#include <cstdio>

#include <CLI11.hpp>

#include "mobius/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mobius - kinetic-energy geometry experiments for split unitary groups"};
    app.require_subcommand(1);

    std::string config_path;
    uint64_t seed = 0;
    std::string out_dir;
    int workers = 0;

    auto* run = app.add_subcommand("run", "run a scenario described by a JSON config");
    run->add_option("config", config_path, "path to the config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config RNG seed");
    run->add_option("--out", out_dir, "override the output directory");
    run->add_option("--workers", workers, "worker threads (0 = hardware)");

    auto* list = app.add_subcommand("list-scenarios", "list scenario names");

    auto* acc = app.add_subcommand("acceptance", "run the full acceptance suite");
    acc->add_option("--out", out_dir, "output directory for the report");
    acc->add_option("--workers", workers, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& [name, desc] : mobius::experiments::kScenarios)
            std::printf("%-22s %s\n", name.c_str(), desc.c_str());
        return 0;
    }
    if (acc->parsed()) {
        auto results =
            mobius::experiments::run_acceptance(workers, out_dir.empty() ? "mobius-out" : out_dir);
        for (const auto& r : results)
            if (!r.pass) return 1;
        return 0;
    }
    mobius::experiments::RunOptions opts;
    opts.workers = workers;
    if (seed_opt->count() > 0) {
        opts.seed_override = seed;
        opts.has_seed_override = true;
    }
    opts.out_dir_override = out_dir;
    return mobius::experiments::run_config_file(config_path, opts);
}
