#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ratectl/config.hpp"
#include "ratectl/experiment.hpp"

namespace {

struct Common {
    std::optional<std::string> config;
    std::optional<std::string> preset;
    std::optional<std::string> problem;
    std::optional<std::string> controllers;
    std::optional<std::uint64_t> seed_base;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> jobs;
    std::optional<std::string> out;
    bool force = false;
};

void add_common(CLI::App* cmd, Common& c, bool outputs)
{
    cmd->add_option("--config", c.config, "Config file (key = value, [section] headers)");
    cmd->add_option("--preset", c.preset, "Built-in preset: funcmin-desk, sr-desk, paper-full");
    cmd->add_option("--problem", c.problem, "Problem id (sphere, ackley, ..., nguyen1..nguyen8)");
    cmd->add_option("--controllers", c.controllers, "Comma-separated controller list");
    cmd->add_option("--seed-base", c.seed_base, "Run i uses seed = seed-base + i");
    cmd->add_option("--runs", c.runs, "Number of runs per controller");
    cmd->add_option("--jobs", c.jobs, "Parallel runs");
    if (outputs) {
        cmd->add_option("--out", c.out, "Output directory");
        cmd->add_flag("--force", c.force, "Overwrite existing outputs");
    }
}

ratectl::ExperimentSpec load(Common const& c)
{
    ratectl::RawConfig raw;
    if (c.preset) {
        raw = ratectl::preset(*c.preset);
    }
    if (c.config) {
        for (auto& [k, v] : ratectl::parse_config_file(*c.config).entries) {
            raw.entries[k] = v;
        }
    }
    ratectl::apply_env_overrides(raw, [](char const* name) { return std::getenv(name); });
    auto flag = [&](char const* key, std::string value) { raw.set(key, std::move(value), "command line"); };
    if (c.problem) flag("problem", *c.problem);
    if (c.controllers) flag("controllers", *c.controllers);
    if (c.seed_base) flag("seed_base", std::to_string(*c.seed_base));
    if (c.runs) flag("runs", std::to_string(*c.runs));
    if (c.jobs) flag("jobs", std::to_string(*c.jobs));
    if (c.out) flag("output", *c.out);
    return ratectl::build_spec(raw);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Mutation-rate control experiments"};
    app.require_subcommand(1);

    Common run_opts;
    auto* run = app.add_subcommand("run", "Run every controller for the configured number of seeds");
    add_common(run, run_opts, true);

    Common probe_opts;
    auto* probe = app.add_subcommand("probe", "Landscape probe with a fixed-rate host");
    add_common(probe, probe_opts, true);

    std::string stats_path;
    auto* stats = app.add_subcommand("stats", "Summary table from an existing runs.csv");
    stats->add_option("path", stats_path, "runs.csv or the directory containing it")->required();

    Common validate_opts;
    auto* validate = app.add_subcommand("validate", "Print the normalized configuration");
    add_common(validate, validate_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return ratectl::run_experiment(load(run_opts), run_opts.force, std::cout);
        }
        if (probe->parsed()) {
            return ratectl::run_probe_experiment(load(probe_opts), probe_opts.force, std::cout);
        }
        if (stats->parsed()) {
            std::filesystem::path p(stats_path);
            if (std::filesystem::is_directory(p)) {
                p /= "runs.csv";
            }
            ratectl::print_summary(ratectl::read_runs_csv(p.string()), std::cout);
            return 0;
        }
        if (validate->parsed()) {
            std::cout << load(validate_opts).render();
            return 0;
        }
    } catch (ratectl::ConfigError const& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
