#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ratectl/config.hpp"
#include "ratectl/controller.hpp"
#include "ratectl/evolution.hpp"
#include "ratectl/funcmin.hpp"
#include "ratectl/probe.hpp"
#include "ratectl/sr.hpp"

namespace ratectl {

inline constexpr char const* kRunsHeader = "run_id,seed,controller,problem,solved,solve_generation,final_best_error";
inline constexpr char const* kGenerationsHeader = "run_id,generation,best_error,mean_log_rate,epsilon";
inline constexpr char const* kProbeHeader = "generation,rate,reward_kind,smoothed_value";

struct RunSummary {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::string controller;
    std::string problem;
    bool solved = false;
    int solve_generation = -1;
    double final_best_error = 0.0;
};

// Shortest round-trip decimal form; identical on every conforming platform.
std::string format_double(double v);

std::unique_ptr<RateController> make_controller(ControllerKind kind, ExperimentSpec const& spec, std::uint64_t seed);

// Calls fn with the concrete problem object selected by the spec.
template <typename Fn>
decltype(auto) with_problem(ProblemSettings const& settings, Fn&& fn)
{
    if (settings.domain == Domain::SymbolicRegression) {
        SrProblem const problem(parse_nguyen(settings.id), settings.sr);
        return fn(problem);
    }
    FuncMinProblem const problem(parse_test_function(settings.id), settings.dimension, settings.init_sigma);
    return fn(problem);
}

// One seeded run of one controller.
RunResult run_single(ExperimentSpec const& spec, ControllerKind kind, std::uint64_t seed,
    std::function<void(GenerationRecord const&)> const& on_record = {});

// Probe pass for one seed with a fixed-rate host.
ProbeResult probe_single(ExperimentSpec const& spec, std::uint64_t seed);

// Averages per-run probe rows over the runs that reached each generation.
std::vector<ProbeRow> average_probe_rows(std::vector<std::vector<ProbeRow>> const& per_run);

// Executes every controller × run, writes runs.csv and generations.csv (and
// probe.csv when the probe is on), then prints the summary table.
// Throws std::runtime_error if outputs exist and `force` is false.
int run_experiment(ExperimentSpec const& spec, bool force, std::ostream& out);

// Probe-only batch: probe.csv plus the host runs' CSV files.
int run_probe_experiment(ExperimentSpec const& spec, bool force, std::ostream& out);

std::vector<RunSummary> read_runs_csv(std::string const& path);

// Success counts, mean final error with bootstrap CI, and Welch / two-proportion
// p-values of every controller against the first one listed.
void print_summary(std::vector<RunSummary> const& runs, std::ostream& out);

} // namespace ratectl
