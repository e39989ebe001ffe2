#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ratectl/analysis.hpp"
#include "ratectl/controller.hpp"
#include "ratectl/evolution.hpp"

namespace ratectl {

struct ProbeConfig {
    std::vector<double> rates {0.01, 0.03, 0.1, 0.3, 1.0};
    std::size_t samples_per_generation = 0;  // 0: the host population size
    std::size_t kernel = 100;                 // max-pooling window, len_history
    double alpha = 0.01;                      // EWMA rate
};

enum class RewardKind { Immediate, MaxWindow };

inline std::string_view to_string(RewardKind k) { return k == RewardKind::Immediate ? "immediate" : "max_window"; }

struct ProbeRow {
    int generation = 0;
    double rate = 0.0;
    RewardKind kind = RewardKind::Immediate;
    double value = 0.0;
};

struct ProbeResult {
    std::vector<double> rates;
    // rewards[r][s]: immediate reward of shadow sample s at rates[r].
    std::vector<std::vector<double>> rewards;
    // Generation of each shadow sample (shared by every rate).
    std::vector<int> sample_generation;
    // Rewards of the host run's real children.
    std::vector<double> host_rewards;
    std::vector<int> host_generation;
    std::vector<ProbeRow> rows;
    RunResult host;
};

// Smooths each rate's concatenated reward stream, raw and max-pooled, and
// reports the smoothed value at the last sample of every generation. A pooled
// output is attributed to the generation of its window's final sample.
std::vector<ProbeRow> probe_rows(std::vector<double> const& rates, std::vector<std::vector<double>> const& rewards,
    std::vector<int> const& sample_generation, std::size_t kernel, double alpha);

// Runs the host with a fixed rate while shadow-sampling children at every
// probe rate. Shadow samples use a separate stream and never enter the population.
template <Problem P>
ProbeResult landscape_probe(P const& problem, RunConfig config, ProbeConfig const& probe, double host_rate = 0.1,
    bool enabled = true)
{
    if (probe.rates.empty()) {
        throw std::invalid_argument("probe: no probe rates");
    }
    ProbeResult result;
    result.rates = probe.rates;
    result.rewards.resize(probe.rates.size());
    std::size_t const samples = probe.samples_per_generation == 0 ? config.population : probe.samples_per_generation;

    Run<P> run(problem, config, std::make_unique<FixedController>(host_rate));
    Rng probe_rng(derive_seed(config.seed, Stream::Probe));
    TransformConfig const transform = config.transform;

    if (enabled) {
        run.on_generation([&](Run<P> const& host, Selector const& select) {
            int const gen = host.generation() + 1;
            auto const& pop = host.population();
            for (std::size_t s = 0; s < samples; ++s) {
                result.sample_generation.push_back(gen);
            }
            for (std::size_t r = 0; r < probe.rates.size(); ++r) {
                for (std::size_t s = 0; s < samples; ++s) {
                    auto const& parent = pop[select(probe_rng)];
                    auto const child = problem.mutate(parent.genome, probe.rates[r], probe_rng);
                    ErrorVector const errors = problem.evaluate(child);
                    result.rewards[r].push_back(immediate_reward(parent.errors, errors, transform));
                }
            }
        });
        run.on_child([&](auto const& parent, auto const& child, RateDraw const&) {
            result.host_rewards.push_back(immediate_reward(parent.errors, child.errors, transform));
            result.host_generation.push_back(run.generation() + 1);
        });
    }
    result.host = run.run();
    if (enabled) {
        result.rows = probe_rows(result.rates, result.rewards, result.sample_generation, probe.kernel, probe.alpha);
    }
    return result;
}

} // namespace ratectl
