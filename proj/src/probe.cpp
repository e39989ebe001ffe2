#include "ratectl/probe.hpp"

namespace ratectl {

std::vector<ProbeRow> probe_rows(std::vector<double> const& rates, std::vector<std::vector<double>> const& rewards,
    std::vector<int> const& sample_generation, std::size_t kernel, double alpha)
{
    if (rewards.size() != rates.size()) {
        throw std::invalid_argument("probe_rows: one reward stream per rate required");
    }
    std::size_t const n = sample_generation.size();
    // Last sample index of each generation, in order.
    std::vector<std::pair<int, std::size_t>> ends;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 == n || sample_generation[i + 1] != sample_generation[i]) {
            ends.emplace_back(sample_generation[i], i);
        }
    }

    std::vector<std::vector<double>> smooth_raw(rates.size());
    std::vector<std::vector<double>> smooth_pooled(rates.size());
    for (std::size_t r = 0; r < rates.size(); ++r) {
        if (rewards[r].size() != n) {
            throw std::invalid_argument("probe_rows: reward stream length differs from sample count");
        }
        smooth_raw[r] = ewma(rewards[r], alpha);
        if (n >= kernel) {
            smooth_pooled[r] = ewma(max_pool_1d(rewards[r], kernel), alpha);
        }
    }

    std::vector<ProbeRow> rows;
    for (auto const& [gen, last] : ends) {
        for (std::size_t r = 0; r < rates.size(); ++r) {
            rows.push_back({gen, rates[r], RewardKind::Immediate, smooth_raw[r][last]});
            if (!smooth_pooled[r].empty() && last + 1 >= kernel) {
                rows.push_back({gen, rates[r], RewardKind::MaxWindow, smooth_pooled[r][last + 1 - kernel]});
            }
        }
    }
    return rows;
}

} // namespace ratectl
