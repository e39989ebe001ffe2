#include "ratectl/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratectl {

double transform_error(double x, TransformConfig const& cfg)
{
    if (!std::isfinite(x)) {
        throw std::domain_error("transform_error: non-finite error value");
    }
    if (cfg.identity) {
        return x;
    }
    if (!(cfg.c > 0.0)) {
        throw std::invalid_argument("transform_error: c must be positive");
    }
    if (x == 0.0) {
        return 0.0;
    }
    double const mag = std::log(cfg.c + std::abs(x));
    return x > 0.0 ? mag : -mag;
}

double mean_transformed_error(std::span<double const> errors, TransformConfig const& cfg)
{
    if (errors.empty()) {
        throw std::invalid_argument("mean_transformed_error: empty error vector");
    }
    double sum = 0.0;
    for (double e : errors) {
        sum += transform_error(e, cfg);
    }
    return sum / static_cast<double>(errors.size());
}

double immediate_reward(std::span<double const> parent, std::span<double const> child, TransformConfig const& cfg)
{
    if (parent.size() != child.size()) {
        throw std::invalid_argument("immediate_reward: parent and child error vectors differ in length");
    }
    return mean_transformed_error(parent, cfg) - mean_transformed_error(child, cfg);
}

RewardHistory::RewardHistory(std::size_t capacity)
    : capacity_(capacity)
{
    if (capacity == 0) {
        throw std::invalid_argument("RewardHistory: capacity must be at least 1");
    }
}

void RewardHistory::push(double reward)
{
    if (buffer_.size() == capacity_) {
        buffer_.pop_front();
    }
    buffer_.push_back(reward);
}

double RewardHistory::max() const
{
    if (buffer_.empty()) {
        throw std::logic_error("RewardHistory::max on empty history");
    }
    return *std::max_element(buffer_.begin(), buffer_.end());
}

double windowed_max(RewardHistory& history, double reward)
{
    history.push(reward);
    return history.max();
}

} // namespace ratectl
