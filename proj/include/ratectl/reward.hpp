#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace ratectl {

using ErrorVector = std::vector<double>;

// Symmetric log transform sgn(x)·ln(c + |x|). With `identity` set the
// transform is skipped (one-dimensional error vectors).
struct TransformConfig {
    double c = 1.0;
    bool identity = false;

    static TransformConfig integer_errors() { return {1.0, false}; }
    static TransformConfig symbolic_regression() { return {0.01, false}; }
    static TransformConfig function_minimization() { return {1.0, true}; }
};

double transform_error(double x, TransformConfig const& cfg);

double mean_transformed_error(std::span<double const> errors, TransformConfig const& cfg);

// Decrease in mean transformed error from parent to child; positive when the child improved.
double immediate_reward(std::span<double const> parent, std::span<double const> child, TransformConfig const& cfg);

// Bounded FIFO of rewards. Pushing into a full history evicts the oldest entry.
class RewardHistory {
public:
    explicit RewardHistory(std::size_t capacity = 100);

    void push(double reward);
    [[nodiscard]] double max() const;

    [[nodiscard]] std::size_t size() const { return buffer_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] bool empty() const { return buffer_.empty(); }
    [[nodiscard]] std::deque<double> const& contents() const { return buffer_; }

    bool operator==(RewardHistory const&) const = default;

private:
    std::size_t capacity_;
    std::deque<double> buffer_;
};

// Pushes `reward` and returns the maximum over the last `capacity` entries.
double windowed_max(RewardHistory& history, double reward);

} // namespace ratectl
