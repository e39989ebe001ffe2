#pragma once

#include <cstddef>
#include <vector>

#include "ratectl/reward.hpp"

namespace ratectl {

// One tiling of the closed interval [lower, upper] (log-rate coordinates).
// Tile 0 is the partial interval [lower, lower + offset), empty when offset == 0;
// tile k >= 1 covers [lower + offset + (k-1)·width, lower + offset + k·width).
// Indices past the last tile are clamped onto it.
class TileCoding {
public:
    TileCoding(double lower, double upper, double offset, double width, std::size_t history_capacity = 100);

    [[nodiscard]] std::size_t tile_count() const { return values_.size(); }
    [[nodiscard]] std::size_t tile_index(double x) const;

    [[nodiscard]] double tile_value(double x) const { return values_[tile_index(x)]; }

    // SGD with Nesterov-style momentum toward `target` on the tile covering x.
    // Returns the updated tile index.
    std::size_t update_tile(double x, double target, double learning_rate, double momentum);

    // Pushes `reward` onto the covering tile's history, then updates toward the window max.
    std::size_t observe(double x, double reward, double learning_rate, double momentum);

    [[nodiscard]] double lower() const { return lower_; }
    [[nodiscard]] double upper() const { return upper_; }
    [[nodiscard]] double offset() const { return offset_; }
    [[nodiscard]] double width() const { return width_; }

    [[nodiscard]] std::vector<double> const& values() const { return values_; }
    [[nodiscard]] std::vector<double> const& momenta() const { return momenta_; }
    [[nodiscard]] std::vector<RewardHistory> const& histories() const { return histories_; }

    // Direct state access for checkpoint restore and test fixtures.
    std::vector<double>& mutable_values() { return values_; }
    std::vector<double>& mutable_momenta() { return momenta_; }
    std::vector<RewardHistory>& mutable_histories() { return histories_; }

    bool operator==(TileCoding const&) const = default;

private:
    double lower_;
    double upper_;
    double offset_;
    double width_;
    std::vector<double> values_;
    std::vector<double> momenta_;
    std::vector<RewardHistory> histories_;
};

// Tile count for the given geometry (see TileCoding).
std::size_t tile_count_for(double lower, double upper, double offset, double width);

} // namespace ratectl
