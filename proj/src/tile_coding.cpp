#include "ratectl/tile_coding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ratectl {

std::size_t tile_count_for(double lower, double upper, double offset, double width)
{
    if (!(lower < upper)) {
        throw std::invalid_argument("TileCoding: lower must be below upper");
    }
    if (!(width > 0.0)) {
        throw std::invalid_argument("TileCoding: width must be positive");
    }
    if (!(offset >= 0.0) || !(offset < upper - lower)) {
        throw std::invalid_argument("TileCoding: offset must lie in [0, upper - lower)");
    }
    double const span = upper - lower;
    if (offset > 0.0) {
        return static_cast<std::size_t>(std::floor((span - offset) / width)) + 2;
    }
    return static_cast<std::size_t>(std::floor(span / width)) + 1;
}

TileCoding::TileCoding(double lower, double upper, double offset, double width, std::size_t history_capacity)
    : lower_(lower)
    , upper_(upper)
    , offset_(offset)
    , width_(width)
{
    std::size_t const n = tile_count_for(lower, upper, offset, width);
    values_.assign(n, 0.0);
    momenta_.assign(n, 0.0);
    histories_.assign(n, RewardHistory(history_capacity));
}

std::size_t TileCoding::tile_index(double x) const
{
    if (!(x >= lower_ && x < upper_)) {
        throw std::out_of_range("TileCoding::tile_index: " + std::to_string(x) + " outside ["
            + std::to_string(lower_) + ", " + std::to_string(upper_) + ")");
    }
    double const rel = x - lower_ - offset_;
    if (rel < 0.0) {
        return 0;
    }
    auto idx = static_cast<std::size_t>(std::floor(rel / width_)) + 1;
    return idx < values_.size() ? idx : values_.size() - 1;
}

std::size_t TileCoding::update_tile(double x, double target, double learning_rate, double momentum)
{
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("TileCoding::update_tile: learning rate must be positive");
    }
    std::size_t const i = tile_index(x);
    double const g = 2.0 * (values_[i] - target);
    momenta_[i] = momentum * momenta_[i] + g;
    values_[i] -= learning_rate * (g + momentum * momenta_[i]);
    return i;
}

std::size_t TileCoding::observe(double x, double reward, double learning_rate, double momentum)
{
    std::size_t const i = tile_index(x);
    double const target = windowed_max(histories_[i], reward);
    return update_tile(x, target, learning_rate, momentum);
}

} // namespace ratectl
