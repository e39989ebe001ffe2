#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"

namespace ratectl {

enum class SelectionKind { Truncation, Lexicase, EpsilonLexicase };

SelectionKind parse_selection(std::string_view name);
std::string_view to_string(SelectionKind kind);

// Uniform draw among the `truncation` best by mean error. `order` must be the
// population sorted by mean error (stable).
std::size_t truncation_select(std::span<std::size_t const> order, std::size_t truncation, Rng& rng);

// Lexicase over a random case order; `epsilons` (one per case, may be empty
// for exact lexicase) relaxes "best" to "within epsilon of the best".
std::size_t lexicase_select(std::span<ErrorVector const* const> errors, std::span<double const> epsilons, Rng& rng);

// Per-case median absolute deviation across the population.
std::vector<double> median_absolute_deviations(std::span<ErrorVector const* const> errors);

// Population-level selection state, rebuilt once per generation.
class Selector {
public:
    Selector(SelectionKind kind, std::size_t truncation, std::vector<ErrorVector const*> errors);

    std::size_t operator()(Rng& rng) const;

    [[nodiscard]] std::vector<std::size_t> const& order() const { return order_; }
    [[nodiscard]] std::vector<double> const& epsilons() const { return epsilons_; }

private:
    SelectionKind kind_;
    std::size_t truncation_;
    std::vector<ErrorVector const*> errors_;
    std::vector<std::size_t> order_;
    std::vector<double> epsilons_;
};

// Indices sorted by mean raw error, ties in index order.
std::vector<std::size_t> rank_by_mean_error(std::span<ErrorVector const* const> errors);

} // namespace ratectl
