#include "ratectl/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ratectl {
namespace {

double mean_of(ErrorVector const& e)
{
    double s = 0.0;
    for (double v : e) {
        s += v;
    }
    return s / static_cast<double>(e.size());
}

double median_inplace(std::vector<double>& v)
{
    std::size_t const n = v.size();
    std::size_t const mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double const upper = v[mid];
    if (n % 2 == 1) {
        return upper;
    }
    double const lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    return 0.5 * (lower + upper);
}

} // namespace

SelectionKind parse_selection(std::string_view name)
{
    if (name == "truncation") return SelectionKind::Truncation;
    if (name == "lexicase") return SelectionKind::Lexicase;
    if (name == "epsilon-lexicase" || name == "epsilon_lexicase") return SelectionKind::EpsilonLexicase;
    throw std::invalid_argument("unknown selection operator '" + std::string(name) + "'");
}

std::string_view to_string(SelectionKind kind)
{
    switch (kind) {
    case SelectionKind::Truncation: return "truncation";
    case SelectionKind::Lexicase: return "lexicase";
    case SelectionKind::EpsilonLexicase: return "epsilon-lexicase";
    }
    return "unknown";
}

std::vector<std::size_t> rank_by_mean_error(std::span<ErrorVector const* const> errors)
{
    std::vector<double> means(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        means[i] = mean_of(*errors[i]);
    }
    std::vector<std::size_t> order(errors.size());
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
    return order;
}

std::size_t truncation_select(std::span<std::size_t const> order, std::size_t truncation, Rng& rng)
{
    if (truncation == 0 || truncation > order.size()) {
        throw std::invalid_argument("truncation_select: truncation size must lie in [1, N]");
    }
    return order[rng.below(truncation)];
}

std::size_t lexicase_select(std::span<ErrorVector const* const> errors, std::span<double const> epsilons, Rng& rng)
{
    if (errors.empty()) {
        throw std::invalid_argument("lexicase_select: empty population");
    }
    std::size_t const cases = errors.front()->size();
    if (!epsilons.empty() && epsilons.size() != cases) {
        throw std::invalid_argument("lexicase_select: epsilon count differs from case count");
    }
    std::vector<std::size_t> order(cases);
    std::iota(order.begin(), order.end(), std::size_t {0});
    for (std::size_t i = cases; i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    std::vector<std::size_t> pool(errors.size());
    std::iota(pool.begin(), pool.end(), std::size_t {0});
    std::vector<std::size_t> next;
    next.reserve(pool.size());
    for (std::size_t c : order) {
        if (pool.size() == 1) {
            break;
        }
        double best = (*errors[pool.front()])[c];
        for (std::size_t i : pool) {
            best = std::min(best, (*errors[i])[c]);
        }
        double const limit = best + (epsilons.empty() ? 0.0 : epsilons[c]);
        next.clear();
        for (std::size_t i : pool) {
            if ((*errors[i])[c] <= limit) {
                next.push_back(i);
            }
        }
        pool.swap(next);
    }
    return pool[rng.below(pool.size())];
}

std::vector<double> median_absolute_deviations(std::span<ErrorVector const* const> errors)
{
    if (errors.empty()) {
        return {};
    }
    std::size_t const cases = errors.front()->size();
    std::vector<double> mads(cases);
    std::vector<double> column(errors.size());
    for (std::size_t c = 0; c < cases; ++c) {
        for (std::size_t i = 0; i < errors.size(); ++i) {
            column[i] = (*errors[i])[c];
        }
        double const med = median_inplace(column);
        for (std::size_t i = 0; i < errors.size(); ++i) {
            column[i] = std::abs((*errors[i])[c] - med);
        }
        mads[c] = median_inplace(column);
    }
    return mads;
}

Selector::Selector(SelectionKind kind, std::size_t truncation, std::vector<ErrorVector const*> errors)
    : kind_(kind)
    , truncation_(truncation)
    , errors_(std::move(errors))
{
    if (errors_.empty()) {
        throw std::invalid_argument("Selector: empty population");
    }
    switch (kind_) {
    case SelectionKind::Truncation:
        if (truncation_ == 0 || truncation_ > errors_.size()) {
            throw std::invalid_argument("Selector: truncation size must lie in [1, N]");
        }
        order_ = rank_by_mean_error(errors_);
        break;
    case SelectionKind::Lexicase:
        break;
    case SelectionKind::EpsilonLexicase:
        epsilons_ = median_absolute_deviations(errors_);
        break;
    }
}

std::size_t Selector::operator()(Rng& rng) const
{
    if (kind_ == SelectionKind::Truncation) {
        return truncation_select(order_, truncation_, rng);
    }
    return lexicase_select(errors_, epsilons_, rng);
}

} // namespace ratectl
