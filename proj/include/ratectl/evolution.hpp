#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratectl/controller.hpp"
#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"
#include "ratectl/selection.hpp"

namespace ratectl {

template <typename P>
concept Problem = requires(P const& p, typename P::Genome const& g, ErrorVector const& e, Rng& rng, double rate) {
    { p.evaluate(g) } -> std::same_as<ErrorVector>;
    { p.random_genome(rng) } -> std::same_as<typename P::Genome>;
    { p.mutate(g, rate, rng) } -> std::same_as<typename P::Genome>;
    { p.is_solved(e) } -> std::same_as<bool>;
};

struct RunConfig {
    std::size_t population = 101;
    std::size_t elites = 1;
    int generations = 200;
    SelectionKind selection = SelectionKind::Truncation;
    std::size_t truncation = 10;
    std::uint64_t seed = 0;
    TransformConfig transform = TransformConfig::function_minimization();
    bool record_rates = false;

    void validate() const
    {
        if (population < 2) {
            throw std::invalid_argument("run: population size must be at least 2");
        }
        if (elites >= population) {
            throw std::invalid_argument("run: elite count must be below the population size");
        }
        if (generations < 1) {
            throw std::invalid_argument("run: generation limit must be at least 1");
        }
        if (selection == SelectionKind::Truncation && (truncation == 0 || truncation > population)) {
            throw std::invalid_argument("run: truncation size must lie in [1, population]");
        }
    }
};

// Independent sub-streams of a run's seed. The main stream uses the seed itself.
enum class Stream : std::uint64_t { Controller = 1, Probe = 2, Lookahead = 3 };

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream)
{
    return Rng::splitmix(seed ^ Rng::splitmix(0xA5A5'0000'0000'0000ULL + static_cast<std::uint64_t>(stream)));
}

struct GenerationRecord {
    int generation = 0;
    double best_error = 0.0;
    double best_transformed = 0.0;
    double mean_log_rate = 0.0;
    double epsilon = 0.0;
    bool solved = false;
    double seconds = 0.0;
    std::vector<double> rates;
};

struct RunResult {
    std::vector<GenerationRecord> records;
    bool solved = false;
    int solve_generation = -1;
    double final_best_error = 0.0;
};

template <Problem P>
struct Individual {
    typename P::Genome genome;
    ErrorVector errors;
    double mean_error = 0.0;
    std::optional<double> rate;
};

inline double mean_raw_error(ErrorVector const& e)
{
    double s = 0.0;
    for (double v : e) {
        s += v;
    }
    return s / static_cast<double>(e.size());
}

// Generational loop: elites carry over, every other slot is a mutated copy
// of a selected parent, and each child is reported to the controller as
// soon as it is evaluated.
template <Problem P>
class Run {
public:
    using Genome = typename P::Genome;
    using Member = Individual<P>;
    using GenerationHook = std::function<void(Run const&, Selector const&)>;
    using ChildHook = std::function<void(Member const& parent, Member const& child, RateDraw const&)>;

    Run(P const& problem, RunConfig config, std::unique_ptr<RateController> controller)
        : problem_(&problem)
        , config_(config)
        , controller_(std::move(controller))
        , rng_(config.seed)
    {
        config_.validate();
        if (!controller_) {
            throw std::invalid_argument("run: missing rate controller");
        }
        population_.reserve(config_.population);
        for (std::size_t i = 0; i < config_.population; ++i) {
            Member m;
            m.genome = problem_->random_genome(rng_);
            if (controller_->attaches_rate()) {
                m.rate = controller_->initial_rate(i);
            }
            population_.push_back(std::move(m));
        }
        for (auto& m : population_) {
            evaluate(m);
        }
        solved_ = any_solved();
        if (solved_) {
            solve_generation_ = 0;
        }
    }

    Run(Run const& other)
        : problem_(other.problem_)
        , config_(other.config_)
        , controller_(other.controller_->clone())
        , rng_(other.rng_)
        , population_(other.population_)
        , generation_(other.generation_)
        , solved_(other.solved_)
        , solve_generation_(other.solve_generation_)
    {
    }

    Run& operator=(Run const& other)
    {
        if (this != &other) {
            Run tmp(other);
            *this = std::move(tmp);
        }
        return *this;
    }

    Run(Run&&) noexcept = default;
    Run& operator=(Run&&) noexcept = default;

    void on_generation(GenerationHook hook) { generation_hook_ = std::move(hook); }
    void on_child(ChildHook hook) { child_hook_ = std::move(hook); }

    GenerationRecord step()
    {
        auto const start = std::chrono::steady_clock::now();
        if (auto* lamr = dynamic_cast<LamrController*>(controller_.get()); lamr != nullptr && lamr->due()) {
            lamr->set_rate(lookahead_select(lamr->candidates(), lamr->lookahead()));
        }

        std::vector<ErrorVector const*> errors;
        errors.reserve(population_.size());
        for (auto const& m : population_) {
            errors.push_back(&m.errors);
        }
        Selector const select(config_.selection, config_.truncation, errors);
        if (generation_hook_) {
            generation_hook_(*this, select);
        }

        std::vector<Member> next;
        next.reserve(config_.population);
        auto const ranked = rank_by_mean_error(errors);
        for (std::size_t e = 0; e < config_.elites; ++e) {
            next.push_back(population_[ranked[e]]);
        }

        GenerationRecord rec;
        rec.epsilon = controller_->epsilon();
        std::size_t const children = config_.population - config_.elites;
        double log_rate_sum = 0.0;
        for (std::size_t k = 0; k < children; ++k) {
            Member const& parent = population_[select(rng_)];
            RateDraw const draw = controller_->sample(parent.rate, k, rng_);
            Member child;
            child.genome = problem_->mutate(parent.genome, draw.rate, rng_);
            evaluate(child);
            controller_->report(draw, parent.errors, child.errors);
            if (controller_->attaches_rate()) {
                child.rate = draw.rate;
            }
            if (child_hook_) {
                child_hook_(parent, child, draw);
            }
            log_rate_sum += draw.log_rate;
            if (config_.record_rates) {
                rec.rates.push_back(draw.rate);
            }
            next.push_back(std::move(child));
        }
        population_ = std::move(next);
        controller_->advance_generation();
        ++generation_;

        rec.generation = generation_;
        rec.mean_log_rate = log_rate_sum / static_cast<double>(children);
        auto const& best = best_member();
        rec.best_error = best.mean_error;
        rec.best_transformed = best_transformed();
        rec.solved = any_solved();
        if (rec.solved && !solved_) {
            solved_ = true;
            solve_generation_ = generation_;
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
    }

    // Steps until the generation limit or a solution; a solved run stops immediately.
    RunResult run(std::function<void(GenerationRecord const&)> const& on_record = {})
    {
        RunResult result;
        while (!solved_ && generation_ < config_.generations) {
            result.records.push_back(step());
            if (on_record) {
                on_record(result.records.back());
            }
        }
        result.solved = solved_;
        result.solve_generation = solve_generation_;
        result.final_best_error = best_member().mean_error;
        return result;
    }

    // Advances `count` generations at most, ignoring the generation limit.
    void advance(int count)
    {
        for (int i = 0; i < count && !solved_; ++i) {
            step();
        }
    }

    // Simulates each candidate from a clone of the current state and returns
    // the one whose population ends with the lowest best error. The main
    // run's state, RNG included, is left untouched.
    double lookahead_select(std::vector<double> const& candidates, int lookahead) const
    {
        if (candidates.empty()) {
            throw std::invalid_argument("lookahead: no candidate rates");
        }
        if (candidates.size() == 1) {
            return candidates.front();
        }
        double best_rate = candidates.front();
        double best_error = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            Run sim(*this, std::make_unique<FixedController>(candidates[i]),
                rng_.peek_fork(derive_seed(static_cast<std::uint64_t>(generation_) * 1024 + i, Stream::Lookahead)));
            sim.advance(lookahead);
            double const err = sim.best_member().mean_error;
            if (err < best_error) {
                best_error = err;
                best_rate = candidates[i];
            }
        }
        return best_rate;
    }

    [[nodiscard]] std::vector<Member> const& population() const { return population_; }
    [[nodiscard]] Member const& best_member() const
    {
        return *std::min_element(population_.begin(), population_.end(),
            [](Member const& a, Member const& b) { return a.mean_error < b.mean_error; });
    }
    [[nodiscard]] RateController const& controller() const { return *controller_; }
    [[nodiscard]] RunConfig const& config() const { return config_; }
    [[nodiscard]] P const& problem() const { return *problem_; }
    [[nodiscard]] int generation() const { return generation_; }
    [[nodiscard]] bool solved() const { return solved_; }
    [[nodiscard]] Rng const& rng() const { return rng_; }

private:
    Run(Run const& base, std::unique_ptr<RateController> controller, Rng rng)
        : problem_(base.problem_)
        , config_(base.config_)
        , controller_(std::move(controller))
        , rng_(rng)
        , population_(base.population_)
        , generation_(base.generation_)
        , solved_(base.solved_)
        , solve_generation_(base.solve_generation_)
    {
        if (!controller_->attaches_rate()) {
            for (auto& m : population_) {
                m.rate.reset();
            }
        }
    }

    void evaluate(Member& m) const
    {
        try {
            m.errors = problem_->evaluate(m.genome);
        } catch (std::exception const& ex) {
            throw std::runtime_error("evaluation failed at generation " + std::to_string(generation_) + ": " + ex.what());
        }
        if (m.errors.empty()) {
            throw std::runtime_error("evaluation returned an empty error vector");
        }
        m.mean_error = mean_raw_error(m.errors);
    }

    [[nodiscard]] bool any_solved() const
    {
        return std::any_of(population_.begin(), population_.end(),
            [this](Member const& m) { return problem_->is_solved(m.errors); });
    }

    [[nodiscard]] double best_transformed() const
    {
        double best = std::numeric_limits<double>::infinity();
        for (auto const& m : population_) {
            best = std::min(best, mean_transformed_error(m.errors, config_.transform));
        }
        return best;
    }

    P const* problem_;
    RunConfig config_;
    std::unique_ptr<RateController> controller_;
    Rng rng_;
    std::vector<Member> population_;
    int generation_ = 0;
    bool solved_ = false;
    int solve_generation_ = -1;
    GenerationHook generation_hook_;
    ChildHook child_hook_;
};

// Look-ahead oracle: clones `run` once per candidate and returns the rate
// with the best population error after `lookahead` generations.
template <Problem P>
double lamr_select(Run<P> const& run, std::vector<double> const& candidates, int lookahead)
{
    return run.lookahead_select(candidates, lookahead);
}

} // namespace ratectl
