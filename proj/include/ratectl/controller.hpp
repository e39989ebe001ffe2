#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ratectl/bandit.hpp"
#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"

namespace ratectl {

enum class ControllerKind { Fixed, Samr, Gesmr, Lamr, Bandit };

ControllerKind parse_controller(std::string_view name);
std::string_view to_string(ControllerKind kind);

// One sampled rate. `slot` is the bandit member or GESMR group that produced it.
struct RateDraw {
    double rate = 0.0;
    double log_rate = 0.0;
    std::size_t slot = 0;
};

// Common surface of every mutation-rate scheme driven by the evolutionary loop.
class RateController {
public:
    virtual ~RateController() = default;

    [[nodiscard]] virtual ControllerKind kind() const = 0;
    [[nodiscard]] virtual std::unique_ptr<RateController> clone() const = 0;

    // Rate for the child_index-th child of this generation; `parent_rate` is
    // the parent's attached rate when the scheme attaches rates.
    virtual RateDraw sample(std::optional<double> parent_rate, std::size_t child_index, Rng& rng) = 0;
    virtual void report(RateDraw const& draw, std::span<double const> parent, std::span<double const> child);
    virtual void advance_generation();

    [[nodiscard]] virtual bool attaches_rate() const { return false; }
    // Rate attached to the i-th member of the initial population.
    [[nodiscard]] virtual double initial_rate(std::size_t individual) const;
    [[nodiscard]] virtual double epsilon() const { return 0.0; }
    [[nodiscard]] int generation() const { return generation_; }

protected:
    int generation_ = 0;
};

// Values spaced evenly in log10 between 10^lo_exp and 10^hi_exp inclusive.
std::vector<double> log_spaced(double lo_exp, double hi_exp, std::size_t count);

// Keeps rates inside a finite positive range.
double clamp_rate(double rate);

double fixed_sample(double rate);

class FixedController final : public RateController {
public:
    explicit FixedController(double rate);
    [[nodiscard]] ControllerKind kind() const override { return ControllerKind::Fixed; }
    [[nodiscard]] std::unique_ptr<RateController> clone() const override;
    RateDraw sample(std::optional<double>, std::size_t, Rng&) override;
    [[nodiscard]] double rate() const { return rate_; }

private:
    double rate_;
};

// parent_rate × factor^u, u ~ U[-1, 1].
double samr_child_rate(double parent_rate, Rng& rng, double meta_factor = 2.0);

class SamrController final : public RateController {
public:
    SamrController(std::vector<double> initial_rates, double meta_factor = 2.0);
    [[nodiscard]] ControllerKind kind() const override { return ControllerKind::Samr; }
    [[nodiscard]] std::unique_ptr<RateController> clone() const override;
    RateDraw sample(std::optional<double> parent_rate, std::size_t, Rng& rng) override;
    [[nodiscard]] bool attaches_rate() const override { return true; }
    [[nodiscard]] double initial_rate(std::size_t individual) const override;

private:
    std::vector<double> initial_rates_;
    double meta_factor_;
};

struct GesmrConfig {
    std::vector<double> initial_rates = log_spaced(-3.0, 3.0, 10);
    std::size_t meta_truncation = 4;
    double meta_factor = 2.0;
};

// One meta-generation: the best group's rate survives unchanged at index 0,
// the rest are copies of truncation-selected rates meta-mutated by factor^U[-1,1].
// Group fitness is the maximum improvement observed in it; ties favour the lower index.
std::vector<double> gesmr_generation(std::span<double const> rates, std::span<std::vector<double> const> improvements,
    std::size_t meta_truncation, double meta_factor, Rng& rng);

class GesmrController final : public RateController {
public:
    GesmrController(GesmrConfig config, TransformConfig transform, Rng rng);
    [[nodiscard]] ControllerKind kind() const override { return ControllerKind::Gesmr; }
    [[nodiscard]] std::unique_ptr<RateController> clone() const override;
    RateDraw sample(std::optional<double>, std::size_t child_index, Rng&) override;
    void report(RateDraw const& draw, std::span<double const> parent, std::span<double const> child) override;
    void advance_generation() override;

    [[nodiscard]] std::vector<double> const& rates() const { return rates_; }

private:
    GesmrConfig config_;
    TransformConfig transform_;
    Rng rng_;
    std::vector<double> rates_;
    std::vector<std::vector<double>> improvements_;
};

// Holds the rate chosen by the look-ahead oracle; the evolutionary run
// performs the look-ahead and installs the result.
class LamrController final : public RateController {
public:
    LamrController(std::vector<double> candidates = log_spaced(-3.0, 0.0, 10), int lookahead = 100);
    [[nodiscard]] ControllerKind kind() const override { return ControllerKind::Lamr; }
    [[nodiscard]] std::unique_ptr<RateController> clone() const override;
    RateDraw sample(std::optional<double>, std::size_t, Rng&) override;

    [[nodiscard]] bool due() const { return generation_ % lookahead_ == 0; }
    [[nodiscard]] std::vector<double> const& candidates() const { return candidates_; }
    [[nodiscard]] int lookahead() const { return lookahead_; }
    [[nodiscard]] double rate() const { return rate_; }
    [[nodiscard]] std::vector<double> const& history() const { return history_; }
    void set_rate(double rate);

private:
    std::vector<double> candidates_;
    int lookahead_;
    double rate_;
    std::vector<double> history_;
};

class BanditController final : public RateController {
public:
    BanditController(BanditEnsemble ensemble, TransformConfig transform);
    [[nodiscard]] ControllerKind kind() const override { return ControllerKind::Bandit; }
    [[nodiscard]] std::unique_ptr<RateController> clone() const override;
    RateDraw sample(std::optional<double>, std::size_t, Rng& rng) override;
    void report(RateDraw const& draw, std::span<double const> parent, std::span<double const> child) override;
    void advance_generation() override;
    [[nodiscard]] double epsilon() const override { return ensemble_.epsilon(); }

    [[nodiscard]] BanditEnsemble const& ensemble() const { return ensemble_; }

private:
    BanditEnsemble ensemble_;
    TransformConfig transform_;
};

} // namespace ratectl
