#include "ratectl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ratectl {

ControllerKind parse_controller(std::string_view name)
{
    if (name == "fixed") return ControllerKind::Fixed;
    if (name == "samr") return ControllerKind::Samr;
    if (name == "gesmr") return ControllerKind::Gesmr;
    if (name == "lamr") return ControllerKind::Lamr;
    if (name == "bandit") return ControllerKind::Bandit;
    throw std::invalid_argument("unknown controller '" + std::string(name) + "'");
}

std::string_view to_string(ControllerKind kind)
{
    switch (kind) {
    case ControllerKind::Fixed: return "fixed";
    case ControllerKind::Samr: return "samr";
    case ControllerKind::Gesmr: return "gesmr";
    case ControllerKind::Lamr: return "lamr";
    case ControllerKind::Bandit: return "bandit";
    }
    return "unknown";
}

void RateController::report(RateDraw const&, std::span<double const>, std::span<double const>) {}

void RateController::advance_generation() { ++generation_; }

double RateController::initial_rate(std::size_t) const { return 0.0; }

std::vector<double> log_spaced(double lo_exp, double hi_exp, std::size_t count)
{
    if (count == 0) {
        return {};
    }
    if (count == 1) {
        return {std::pow(10.0, lo_exp)};
    }
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        double const t = static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * t);
    }
    return v;
}

double clamp_rate(double rate)
{
    if (std::isnan(rate)) {
        throw std::domain_error("clamp_rate: NaN rate");
    }
    return std::clamp(rate, 1e-300, 1e300);
}

double fixed_sample(double rate)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("fixed rate must be positive and finite");
    }
    return rate;
}

FixedController::FixedController(double rate)
    : rate_(fixed_sample(rate))
{
}

std::unique_ptr<RateController> FixedController::clone() const { return std::make_unique<FixedController>(*this); }

RateDraw FixedController::sample(std::optional<double>, std::size_t, Rng&)
{
    return {rate_, std::log(rate_), 0};
}

double samr_child_rate(double parent_rate, Rng& rng, double meta_factor)
{
    if (!(parent_rate > 0.0)) {
        throw std::invalid_argument("samr_child_rate: parent rate must be positive");
    }
    double const u = rng.uniform(-1.0, 1.0);
    return clamp_rate(parent_rate * std::pow(meta_factor, u));
}

SamrController::SamrController(std::vector<double> initial_rates, double meta_factor)
    : initial_rates_(std::move(initial_rates))
    , meta_factor_(meta_factor)
{
    if (initial_rates_.empty()) {
        throw std::invalid_argument("SAMR: need at least one initial rate");
    }
    for (double r : initial_rates_) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("SAMR: initial rates must be positive");
        }
    }
    if (!(meta_factor_ > 1.0)) {
        throw std::invalid_argument("SAMR: meta mutation factor must exceed 1");
    }
}

std::unique_ptr<RateController> SamrController::clone() const { return std::make_unique<SamrController>(*this); }

RateDraw SamrController::sample(std::optional<double> parent_rate, std::size_t, Rng& rng)
{
    if (!parent_rate) {
        throw std::logic_error("SAMR: parent carries no rate");
    }
    double const r = samr_child_rate(*parent_rate, rng, meta_factor_);
    return {r, std::log(r), 0};
}

double SamrController::initial_rate(std::size_t individual) const
{
    return initial_rates_[individual % initial_rates_.size()];
}

std::vector<double> gesmr_generation(std::span<double const> rates, std::span<std::vector<double> const> improvements,
    std::size_t meta_truncation, double meta_factor, Rng& rng)
{
    std::size_t const k = rates.size();
    if (k == 0 || improvements.size() != k) {
        throw std::invalid_argument("gesmr_generation: need one improvement group per rate");
    }
    if (meta_truncation == 0 || meta_truncation > k) {
        throw std::invalid_argument("gesmr_generation: meta truncation size must lie in [1, K]");
    }
    std::vector<double> fitness(k);
    for (std::size_t g = 0; g < k; ++g) {
        if (improvements[g].empty()) {
            throw std::invalid_argument("gesmr_generation: rate group " + std::to_string(g) + " is empty");
        }
        fitness[g] = *std::max_element(improvements[g].begin(), improvements[g].end());
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

    std::vector<double> next;
    next.reserve(k);
    next.push_back(rates[order.front()]);
    while (next.size() < k) {
        double const parent = rates[order[rng.below(meta_truncation)]];
        next.push_back(clamp_rate(parent * std::pow(meta_factor, rng.uniform(-1.0, 1.0))));
    }
    return next;
}

GesmrController::GesmrController(GesmrConfig config, TransformConfig transform, Rng rng)
    : config_(std::move(config))
    , transform_(transform)
    , rng_(rng)
    , rates_(config_.initial_rates)
    , improvements_(rates_.size())
{
    if (rates_.empty()) {
        throw std::invalid_argument("GESMR: need at least one rate");
    }
    if (config_.meta_truncation == 0 || config_.meta_truncation > rates_.size()) {
        throw std::invalid_argument("GESMR: meta truncation size must lie in [1, K]");
    }
}

std::unique_ptr<RateController> GesmrController::clone() const { return std::make_unique<GesmrController>(*this); }

RateDraw GesmrController::sample(std::optional<double>, std::size_t child_index, Rng&)
{
    std::size_t const g = child_index % rates_.size();
    return {rates_[g], std::log(rates_[g]), g};
}

void GesmrController::report(RateDraw const& draw, std::span<double const> parent, std::span<double const> child)
{
    improvements_.at(draw.slot).push_back(immediate_reward(parent, child, transform_));
}

void GesmrController::advance_generation()
{
    // Groups that produced no child this generation cannot be scored.
    for (auto& group : improvements_) {
        if (group.empty()) {
            group.push_back(-std::numeric_limits<double>::infinity());
        }
    }
    rates_ = gesmr_generation(rates_, improvements_, config_.meta_truncation, config_.meta_factor, rng_);
    for (auto& group : improvements_) {
        group.clear();
    }
    RateController::advance_generation();
}

LamrController::LamrController(std::vector<double> candidates, int lookahead)
    : candidates_(std::move(candidates))
    , lookahead_(lookahead)
    , rate_(0.0)
{
    if (candidates_.empty()) {
        throw std::invalid_argument("LAMR: need at least one candidate rate");
    }
    if (lookahead_ < 1) {
        throw std::invalid_argument("LAMR: lookahead must be at least one generation");
    }
    rate_ = candidates_.front();
}

std::unique_ptr<RateController> LamrController::clone() const { return std::make_unique<LamrController>(*this); }

RateDraw LamrController::sample(std::optional<double>, std::size_t, Rng&)
{
    return {rate_, std::log(rate_), 0};
}

void LamrController::set_rate(double rate)
{
    rate_ = fixed_sample(rate);
    history_.push_back(rate_);
}

BanditController::BanditController(BanditEnsemble ensemble, TransformConfig transform)
    : ensemble_(std::move(ensemble))
    , transform_(transform)
{
    generation_ = ensemble_.generation();
}

std::unique_ptr<RateController> BanditController::clone() const { return std::make_unique<BanditController>(*this); }

RateDraw BanditController::sample(std::optional<double>, std::size_t, Rng& rng)
{
    RateSample const s = ensemble_.sample(rng);
    return {s.rate, s.log_rate, s.bandit};
}

void BanditController::report(RateDraw const& draw, std::span<double const> parent, std::span<double const> child)
{
    ensemble_.observe(draw.log_rate, immediate_reward(parent, child, transform_));
}

void BanditController::advance_generation()
{
    RateController::advance_generation();
    ensemble_.set_generation(generation_);
}

} // namespace ratectl
