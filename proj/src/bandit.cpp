#include "ratectl/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ratectl/kernels.hpp"

namespace ratectl {

void BanditConfig::validate() const
{
    if (!(lower < upper)) {
        throw std::invalid_argument("bandit: log-rate interval must satisfy lower < upper");
    }
    if (!(resolution > 0.0)) {
        throw std::invalid_argument("bandit: resolution must be positive");
    }
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("bandit: sampling noise must be non-negative");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw std::invalid_argument("bandit: momentum must lie in [0, 1)");
    }
    if (num_codings == 0) {
        throw std::invalid_argument("bandit: need at least one tile coding");
    }
    if (len_history == 0) {
        throw std::invalid_argument("bandit: len_history must be at least 1");
    }
    if (width_units.empty() || offset_units.empty()) {
        throw std::invalid_argument("bandit: width and offset choices must be nonempty");
    }
    for (int w : width_units) {
        if (w <= 0) {
            throw std::invalid_argument("bandit: tile widths must be positive multiples of the resolution");
        }
    }
    for (int o : offset_units) {
        if (o < 0 || static_cast<double>(o) * resolution >= upper - lower) {
            throw std::invalid_argument("bandit: tile offsets must lie in [0, upper - lower)");
        }
    }
    if (num_base_tiles() < 2) {
        throw std::invalid_argument("bandit: interval must hold at least two base tiles");
    }
}

std::size_t BanditConfig::num_base_tiles() const
{
    return static_cast<std::size_t>(std::floor((upper - lower) / resolution));
}

double EpsilonSchedule::at(int generation) const
{
    if (anneal_generations <= 0) {
        return end;
    }
    double const frac = std::min(static_cast<double>(std::max(generation, 0)) / anneal_generations, 1.0);
    return start + (end - start) * frac;
}

Bandit::Bandit(BanditConfig config, double learning_rate, std::vector<CodingUnits> codings)
    : config_(std::move(config))
    , learning_rate_(learning_rate)
    , num_base_tiles_(0)
    , units_(std::move(codings))
{
    config_.validate();
    if (!(learning_rate_ > 0.0)) {
        throw std::invalid_argument("bandit: learning rate must be positive");
    }
    if (units_.empty()) {
        throw std::invalid_argument("bandit: need at least one tile coding");
    }
    num_base_tiles_ = config_.num_base_tiles();
    build_lattice();
}

Bandit::Bandit(BanditConfig config, double learning_rate, Rng& rng)
    : config_(std::move(config))
    , learning_rate_(learning_rate)
    , num_base_tiles_(0)
{
    config_.validate();
    if (!(learning_rate_ > 0.0)) {
        throw std::invalid_argument("bandit: learning rate must be positive");
    }
    units_.reserve(config_.num_codings);
    for (std::size_t j = 0; j < config_.num_codings; ++j) {
        int const w = config_.width_units[rng.below(config_.width_units.size())];
        int const o = config_.offset_units[rng.below(config_.offset_units.size())];
        units_.push_back({o, w});
    }
    num_base_tiles_ = config_.num_base_tiles();
    build_lattice();
}

void Bandit::build_lattice()
{
    codings_.clear();
    rows_.clear();
    spans_.clear();
    for (auto const& u : units_) {
        if (u.width <= 0 || u.offset < 0) {
            throw std::invalid_argument("bandit: invalid tile coding geometry");
        }
        TileCoding coding(config_.lower, config_.upper, u.offset * config_.resolution, u.width * config_.resolution,
            config_.len_history);
        std::size_t const count = coding.tile_count();
        std::vector<std::pair<std::size_t, std::size_t>> spans(count, {0, 0});
        std::size_t prev = count;
        for (std::size_t i = 0; i < num_base_tiles_; ++i) {
            auto const ii = static_cast<long>(i);
            long t = ii < u.offset ? 0 : (ii - u.offset) / u.width + 1;
            auto const tile = std::min(static_cast<std::size_t>(t), count - 1);
            if (tile != prev) {
                spans[tile].first = i;
                prev = tile;
            }
            spans[tile].second = i + 1;
        }
        codings_.push_back(std::move(coding));
        rows_.emplace_back(num_base_tiles_, 0.0);
        spans_.push_back(std::move(spans));
    }
}

void Bandit::refresh_row(std::size_t coding, std::size_t tile)
{
    auto const [first, last] = spans_[coding][tile];
    double const v = codings_[coding].values()[tile];
    std::fill(rows_[coding].begin() + static_cast<long>(first), rows_[coding].begin() + static_cast<long>(last), v);
}

std::vector<double> Bandit::base_weights() const
{
    std::vector<double const*> rows;
    rows.reserve(rows_.size());
    for (auto const& r : rows_) {
        rows.push_back(r.data());
    }
    std::vector<double> weights(num_base_tiles_);
    kernels::active().mean_rows(rows, num_base_tiles_, weights.data());
    return weights;
}

std::size_t Bandit::choose_tile(Rng& rng) const
{
    if (rng.uniform01() < epsilon_) {
        return rng.below(num_base_tiles_);
    }
    auto const weights = base_weights();
    auto const best = static_cast<long>(kernels::active().argmax(weights.data(), weights.size()));
    auto const noise = static_cast<long>(std::floor(rng.normal() * config_.sigma));
    long const tile = std::clamp(best + noise, 0L, static_cast<long>(num_base_tiles_) - 1);
    return static_cast<std::size_t>(tile);
}

double Bandit::sample_log_rate(Rng& rng) const
{
    std::size_t const tile = choose_tile(rng);
    double const lo = config_.lower + config_.resolution * static_cast<double>(tile);
    double const hi = config_.lower + config_.resolution * static_cast<double>(tile + 1);
    return rng.uniform(lo, hi);
}

double Bandit::sample_rate(Rng& rng) const
{
    return std::exp(sample_log_rate(rng));
}

void Bandit::observe(double log_rate, double reward)
{
    if (!(log_rate >= config_.lower && log_rate < config_.upper)) {
        throw std::out_of_range("bandit: log-rate " + std::to_string(log_rate) + " outside search interval");
    }
    for (std::size_t j = 0; j < codings_.size(); ++j) {
        std::size_t const tile = codings_[j].observe(log_rate, reward, learning_rate_, config_.momentum);
        refresh_row(j, tile);
    }
}

void Bandit::update(double rate, std::span<double const> parent, std::span<double const> child, TransformConfig const& cfg)
{
    if (!(rate > 0.0)) {
        throw std::out_of_range("bandit: rate must be positive");
    }
    observe(std::log(rate), immediate_reward(parent, child, cfg));
}

void Bandit::restore_coding(std::size_t j, std::vector<double> values, std::vector<double> momenta,
    std::vector<std::vector<double>> histories)
{
    TileCoding& coding = codings_.at(j);
    std::size_t const n = coding.tile_count();
    if (values.size() != n || momenta.size() != n || histories.size() != n) {
        throw std::invalid_argument("bandit: restored coding state has wrong tile count");
    }
    coding.mutable_values() = std::move(values);
    coding.mutable_momenta() = std::move(momenta);
    auto& hist = coding.mutable_histories();
    for (std::size_t t = 0; t < n; ++t) {
        RewardHistory h(config_.len_history);
        for (double r : histories[t]) {
            h.push(r);
        }
        hist[t] = std::move(h);
        refresh_row(j, t);
    }
}

BanditEnsemble::BanditEnsemble(BanditConfig config, std::size_t num_bandits, Rng& rng, EpsilonSchedule schedule)
    : schedule_(schedule)
{
    if (num_bandits == 0) {
        throw std::invalid_argument("bandit ensemble: need at least one bandit");
    }
    members_.reserve(num_bandits);
    for (std::size_t k = 0; k < num_bandits; ++k) {
        double const lr = std::pow(10.0, rng.uniform(-4.0, -3.0));
        members_.emplace_back(config, lr, rng);
    }
    set_generation(0);
}

BanditEnsemble::BanditEnsemble(std::vector<Bandit> members, EpsilonSchedule schedule)
    : members_(std::move(members))
    , schedule_(schedule)
{
    if (members_.empty()) {
        throw std::invalid_argument("bandit ensemble: need at least one bandit");
    }
    set_generation(0);
}

RateSample BanditEnsemble::sample(Rng& rng) const
{
    std::size_t const k = rng.below(members_.size());
    double const x = members_[k].sample_log_rate(rng);
    return {x, std::exp(x), k};
}

void BanditEnsemble::observe(double log_rate, double reward)
{
    for (auto& b : members_) {
        b.observe(log_rate, reward);
    }
}

void BanditEnsemble::update(double rate, std::span<double const> parent, std::span<double const> child,
    TransformConfig const& cfg)
{
    if (!(rate > 0.0)) {
        throw std::out_of_range("bandit ensemble: rate must be positive");
    }
    observe(std::log(rate), immediate_reward(parent, child, cfg));
}

void BanditEnsemble::set_generation(int generation)
{
    generation_ = generation;
    double const eps = schedule_.at(generation);
    for (auto& b : members_) {
        b.set_epsilon(eps);
    }
}

nlohmann::json BanditEnsemble::to_json() const
{
    using nlohmann::json;
    BanditConfig const& c = members_.front().config();
    json doc;
    doc["config"] = {
        {"lower", c.lower}, {"upper", c.upper}, {"resolution", c.resolution}, {"sigma", c.sigma},
        {"momentum", c.momentum}, {"num_codings", c.num_codings}, {"len_history", c.len_history},
        {"width_units", c.width_units}, {"offset_units", c.offset_units},
    };
    doc["schedule"] = {{"start", schedule_.start}, {"end", schedule_.end}, {"anneal_generations", schedule_.anneal_generations}};
    doc["generation"] = generation_;
    doc["epsilon"] = epsilon();
    json bandits = json::array();
    for (auto const& b : members_) {
        json codings = json::array();
        for (std::size_t j = 0; j < b.codings().size(); ++j) {
            auto const& tc = b.codings()[j];
            json hist = json::array();
            for (auto const& h : tc.histories()) {
                hist.push_back(std::vector<double>(h.contents().begin(), h.contents().end()));
            }
            codings.push_back({
                {"offset_units", b.coding_units()[j].offset},
                {"width_units", b.coding_units()[j].width},
                {"values", tc.values()},
                {"momenta", tc.momenta()},
                {"histories", std::move(hist)},
            });
        }
        bandits.push_back({{"learning_rate", b.learning_rate()}, {"codings", std::move(codings)}});
    }
    doc["bandits"] = std::move(bandits);
    return doc;
}

BanditEnsemble BanditEnsemble::from_json(nlohmann::json const& doc)
{
    auto const& jc = doc.at("config");
    BanditConfig c;
    c.lower = jc.at("lower").get<double>();
    c.upper = jc.at("upper").get<double>();
    c.resolution = jc.at("resolution").get<double>();
    c.sigma = jc.at("sigma").get<double>();
    c.momentum = jc.at("momentum").get<double>();
    c.num_codings = jc.at("num_codings").get<std::size_t>();
    c.len_history = jc.at("len_history").get<std::size_t>();
    c.width_units = jc.at("width_units").get<std::vector<int>>();
    c.offset_units = jc.at("offset_units").get<std::vector<int>>();

    EpsilonSchedule s;
    auto const& js = doc.at("schedule");
    s.start = js.at("start").get<double>();
    s.end = js.at("end").get<double>();
    s.anneal_generations = js.at("anneal_generations").get<int>();

    std::vector<Bandit> members;
    for (auto const& jb : doc.at("bandits")) {
        std::vector<Bandit::CodingUnits> units;
        for (auto const& jcod : jb.at("codings")) {
            units.push_back({jcod.at("offset_units").get<int>(), jcod.at("width_units").get<int>()});
        }
        c.num_codings = units.size();
        Bandit b(c, jb.at("learning_rate").get<double>(), units);
        std::size_t j = 0;
        for (auto const& jcod : jb.at("codings")) {
            b.restore_coding(j++, jcod.at("values").get<std::vector<double>>(),
                jcod.at("momenta").get<std::vector<double>>(),
                jcod.at("histories").get<std::vector<std::vector<double>>>());
        }
        members.push_back(std::move(b));
    }
    BanditEnsemble e(std::move(members), s);
    e.set_generation(doc.at("generation").get<int>());
    return e;
}

} // namespace ratectl
