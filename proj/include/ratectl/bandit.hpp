#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"
#include "ratectl/tile_coding.hpp"

namespace ratectl {

struct BanditConfig {
    double lower = -10.0;      // log-rate search interval
    double upper = 0.0;
    double resolution = 0.03;  // base tile width
    double sigma = 3.0;        // sampling noise, in base tiles
    double momentum = 0.9;
    std::size_t num_codings = 20;
    std::size_t len_history = 100;
    // Tile widths and offsets are drawn from these multiples of `resolution`.
    std::vector<int> width_units {6, 7, 8, 9, 10, 11, 12, 13};
    std::vector<int> offset_units {0, 1, 2, 3, 4, 5};

    void validate() const;
    [[nodiscard]] std::size_t num_base_tiles() const;
};

// Linear epsilon annealing over generations.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.01;
    int anneal_generations = 5;

    [[nodiscard]] double at(int generation) const;
};

struct RateSample {
    double log_rate = 0.0;
    double rate = 1.0;
    std::size_t bandit = 0;
};

// Epsilon-greedy bandit over the base grid of the log-rate interval. Only
// the randomized tile codings learn; the base grid is an evaluation lattice.
class Bandit {
public:
    struct CodingUnits {
        int offset = 0;
        int width = 1;
    };

    Bandit(BanditConfig config, double learning_rate, std::vector<CodingUnits> codings);
    // Draws num_codings (offset, width) pairs uniformly from the configured multiples.
    Bandit(BanditConfig config, double learning_rate, Rng& rng);

    [[nodiscard]] std::size_t num_base_tiles() const { return num_base_tiles_; }
    [[nodiscard]] std::vector<double> base_weights() const;

    [[nodiscard]] std::size_t choose_tile(Rng& rng) const;
    double sample_log_rate(Rng& rng) const;
    double sample_rate(Rng& rng) const;

    // Feeds an immediate reward observed at log-rate x to every tile coding.
    void observe(double log_rate, double reward);
    void update(double rate, std::span<double const> parent, std::span<double const> child, TransformConfig const& cfg);

    void set_epsilon(double eps) { epsilon_ = eps; }
    [[nodiscard]] double epsilon() const { return epsilon_; }
    [[nodiscard]] double learning_rate() const { return learning_rate_; }
    [[nodiscard]] BanditConfig const& config() const { return config_; }
    [[nodiscard]] std::vector<TileCoding> const& codings() const { return codings_; }
    [[nodiscard]] std::vector<CodingUnits> const& coding_units() const { return units_; }

    // Replaces the learned state of coding j (checkpoint restore, fixtures).
    void restore_coding(std::size_t j, std::vector<double> values, std::vector<double> momenta,
        std::vector<std::vector<double>> histories);

private:
    void build_lattice();
    void refresh_row(std::size_t coding, std::size_t tile);

    BanditConfig config_;
    double learning_rate_;
    double epsilon_ = 1.0;
    std::size_t num_base_tiles_;
    std::vector<CodingUnits> units_;
    std::vector<TileCoding> codings_;
    // rows_[j][i]: value of the coding-j tile covering base tile i.
    std::vector<std::vector<double>> rows_;
    // spans_[j][t]: base tiles [first, second) covered by tile t of coding j.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> spans_;
};

// Members share observations; a uniformly chosen member samples each rate.
class BanditEnsemble {
public:
    BanditEnsemble(BanditConfig config, std::size_t num_bandits, Rng& rng, EpsilonSchedule schedule = {});
    explicit BanditEnsemble(std::vector<Bandit> members, EpsilonSchedule schedule = {});

    RateSample sample(Rng& rng) const;
    void observe(double log_rate, double reward);
    void update(double rate, std::span<double const> parent, std::span<double const> child, TransformConfig const& cfg);

    void set_generation(int generation);
    [[nodiscard]] int generation() const { return generation_; }
    [[nodiscard]] double epsilon() const { return schedule_.at(generation_); }

    [[nodiscard]] std::vector<Bandit> const& members() const { return members_; }
    [[nodiscard]] EpsilonSchedule const& schedule() const { return schedule_; }

    [[nodiscard]] nlohmann::json to_json() const;
    static BanditEnsemble from_json(nlohmann::json const& doc);

private:
    std::vector<Bandit> members_;
    EpsilonSchedule schedule_;
    int generation_ = 0;
};

} // namespace ratectl
