#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratectl/bandit.hpp"
#include "ratectl/controller.hpp"
#include "ratectl/evolution.hpp"
#include "ratectl/funcmin.hpp"
#include "ratectl/probe.hpp"
#include "ratectl/sr.hpp"

namespace ratectl {

// Raised for malformed or invalid configuration; `line` is 0 when the
// problem is not tied to a line of the config file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string const& source, std::size_t line, std::string const& message);
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

enum class Domain { FunctionMinimization, SymbolicRegression };

struct ControllerSettings {
    double fixed_rate = 0.1;

    BanditConfig bandit;
    std::size_t num_bandits = 5;
    EpsilonSchedule epsilon;

    double samr_meta_factor = 2.0;
    std::vector<double> samr_initial_rates;

    GesmrConfig gesmr;

    std::vector<double> lamr_candidates;
    int lamr_lookahead = 100;
};

struct ProblemSettings {
    std::string id;
    Domain domain = Domain::FunctionMinimization;
    std::size_t dimension = 100;
    double init_sigma = 0.0;
    SrSettings sr;
};

struct ExperimentSpec {
    ProblemSettings problem;
    RunConfig run;
    std::vector<ControllerKind> controllers {ControllerKind::Bandit};
    ControllerSettings controller;
    std::size_t runs = 50;
    std::uint64_t seed_base = 0;
    std::string output = "results";
    bool probe = false;
    ProbeConfig probe_config;
    double probe_host_rate = 0.1;
    std::size_t jobs = 1;

    // Normalized key=value rendering of every setting.
    [[nodiscard]] std::string render() const;
};

// Ordered key → (value, origin line) map produced by the parser.
struct RawConfig {
    struct Entry {
        std::string value;
        std::string source;
        std::size_t line = 0;
    };
    std::map<std::string, Entry> entries;

    void set(std::string const& key, std::string value, std::string source = "<override>", std::size_t line = 0);
};

// Parses the line-oriented format: `key = value`, `[section]` headers that
// prefix following keys with "section.", and `#` comments.
RawConfig parse_config_text(std::string_view text, std::string const& source = "<text>");
RawConfig parse_config_file(std::string const& path);

// Keys understood by the loader, fully qualified (e.g. "bandit.sigma").
std::vector<std::string> const& known_keys();

// Built-in presets: funcmin-desk, sr-desk, paper-full.
RawConfig preset(std::string_view name);
std::vector<std::string> preset_names();

// Applies RATECTL_<KEY> environment overrides (dots become underscores, upper case).
void apply_env_overrides(RawConfig& raw, std::function<char const*(char const*)> const& getenv);

// Fills every default for the selected problem and validates the result.
ExperimentSpec build_spec(RawConfig const& raw);

// Convenience: preset (optional) < file (optional) < environment.
ExperimentSpec load_spec(std::optional<std::string> const& config_path, std::optional<std::string> const& preset_name,
    bool use_env = true);

Domain domain_of(std::string_view problem_id);

} // namespace ratectl
