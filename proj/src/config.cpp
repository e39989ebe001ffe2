#include "ratectl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ratectl {

ConfigError::ConfigError(std::string const& source, std::size_t line, std::string const& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message)
    , line_(line)
{
}

void RawConfig::set(std::string const& key, std::string value, std::string source, std::size_t line)
{
    entries[key] = Entry {std::move(value), std::move(source), line};
}

namespace {

std::string trim(std::string_view s)
{
    auto const b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto const e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_list(std::string const& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

RawConfig parse_config_text(std::string_view text, std::string const& source)
{
    RawConfig raw;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (auto const hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::string const t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError(source, line_no, "malformed section header '" + t + "'");
            }
            section = lower(trim(std::string_view(t).substr(1, t.size() - 2)));
            continue;
        }
        auto const eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "expected 'key = value', got '" + t + "'");
        }
        std::string key = lower(trim(std::string_view(t).substr(0, eq)));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source, line_no, "empty key");
        }
        if (!section.empty() && section != "run" && key.find('.') == std::string::npos) {
            key = section + "." + key;
        } else if (section == "run" && (key == "population" || key == "elites" || key == "generations"
                       || key == "selection" || key == "truncation" || key == "record_rates")) {
            key = "run." + key;
        }
        auto const& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(source, line_no, "unknown key '" + key + "'");
        }
        raw.set(key, std::move(value), source, line_no);
    }
    return raw;
}

RawConfig parse_config_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot open config file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::vector<std::string> const& known_keys()
{
    static std::vector<std::string> const keys {
        "problem", "controllers", "runs", "seed_base", "output", "probe", "jobs",
        "run.population", "run.elites", "run.generations", "run.selection", "run.truncation", "run.record_rates",
        "transform.c", "transform.identity",
        "problem.dimension", "problem.init_sigma", "problem.min_init_length", "problem.max_init_length",
        "problem.max_length",
        "fixed.rate",
        "bandit.num_bandits", "bandit.len_history", "bandit.momentum", "bandit.sigma", "bandit.num_codings",
        "bandit.lower", "bandit.upper", "bandit.resolution", "bandit.epsilon_start", "bandit.epsilon_end",
        "bandit.epsilon_generations",
        "samr.meta_factor", "samr.init_low_exp", "samr.init_high_exp", "samr.init_count",
        "gesmr.meta_factor", "gesmr.meta_truncation", "gesmr.init_low_exp", "gesmr.init_high_exp", "gesmr.init_count",
        "lamr.low_exp", "lamr.high_exp", "lamr.count", "lamr.lookahead",
        "probe.rates", "probe.samples", "probe.kernel", "probe.alpha", "probe.host_rate",
    };
    return keys;
}

std::vector<std::string> preset_names() { return {"funcmin-desk", "sr-desk", "paper-full"}; }

RawConfig preset(std::string_view name)
{
    RawConfig raw;
    std::string const src = "preset:" + std::string(name);
    if (name == "funcmin-desk") {
        raw.set("problem.dimension", "100", src);
        raw.set("run.population", "101", src);
        raw.set("run.generations", "200", src);
        raw.set("runs", "20", src);
    } else if (name == "sr-desk") {
        raw.set("run.population", "500", src);
        raw.set("run.generations", "150", src);
        raw.set("runs", "10", src);
    } else if (name == "paper-full") {
        // Domain defaults already match the published protocol.
        raw.set("runs", "50", src);
    } else {
        throw ConfigError(src, 0, "unknown preset");
    }
    return raw;
}

void apply_env_overrides(RawConfig& raw, std::function<char const*(char const*)> const& getenv)
{
    for (auto const& key : known_keys()) {
        std::string env = "RATECTL_" + key;
        std::replace(env.begin(), env.end(), '.', '_');
        std::transform(env.begin(), env.end(), env.begin(), [](unsigned char c) { return std::toupper(c); });
        if (char const* v = getenv(env.c_str())) {
            raw.set(key, v, "env:" + env, 0);
        }
    }
}

Domain domain_of(std::string_view problem_id)
{
    std::string const id = lower(std::string(problem_id));
    if (id.rfind("nguyen", 0) == 0) {
        parse_nguyen(id);
        return Domain::SymbolicRegression;
    }
    parse_test_function(id);
    return Domain::FunctionMinimization;
}

namespace {

class Reader {
public:
    explicit Reader(RawConfig const& raw)
        : raw_(raw)
    {
    }

    [[nodiscard]] RawConfig::Entry const* find(std::string const& key) const
    {
        auto it = raw_.entries.find(key);
        return it == raw_.entries.end() ? nullptr : &it->second;
    }

    [[noreturn]] void fail(std::string const& key, std::string const& msg) const
    {
        if (auto const* e = find(key)) {
            throw ConfigError(e->source, e->line, key + ": " + msg);
        }
        throw ConfigError("<config>", 0, key + ": " + msg);
    }

    void real(std::string const& key, double& out) const
    {
        if (auto const* e = find(key)) {
            double v = 0.0;
            auto const& s = e->value;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
                fail(key, "malformed number '" + s + "'");
            }
            out = v;
        }
    }

    template <typename Int>
    void integer(std::string const& key, Int& out) const
    {
        if (auto const* e = find(key)) {
            long long v = 0;
            auto const& s = e->value;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
                fail(key, "malformed integer '" + s + "'");
            }
            if constexpr (std::is_unsigned_v<Int>) {
                if (v < 0) {
                    fail(key, "must be non-negative");
                }
            }
            out = static_cast<Int>(v);
        }
    }

    void boolean(std::string const& key, bool& out) const
    {
        if (auto const* e = find(key)) {
            std::string const v = lower(e->value);
            if (v == "on" || v == "true" || v == "1" || v == "yes") {
                out = true;
            } else if (v == "off" || v == "false" || v == "0" || v == "no") {
                out = false;
            } else {
                fail(key, "expected on/off, got '" + e->value + "'");
            }
        }
    }

    void text(std::string const& key, std::string& out) const
    {
        if (auto const* e = find(key)) {
            out = e->value;
        }
    }

    [[nodiscard]] std::vector<double> reals(std::string const& key) const
    {
        std::vector<double> out;
        if (auto const* e = find(key)) {
            for (auto const& item : split_list(e->value)) {
                double v = 0.0;
                auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
                if (ec != std::errc() || p != item.data() + item.size()) {
                    fail(key, "malformed number '" + item + "'");
                }
                out.push_back(v);
            }
        }
        return out;
    }

    void positive(std::string const& key, double v) const
    {
        if (!(v > 0.0)) {
            fail(key, "must be positive");
        }
    }

    void at_least(std::string const& key, long long v, long long min) const
    {
        if (v < min) {
            fail(key, "must be at least " + std::to_string(min));
        }
    }

private:
    RawConfig const& raw_;
};

std::string fmt(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string join(std::vector<double> const& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + fmt(v[i]);
    }
    return s;
}

} // namespace

ExperimentSpec build_spec(RawConfig const& raw)
{
    Reader r(raw);
    ExperimentSpec spec;

    auto const* prob = r.find("problem");
    if (prob == nullptr || trim(prob->value).empty()) {
        throw ConfigError("<config>", 0, "missing problem id (set 'problem = <sphere|ackley|...|nguyen1..8>')");
    }
    spec.problem.id = lower(trim(prob->value));
    try {
        spec.problem.domain = domain_of(spec.problem.id);
    } catch (std::invalid_argument const& ex) {
        r.fail("problem", ex.what());
    }
    bool const funcmin = spec.problem.domain == Domain::FunctionMinimization;

    // Domain defaults.
    ControllerSettings& c = spec.controller;
    if (funcmin) {
        spec.run.population = 101;
        spec.run.elites = 1;
        spec.run.generations = spec.problem.id == "linear" ? 100 : 1000;
        spec.run.selection = SelectionKind::Truncation;
        spec.run.truncation = 10;
        spec.run.transform = TransformConfig::function_minimization();
        c.bandit.lower = -100.0;
        c.bandit.upper = 100.0;
        c.bandit.sigma = 7.0;
        c.samr_initial_rates = log_spaced(-3.0, 3.0, 101);
        c.gesmr.initial_rates = log_spaced(-3.0, 3.0, 10);
    } else {
        spec.run.population = 1000;
        spec.run.elites = 0;
        spec.run.generations = 300;
        spec.run.selection = SelectionKind::EpsilonLexicase;
        spec.run.truncation = 10;
        spec.run.transform = TransformConfig::symbolic_regression();
        c.bandit.lower = -10.0;
        c.bandit.upper = 0.0;
        c.bandit.sigma = 3.0;
        c.samr_initial_rates = log_spaced(-3.0, 0.0, 101);
        c.gesmr.initial_rates = log_spaced(-3.0, 0.0, 10);
    }
    c.lamr_candidates = log_spaced(-3.0, 0.0, 10);

    // Top level.
    if (auto const* e = r.find("controllers")) {
        spec.controllers.clear();
        for (auto const& name : split_list(e->value)) {
            try {
                spec.controllers.push_back(parse_controller(lower(name)));
            } catch (std::invalid_argument const& ex) {
                r.fail("controllers", ex.what());
            }
        }
        if (spec.controllers.empty()) {
            r.fail("controllers", "empty controller list");
        }
    }
    r.integer("runs", spec.runs);
    r.at_least("runs", static_cast<long long>(spec.runs), 1);
    r.integer("seed_base", spec.seed_base);
    r.text("output", spec.output);
    r.boolean("probe", spec.probe);
    r.integer("jobs", spec.jobs);
    r.at_least("jobs", static_cast<long long>(spec.jobs), 1);

    // Run.
    r.integer("run.population", spec.run.population);
    r.at_least("run.population", static_cast<long long>(spec.run.population), 2);
    r.integer("run.elites", spec.run.elites);
    if (spec.run.elites >= spec.run.population) {
        r.fail("run.elites", "must be below the population size");
    }
    r.integer("run.generations", spec.run.generations);
    r.at_least("run.generations", spec.run.generations, 1);
    if (auto const* e = r.find("run.selection")) {
        try {
            spec.run.selection = parse_selection(lower(e->value));
        } catch (std::invalid_argument const& ex) {
            r.fail("run.selection", ex.what());
        }
    }
    r.integer("run.truncation", spec.run.truncation);
    if (spec.run.truncation == 0 || spec.run.truncation > spec.run.population) {
        r.fail("run.truncation", "must lie in [1, population]");
    }
    r.boolean("run.record_rates", spec.run.record_rates);

    r.real("transform.c", spec.run.transform.c);
    r.positive("transform.c", spec.run.transform.c);
    r.boolean("transform.identity", spec.run.transform.identity);

    // Problem.
    r.integer("problem.dimension", spec.problem.dimension);
    r.at_least("problem.dimension", static_cast<long long>(spec.problem.dimension), 1);
    r.real("problem.init_sigma", spec.problem.init_sigma);
    if (r.find("problem.init_sigma")) {
        r.positive("problem.init_sigma", spec.problem.init_sigma);
    }
    r.integer("problem.min_init_length", spec.problem.sr.min_init_length);
    r.at_least("problem.min_init_length", static_cast<long long>(spec.problem.sr.min_init_length), 1);
    r.integer("problem.max_init_length", spec.problem.sr.max_init_length);
    if (spec.problem.sr.max_init_length < spec.problem.sr.min_init_length) {
        r.fail("problem.max_init_length", "must be at least problem.min_init_length");
    }
    r.integer("problem.max_length", spec.problem.sr.max_length);
    r.at_least("problem.max_length", static_cast<long long>(spec.problem.sr.max_length), 1);

    // Controllers.
    r.real("fixed.rate", c.fixed_rate);
    r.positive("fixed.rate", c.fixed_rate);

    r.integer("bandit.num_bandits", c.num_bandits);
    r.at_least("bandit.num_bandits", static_cast<long long>(c.num_bandits), 1);
    r.integer("bandit.len_history", c.bandit.len_history);
    r.at_least("bandit.len_history", static_cast<long long>(c.bandit.len_history), 1);
    r.real("bandit.momentum", c.bandit.momentum);
    if (!(c.bandit.momentum >= 0.0 && c.bandit.momentum < 1.0)) {
        r.fail("bandit.momentum", "must lie in [0, 1)");
    }
    r.real("bandit.sigma", c.bandit.sigma);
    if (!(c.bandit.sigma >= 0.0)) {
        r.fail("bandit.sigma", "must be non-negative");
    }
    r.integer("bandit.num_codings", c.bandit.num_codings);
    r.at_least("bandit.num_codings", static_cast<long long>(c.bandit.num_codings), 1);
    r.real("bandit.lower", c.bandit.lower);
    r.real("bandit.upper", c.bandit.upper);
    if (!(c.bandit.lower < c.bandit.upper)) {
        r.fail("bandit.upper", "must exceed bandit.lower");
    }
    r.real("bandit.resolution", c.bandit.resolution);
    r.positive("bandit.resolution", c.bandit.resolution);
    r.real("bandit.epsilon_start", c.epsilon.start);
    r.real("bandit.epsilon_end", c.epsilon.end);
    r.integer("bandit.epsilon_generations", c.epsilon.anneal_generations);
    for (auto const& [key, v] : {std::pair {"bandit.epsilon_start", c.epsilon.start}, {"bandit.epsilon_end", c.epsilon.end}}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            r.fail(key, "must lie in [0, 1]");
        }
    }
    try {
        c.bandit.validate();
    } catch (std::invalid_argument const& ex) {
        r.fail("bandit.resolution", ex.what());
    }

    r.real("samr.meta_factor", c.samr_meta_factor);
    if (!(c.samr_meta_factor > 1.0)) {
        r.fail("samr.meta_factor", "must exceed 1");
    }
    if (r.find("samr.init_low_exp") || r.find("samr.init_high_exp") || r.find("samr.init_count")) {
        double lo = funcmin ? -3.0 : -3.0;
        double hi = funcmin ? 3.0 : 0.0;
        std::size_t n = 101;
        r.real("samr.init_low_exp", lo);
        r.real("samr.init_high_exp", hi);
        r.integer("samr.init_count", n);
        r.at_least("samr.init_count", static_cast<long long>(n), 1);
        c.samr_initial_rates = log_spaced(lo, hi, n);
    }

    r.real("gesmr.meta_factor", c.gesmr.meta_factor);
    if (!(c.gesmr.meta_factor > 1.0)) {
        r.fail("gesmr.meta_factor", "must exceed 1");
    }
    if (r.find("gesmr.init_low_exp") || r.find("gesmr.init_high_exp") || r.find("gesmr.init_count")) {
        double lo = -3.0;
        double hi = funcmin ? 3.0 : 0.0;
        std::size_t n = 10;
        r.real("gesmr.init_low_exp", lo);
        r.real("gesmr.init_high_exp", hi);
        r.integer("gesmr.init_count", n);
        r.at_least("gesmr.init_count", static_cast<long long>(n), 1);
        c.gesmr.initial_rates = log_spaced(lo, hi, n);
    }
    r.integer("gesmr.meta_truncation", c.gesmr.meta_truncation);
    if (c.gesmr.meta_truncation == 0 || c.gesmr.meta_truncation > c.gesmr.initial_rates.size()) {
        r.fail("gesmr.meta_truncation", "must lie in [1, meta population size]");
    }

    if (r.find("lamr.low_exp") || r.find("lamr.high_exp") || r.find("lamr.count")) {
        double lo = -3.0;
        double hi = 0.0;
        std::size_t n = 10;
        r.real("lamr.low_exp", lo);
        r.real("lamr.high_exp", hi);
        r.integer("lamr.count", n);
        r.at_least("lamr.count", static_cast<long long>(n), 1);
        c.lamr_candidates = log_spaced(lo, hi, n);
    }
    r.integer("lamr.lookahead", c.lamr_lookahead);
    r.at_least("lamr.lookahead", c.lamr_lookahead, 1);

    // Probe.
    if (r.find("probe.rates")) {
        spec.probe_config.rates = r.reals("probe.rates");
        if (spec.probe_config.rates.empty()) {
            r.fail("probe.rates", "empty rate list");
        }
        for (double v : spec.probe_config.rates) {
            if (!(v > 0.0)) {
                r.fail("probe.rates", "rates must be positive");
            }
        }
    }
    r.integer("probe.samples", spec.probe_config.samples_per_generation);
    spec.probe_config.kernel = c.bandit.len_history;
    r.integer("probe.kernel", spec.probe_config.kernel);
    r.at_least("probe.kernel", static_cast<long long>(spec.probe_config.kernel), 1);
    r.real("probe.alpha", spec.probe_config.alpha);
    if (!(spec.probe_config.alpha > 0.0 && spec.probe_config.alpha <= 1.0)) {
        r.fail("probe.alpha", "must lie in (0, 1]");
    }
    r.real("probe.host_rate", spec.probe_host_rate);
    r.positive("probe.host_rate", spec.probe_host_rate);

    spec.run.seed = spec.seed_base;
    return spec;
}

ExperimentSpec load_spec(std::optional<std::string> const& config_path, std::optional<std::string> const& preset_name,
    bool use_env)
{
    RawConfig raw;
    if (preset_name) {
        raw = preset(*preset_name);
    }
    if (config_path) {
        for (auto& [k, v] : parse_config_file(*config_path).entries) {
            raw.entries[k] = v;
        }
    }
    if (use_env) {
        apply_env_overrides(raw, [](char const* name) { return std::getenv(name); });
    }
    return build_spec(raw);
}

std::string ExperimentSpec::render() const
{
    std::ostringstream o;
    auto line = [&](std::string const& k, std::string const& v) { o << k << " = " << v << '\n'; };
    ControllerSettings const& c = controller;
    std::string ctl;
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        ctl += (i ? ", " : "") + std::string(to_string(controllers[i]));
    }
    line("problem", problem.id);
    line("controllers", ctl);
    line("runs", std::to_string(runs));
    line("seed_base", std::to_string(seed_base));
    line("output", output);
    line("probe", probe ? "on" : "off");
    line("jobs", std::to_string(jobs));
    o << "\n[run]\n";
    line("population", std::to_string(run.population));
    line("elites", std::to_string(run.elites));
    line("generations", std::to_string(run.generations));
    line("selection", std::string(to_string(run.selection)));
    line("truncation", std::to_string(run.truncation));
    line("record_rates", run.record_rates ? "on" : "off");
    o << "\n[transform]\n";
    line("c", fmt(run.transform.c));
    line("identity", run.transform.identity ? "on" : "off");
    o << "\n[problem]\n";
    line("dimension", std::to_string(problem.dimension));
    double const sigma = problem.domain == Domain::FunctionMinimization && problem.init_sigma <= 0.0
        ? default_init_sigma(parse_test_function(problem.id))
        : problem.init_sigma;
    line("init_sigma", fmt(sigma));
    line("min_init_length", std::to_string(problem.sr.min_init_length));
    line("max_init_length", std::to_string(problem.sr.max_init_length));
    line("max_length", std::to_string(problem.sr.max_length));
    o << "\n[fixed]\n";
    line("rate", fmt(c.fixed_rate));
    o << "\n[bandit]\n";
    line("num_bandits", std::to_string(c.num_bandits));
    line("len_history", std::to_string(c.bandit.len_history));
    line("momentum", fmt(c.bandit.momentum));
    line("sigma", fmt(c.bandit.sigma));
    line("num_codings", std::to_string(c.bandit.num_codings));
    line("lower", fmt(c.bandit.lower));
    line("upper", fmt(c.bandit.upper));
    line("resolution", fmt(c.bandit.resolution));
    line("epsilon_start", fmt(c.epsilon.start));
    line("epsilon_end", fmt(c.epsilon.end));
    line("epsilon_generations", std::to_string(c.epsilon.anneal_generations));
    o << "\n[samr]\n";
    line("meta_factor", fmt(c.samr_meta_factor));
    line("init_rates", join(c.samr_initial_rates));
    o << "\n[gesmr]\n";
    line("meta_factor", fmt(c.gesmr.meta_factor));
    line("meta_truncation", std::to_string(c.gesmr.meta_truncation));
    line("init_rates", join(c.gesmr.initial_rates));
    o << "\n[lamr]\n";
    line("candidates", join(c.lamr_candidates));
    line("lookahead", std::to_string(c.lamr_lookahead));
    o << "\n[probe]\n";
    line("rates", join(probe_config.rates));
    line("samples", std::to_string(probe_config.samples_per_generation));
    line("kernel", std::to_string(probe_config.kernel));
    line("alpha", fmt(probe_config.alpha));
    line("host_rate", fmt(probe_host_rate));
    return o.str();
}

} // namespace ratectl
