// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ratectl/analysis.hpp"
#include "ratectl/bandit.hpp"
#include "ratectl/config.hpp"
#include "ratectl/experiment.hpp"
#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"
#include "ratectl/tile_coding.hpp"
#include "ratectl/umad.hpp"

using namespace ratectl;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(std::string const& id, bool pass, std::string const& detail)
{
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
    failures += pass ? 0 : 1;
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

double mean(std::vector<double> const& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

ExperimentSpec spec_for(std::string const& preset_name, std::string const& problem)
{
    RawConfig raw = preset(preset_name);
    raw.set("problem", problem);
    return build_spec(raw);
}

// 1. Oracle equivalence.
void criterion1()
{
    Rng rng(101);
    std::size_t mismatches = 0;
    std::size_t configs = 0;
    while (configs < 10000) {
        double const l = static_cast<double>(static_cast<int>(rng.below(400)) - 200) / 8.0;
        double const span = static_cast<double>(1 + rng.below(400)) / 8.0;
        double const w = static_cast<double>(1 + rng.below(64)) / 16.0;
        double const o = rng.bernoulli(0.3) ? 0.0 : static_cast<double>(rng.below(static_cast<std::uint64_t>(span * 16.0))) / 16.0;
        if (!(o < span)) {
            continue;
        }
        ++configs;
        TileCoding const tc(l, l + span, o, w);
        double const x = rng.uniform(l, l + span);
        std::vector<double> bounds {l};
        if (o > 0.0) {
            bounds.push_back(l + o);
        }
        for (std::size_t k = 1; l + o + static_cast<double>(k) * w < l + span; ++k) {
            bounds.push_back(l + o + static_cast<double>(k) * w);
        }
        std::size_t scan = 0;
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            if (x >= bounds[i]) {
                scan = i;
            }
        }
        scan = std::min(o > 0.0 ? scan : scan + 1, tc.tile_count() - 1);
        mismatches += tc.tile_index(x) == scan ? 0 : 1;
    }

    std::size_t pool_bad = 0;
    std::size_t window_bad = 0;
    for (int t = 0; t < 10000; ++t) {
        std::size_t const n = 1 + rng.below(300);
        std::size_t const k = 1 + rng.below(std::min<std::size_t>(n, 120));
        std::vector<double> x(n);
        for (double& v : x) {
            v = rng.uniform(-1.0, 1.0);
        }
        auto const pooled = max_pool_1d(x, k);
        RewardHistory h(k);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t const from = i + 1 >= k ? i + 1 - k : 0;
            double const want = *std::max_element(x.begin() + static_cast<long>(from), x.begin() + static_cast<long>(i + 1));
            window_bad += windowed_max(h, x[i]) == want ? 0 : 1;
            if (i + 1 >= k) {
                pool_bad += pooled[i + 1 - k] == want ? 0 : 1;
            }
        }
    }

    std::size_t weight_bad = 0;
    for (int t = 0; t < 50; ++t) {
        BanditConfig cfg;
        if (t % 2 == 1) {
            cfg.lower = -100.0;
            cfg.upper = 100.0;
        }
        Bandit b(cfg, 1e-3, rng);
        for (int i = 0; i < 500; ++i) {
            b.observe(rng.uniform(cfg.lower, cfg.upper), rng.uniform(-1.0, 1.0));
        }
        auto const w = b.base_weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            double const x = cfg.lower + static_cast<double>(i) * cfg.resolution + cfg.resolution / 2.0;
            double s = 0.0;
            for (auto const& tc : b.codings()) {
                s += tc.tile_value(x);
            }
            weight_bad += w[i] == s / static_cast<double>(b.codings().size()) ? 0 : 1;
        }
    }
    report("1", mismatches + pool_bad + window_bad + weight_bad == 0,
        "tile_index mismatches " + std::to_string(mismatches) + "/10000, max_pool mismatches " + std::to_string(pool_bad)
            + ", windowed_max mismatches " + std::to_string(window_bad) + ", base_weights mismatches "
            + std::to_string(weight_bad));
}

// 2. UMAD size neutrality.
void criterion2()
{
    Rng rng(202);
    TokenGenome const parent = random_genome(100, 9, rng);
    bool ok = true;
    std::string detail;
    for (double mu : {0.1, 0.5, 2.5}) {
        double s = 0.0;
        for (int i = 0; i < 100000; ++i) {
            s += static_cast<double>(umad_mutate(parent, mu, 9, rng).size());
        }
        double const m = s / 100000.0;
        ok = ok && std::abs(m - 100.0) <= 1.0;
        detail += "mu=" + fmt(mu) + " mean=" + fmt(m, 6) + "; ";
    }
    double const p = umad_deletion_rate(0.1);
    bool const exact = std::abs(p - 1.0 / 11.0) <= 2.0 * std::numeric_limits<double>::epsilon();
    report("2", ok && exact, detail + "deletion(0.1)=" + fmt(p, 17) + " vs 1/11");
}

// 3. SGD fixed point.
void criterion3()
{
    bool ok = true;
    std::string detail;
    for (double gamma : {1e-4, 3.16e-4, 1e-3}) {
        TileCoding tc(-10.0, 0.0, 0.0, 0.3);
        double const target = 0.75;
        int steps = 0;
        while (std::abs(tc.tile_value(-5.0) - target) >= 1e-3 && steps < 100000) {
            tc.observe(-5.0, target, gamma, 0.9);
            ++steps;
        }
        ok = ok && std::abs(tc.tile_value(-5.0) - target) < 1e-3;
        detail += "gamma=" + fmt(gamma) + " steps=" + std::to_string(steps) + "; ";
    }
    report("3", ok, detail);
}

std::vector<RunResult> batch(ExperimentSpec const& spec, ControllerKind kind, std::size_t runs)
{
    std::vector<RunResult> out;
    for (std::size_t i = 0; i < runs; ++i) {
        out.push_back(run_single(spec, kind, spec.seed_base + i));
    }
    return out;
}

std::vector<double> finals(std::vector<RunResult> const& rs)
{
    std::vector<double> v;
    for (auto const& r : rs) {
        v.push_back(r.final_best_error);
    }
    return v;
}

// 4. Function minimization ordering.
void criterion4()
{
    for (auto const& [id, problem] : {std::pair {"4a", "ackley"}, std::pair {"4b", "rastrigin"}}) {
        auto const spec = spec_for("funcmin-desk", problem);
        auto const bandit = finals(batch(spec, ControllerKind::Bandit, 20));
        auto const samr = finals(batch(spec, ControllerKind::Samr, 20));
        auto const w = welch_test(bandit, samr);
        report(id, mean(bandit) < mean(samr) && w.p_less < 0.1,
            std::string(problem) + ": bandit mean " + fmt(mean(bandit), 6) + " vs SAMR mean " + fmt(mean(samr), 6)
                + ", one-sided Welch p=" + fmt(w.p_less));
    }
    auto spec = spec_for("funcmin-desk", "linear");
    spec.run.generations = 10;
    std::vector<double> at10;
    for (auto const& r : batch(spec, ControllerKind::Bandit, 20)) {
        at10.push_back(r.records.at(9).mean_log_rate);
    }
    report("4c", mean(at10) > 50.0, "linear: bandit mean sampled log rate at generation 10 = " + fmt(mean(at10))
        + " (min over seeds " + fmt(*std::min_element(at10.begin(), at10.end())) + ")");
}

// Mean log rate at `generation`, carrying a finished run's last value forward.
double log_rate_at(RunResult const& r, int generation)
{
    double v = r.records.front().mean_log_rate;
    for (auto const& rec : r.records) {
        if (rec.generation <= generation) {
            v = rec.mean_log_rate;
        }
    }
    return v;
}

// 5. Vanishing rate.
void criterion5()
{
    auto const spec = spec_for("sr-desk", "nguyen3");
    int const g = spec.run.generations;
    auto const samr = batch(spec, ControllerKind::Samr, 10);
    double init = 0.0;
    for (double r : spec.controller.samr_initial_rates) {
        init += std::log(r);
    }
    init /= static_cast<double>(spec.controller.samr_initial_rates.size());
    std::vector<double> samr_end;
    std::size_t active = 0;
    for (auto const& r : samr) {
        samr_end.push_back(log_rate_at(r, g));
        active += r.records.size() == static_cast<std::size_t>(g) ? 1 : 0;
    }
    auto const bandit = batch(spec, ControllerKind::Bandit, 10);
    std::vector<double> bandit_end;
    for (auto const& r : bandit) {
        bandit_end.push_back(log_rate_at(r, g));
    }
    double const bmin = *std::min_element(bandit_end.begin(), bandit_end.end());
    double const bmax = *std::max_element(bandit_end.begin(), bandit_end.end());
    report("5", mean(samr_end) < init - std::log(10.0) && mean(bandit_end) > -9.0 && bmin >= -10.0 && bmax < 0.0,
        "SAMR mean log rate " + fmt(mean(samr_end)) + " vs threshold " + fmt(init - std::log(10.0)) + " ("
            + std::to_string(active) + "/10 runs reached generation " + std::to_string(g)
            + "); bandit mean log rate " + fmt(mean(bandit_end)) + " in [" + fmt(bmin) + ", " + fmt(bmax) + "]");
}

std::size_t solved_count(std::vector<RunResult> const& rs)
{
    return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [](RunResult const& r) { return r.solved; }));
}

// 6. Solvability smoke test.
void criterion6()
{
    auto const n1 = spec_for("sr-desk", "nguyen1");
    std::size_t const fixed = solved_count(batch(n1, ControllerKind::Fixed, 10));
    std::size_t const bandit = solved_count(batch(n1, ControllerKind::Bandit, 10));
    report("6a", fixed >= 5 && bandit >= 5,
        "nguyen1 solves: fixed 0.1 " + std::to_string(fixed) + "/10, bandit " + std::to_string(bandit) + "/10");

    auto const n8 = spec_for("sr-desk", "nguyen8");
    std::string detail;
    std::size_t total = 0;
    for (auto kind : {ControllerKind::Fixed, ControllerKind::Bandit, ControllerKind::Samr, ControllerKind::Gesmr,
             ControllerKind::Lamr}) {
        std::size_t const s = solved_count(batch(n8, kind, 10));
        total += s;
        detail += std::string(to_string(kind)) + " " + std::to_string(s) + "/10; ";
    }
    report("6b", total == 0, "nguyen8 solves: " + detail);
}

// 7. Landscape probe trend.
void criterion7()
{
    auto spec = spec_for("sr-desk", "nguyen4");
    spec.probe_host_rate = 0.1;
    std::size_t const lo = 0;  // rate 0.01
    std::size_t const hi = 4;  // rate 1
    int early_votes = 0;
    int late_votes = 0;
    int solved = 0;
    std::vector<double> immediate_sum(spec.probe_config.rates.size(), 0.0);
    std::size_t samples = 0;
    std::string detail;
    for (std::size_t i = 0; i < 5; ++i) {
        auto const res = probe_single(spec, spec.seed_base + i);
        solved += res.host.solved ? 1 : 0;
        int const last_gen = res.rows.back().generation;
        // Mean smoothed max-window value over a generation range, per rate.
        auto window_mean = [&](std::size_t rate, int from, int to) {
            double s = 0.0;
            int n = 0;
            for (auto const& row : res.rows) {
                if (row.kind == RewardKind::MaxWindow && row.rate == spec.probe_config.rates[rate]
                    && row.generation >= from && row.generation <= to) {
                    s += row.value;
                    ++n;
                }
            }
            return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
        };
        double const e_hi = window_mean(hi, 1, 10);
        double const e_lo = window_mean(lo, 1, 10);
        double const l_hi = window_mean(hi, last_gen - 9, last_gen);
        double const l_lo = window_mean(lo, last_gen - 9, last_gen);
        early_votes += e_hi > e_lo ? 1 : 0;
        late_votes += l_hi < l_lo ? 1 : 0;
        detail += "seed " + std::to_string(i) + (res.host.solved ? " solved@" + std::to_string(res.host.solve_generation) : " unsolved")
            + " early(1 vs .01)=" + fmt(e_hi, 3) + "/" + fmt(e_lo, 3) + " late=" + fmt(l_hi, 3) + "/" + fmt(l_lo, 3) + "; ";
        for (std::size_t r = 0; r < res.rewards.size(); ++r) {
            for (double v : res.rewards[r]) {
                immediate_sum[r] += v;
            }
        }
        samples += res.rewards[0].size();
    }
    bool all_negative = true;
    std::string imm;
    for (std::size_t r = 0; r < immediate_sum.size(); ++r) {
        double const m = immediate_sum[r] / static_cast<double>(samples);
        all_negative = all_negative && m < 0.0;
        imm += fmt(spec.probe_config.rates[r]) + ":" + fmt(m, 3) + " ";
    }
    report("7a", early_votes >= 3 && late_votes >= 3,
        "max-window votes early " + std::to_string(early_votes) + "/5, late " + std::to_string(late_votes) + "/5 ("
            + std::to_string(solved) + "/5 solved); " + detail);
    report("7b", all_negative, "mean immediate reward per rate: " + imm);
}

// 8. Statistics against reference values.
void criterion8()
{
    std::vector<double> const a {19.1, 21.4, 18.7, 22.9, 20.3, 17.8, 23.5, 19.9};
    std::vector<double> const b {24.2, 22.8, 26.1, 23.9, 25.4, 27.0};
    // scipy.stats.ttest_ind(equal_var=False) and statsmodels proportions_ztest.
    double const welch = welch_t_test(a, b);
    double const z1 = two_proportion_z_test(7, 10, 3, 10);
    auto const z2 = two_proportion_z(45, 50, 16, 50);
    bool const stats_ok = std::abs(welch - 0.0005445364323580076) < 1e-4 && std::abs(z1 - 0.07363827012030266) < 1e-4
        && std::abs(z2.z - 5.94566966875929) < 1e-4 && z2.p_two_sided < 0.01;

    Rng rng(808);
    double width = 0.0;
    int const reps = 100;
    for (int t = 0; t < reps; ++t) {
        std::vector<double> x(100);
        for (double& v : x) {
            v = rng.normal();
        }
        auto const ci = bootstrap_ci(x, rng);
        width += ci.upper - ci.lower;
    }
    width /= reps;
    double const theory = 2.0 * 1.96 / 10.0;
    report("8", stats_ok && std::abs(width - theory) <= 0.25 * theory,
        "welch p=" + fmt(welch, 8) + ", z-test p(7/10 vs 3/10)=" + fmt(z1, 8) + ", z(45/50 vs 16/50)=" + fmt(z2.z, 6)
            + " p=" + fmt(z2.p_two_sided, 3) + ", bootstrap width " + fmt(width) + " vs " + fmt(theory));
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Determinism of generations.csv.
void criterion9()
{
    auto const root = fs::temp_directory_path() / "ratectl_acceptance_det";
    fs::remove_all(root);
    bool ok = true;
    std::string detail;
    for (auto const& [name, problem, controllers] :
        {std::tuple {"funcmin-desk", "ackley", "bandit,samr,gesmr"}, std::tuple {"sr-desk", "nguyen1", "bandit,fixed"}}) {
        std::string texts[2];
        for (int k = 0; k < 2; ++k) {
            RawConfig raw = preset(name);
            raw.set("problem", problem);
            raw.set("controllers", controllers);
            raw.set("output", (root / (std::string(name) + std::to_string(k))).string());
            std::ostringstream sink;
            run_experiment(build_spec(raw), true, sink);
            texts[k] = slurp(root / (std::string(name) + std::to_string(k)) / "generations.csv");
        }
        bool const same = !texts[0].empty() && texts[0] == texts[1];
        ok = ok && same;
        detail += std::string(name) + "/" + problem + ": " + std::to_string(texts[0].size()) + " bytes "
            + (same ? "identical" : "DIFFER") + "; ";
    }
    fs::remove_all(root);
    report("9", ok, detail);
}

} // namespace

int main(int argc, char** argv)
{
    std::map<std::string, std::function<void()>> const all {
        {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4}, {"5", criterion5},
        {"6", criterion6}, {"7", criterion7}, {"8", criterion8}, {"9", criterion9},
    };
    std::set<std::string> chosen;
    for (int i = 1; i < argc; ++i) {
        chosen.insert(argv[i]);
    }
    for (auto const& [id, fn] : all) {
        if (!chosen.empty() && !chosen.count(id)) {
            continue;
        }
        auto const t0 = std::chrono::steady_clock::now();
        try {
            fn();
        } catch (std::exception const& e) {
            report(id, false, std::string("exception: ") + e.what());
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "  (" << fmt(secs, 3) << " s)" << std::endl;
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
