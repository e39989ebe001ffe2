#include "ratectl/experiment.hpp"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "ratectl/analysis.hpp"

namespace fs = std::filesystem;

namespace ratectl {

std::string format_double(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::unique_ptr<RateController> make_controller(ControllerKind kind, ExperimentSpec const& spec, std::uint64_t seed)
{
    ControllerSettings const& c = spec.controller;
    switch (kind) {
    case ControllerKind::Fixed:
        return std::make_unique<FixedController>(c.fixed_rate);
    case ControllerKind::Samr:
        return std::make_unique<SamrController>(c.samr_initial_rates, c.samr_meta_factor);
    case ControllerKind::Gesmr:
        return std::make_unique<GesmrController>(c.gesmr, spec.run.transform, Rng(derive_seed(seed, Stream::Controller)));
    case ControllerKind::Lamr:
        return std::make_unique<LamrController>(c.lamr_candidates, c.lamr_lookahead);
    case ControllerKind::Bandit: {
        Rng rng(derive_seed(seed, Stream::Controller));
        return std::make_unique<BanditController>(
            BanditEnsemble(c.bandit, c.num_bandits, rng, c.epsilon), spec.run.transform);
    }
    }
    throw std::invalid_argument("unknown controller kind");
}

RunResult run_single(ExperimentSpec const& spec, ControllerKind kind, std::uint64_t seed,
    std::function<void(GenerationRecord const&)> const& on_record)
{
    RunConfig config = spec.run;
    config.seed = seed;
    return with_problem(spec.problem, [&](auto const& problem) {
        Run run(problem, config, make_controller(kind, spec, seed));
        return run.run(on_record);
    });
}

ProbeResult probe_single(ExperimentSpec const& spec, std::uint64_t seed)
{
    RunConfig config = spec.run;
    config.seed = seed;
    return with_problem(spec.problem, [&](auto const& problem) {
        return landscape_probe(problem, config, spec.probe_config, spec.probe_host_rate);
    });
}

std::vector<ProbeRow> average_probe_rows(std::vector<std::vector<ProbeRow>> const& per_run)
{
    // Keyed by (generation, first-seen rate order, kind).
    std::vector<double> rate_order;
    auto rate_index = [&](double r) {
        for (std::size_t i = 0; i < rate_order.size(); ++i) {
            if (rate_order[i] == r) {
                return i;
            }
        }
        rate_order.push_back(r);
        return rate_order.size() - 1;
    };
    std::map<std::tuple<int, std::size_t, int>, std::pair<double, std::size_t>> acc;
    for (auto const& rows : per_run) {
        for (auto const& row : rows) {
            auto& slot = acc[{row.generation, rate_index(row.rate), static_cast<int>(row.kind)}];
            slot.first += row.value;
            ++slot.second;
        }
    }
    std::vector<ProbeRow> out;
    out.reserve(acc.size());
    for (auto const& [key, v] : acc) {
        auto const [gen, r, kind] = key;
        out.push_back({gen, rate_order[r], static_cast<RewardKind>(kind), v.first / static_cast<double>(v.second)});
    }
    return out;
}

namespace {

std::ofstream open_output(fs::path const& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return f;
}

void prepare_output(fs::path const& dir, std::vector<std::string> const& files, bool force)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    for (auto const& name : files) {
        if (fs::exists(dir / name) && !force) {
            throw std::runtime_error((dir / name).string() + " already exists (use --force to overwrite)");
        }
    }
}

void write_generation_row(std::ostream& o, std::size_t run_id, GenerationRecord const& rec)
{
    o << run_id << ',' << rec.generation << ',' << format_double(rec.best_error) << ','
      << format_double(rec.mean_log_rate) << ',' << format_double(rec.epsilon) << '\n';
}

void write_run_row(std::ostream& o, RunSummary const& s)
{
    o << s.run_id << ',' << s.seed << ',' << s.controller << ',' << s.problem << ',' << (s.solved ? 1 : 0) << ','
      << s.solve_generation << ',' << format_double(s.final_best_error) << '\n';
}

// Runs work(i) for i in [0, n) on `jobs` threads and calls commit(i) on the
// calling thread strictly in index order as results become available.
template <typename Work, typename Commit>
void ordered_parallel(std::size_t n, std::size_t jobs, Work work, Commit commit)
{
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            work(i);
            commit(i);
        }
        return;
    }
    std::vector<char> done(n, 0);
    std::vector<std::exception_ptr> errors(n);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next {0};
    std::atomic<bool> stop {false};

    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, n); ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t const i = next.fetch_add(1);
                if (i >= n || stop.load()) {
                    return;
                }
                std::exception_ptr err;
                try {
                    work(i);
                } catch (...) {
                    err = std::current_exception();
                }
                {
                    std::lock_guard lock(mu);
                    errors[i] = err;
                    done[i] = 1;
                }
                cv.notify_all();
            }
        });
    }
    std::exception_ptr failure;
    for (std::size_t i = 0; i < n && !failure; ++i) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[i] != 0; });
        if (errors[i]) {
            failure = errors[i];
            break;
        }
        lock.unlock();
        try {
            commit(i);
        } catch (...) {
            failure = std::current_exception();
        }
    }
    stop = true;
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

void write_probe_csv(fs::path const& path, std::vector<ProbeRow> const& rows)
{
    auto f = open_output(path);
    f << kProbeHeader << '\n';
    for (auto const& r : rows) {
        f << r.generation << ',' << format_double(r.rate) << ',' << to_string(r.kind) << ','
          << format_double(r.value) << '\n';
    }
    f.flush();
}

// Seeds seed_base..seed_base+runs-1; returns the averaged rows.
std::vector<ProbeRow> probe_batch(ExperimentSpec const& spec, std::vector<ProbeResult>* keep = nullptr)
{
    std::vector<std::vector<ProbeRow>> per_run(spec.runs);
    std::vector<ProbeResult> results(spec.runs);
    ordered_parallel(
        spec.runs, spec.jobs,
        [&](std::size_t i) { results[i] = probe_single(spec, spec.seed_base + i); },
        [&](std::size_t i) { per_run[i] = results[i].rows; });
    if (keep != nullptr) {
        *keep = std::move(results);
    }
    return average_probe_rows(per_run);
}

void write_config_echo(fs::path const& dir, ExperimentSpec const& spec)
{
    auto f = open_output(dir / "config.txt");
    f << spec.render();
}

} // namespace

int run_experiment(ExperimentSpec const& spec, bool force, std::ostream& out)
{
    fs::path const dir(spec.output);
    std::vector<std::string> files {"runs.csv", "generations.csv", "config.txt"};
    if (spec.probe) {
        files.push_back("probe.csv");
    }
    prepare_output(dir, files, force);
    write_config_echo(dir, spec);

    auto runs_csv = open_output(dir / "runs.csv");
    auto gens_csv = open_output(dir / "generations.csv");
    runs_csv << kRunsHeader << '\n' << std::flush;
    gens_csv << kGenerationsHeader << '\n' << std::flush;

    std::size_t const total = spec.controllers.size() * spec.runs;
    std::vector<RunSummary> summaries(total);
    bool const parallel = spec.jobs > 1 && total > 1;
    fs::path const parts = dir / ".parts";
    if (parallel) {
        fs::create_directories(parts);
    }
    auto part_path = [&](std::size_t id) { return parts / ("generations_" + std::to_string(id) + ".csv"); };

    auto work = [&](std::size_t id) {
        ControllerKind const kind = spec.controllers[id / spec.runs];
        std::uint64_t const seed = spec.seed_base + id % spec.runs;
        std::ofstream part;
        std::ostream* sink = &gens_csv;
        if (parallel) {
            part = open_output(part_path(id));
            sink = &part;
        }
        RunResult const res = run_single(spec, kind, seed, [&](GenerationRecord const& rec) {
            write_generation_row(*sink, id, rec);
            sink->flush();
        });
        RunSummary& s = summaries[id];
        s.run_id = id;
        s.seed = seed;
        s.controller = std::string(to_string(kind));
        s.problem = spec.problem.id;
        s.solved = res.solved;
        s.solve_generation = res.solve_generation;
        s.final_best_error = res.final_best_error;
    };
    auto commit = [&](std::size_t id) {
        if (parallel) {
            {
                std::ifstream in(part_path(id), std::ios::binary);
                gens_csv << in.rdbuf();
            }
            gens_csv.flush();
            fs::remove(part_path(id));
        }
        write_run_row(runs_csv, summaries[id]);
        runs_csv.flush();
    };
    ordered_parallel(total, spec.jobs, work, commit);
    if (parallel) {
        std::error_code ec;
        fs::remove(parts, ec);
    }

    if (spec.probe) {
        write_probe_csv(dir / "probe.csv", probe_batch(spec));
    }
    print_summary(summaries, out);
    return 0;
}

int run_probe_experiment(ExperimentSpec const& spec, bool force, std::ostream& out)
{
    fs::path const dir(spec.output);
    prepare_output(dir, {"probe.csv", "runs.csv", "generations.csv", "config.txt"}, force);
    write_config_echo(dir, spec);

    std::vector<ProbeResult> results;
    auto const rows = probe_batch(spec, &results);
    write_probe_csv(dir / "probe.csv", rows);

    auto runs_csv = open_output(dir / "runs.csv");
    auto gens_csv = open_output(dir / "generations.csv");
    runs_csv << kRunsHeader << '\n';
    gens_csv << kGenerationsHeader << '\n';
    std::vector<RunSummary> summaries;
    for (std::size_t i = 0; i < results.size(); ++i) {
        RunResult const& host = results[i].host;
        for (auto const& rec : host.records) {
            write_generation_row(gens_csv, i, rec);
        }
        RunSummary s {i, spec.seed_base + i, "fixed", spec.problem.id, host.solved, host.solve_generation,
            host.final_best_error};
        write_run_row(runs_csv, s);
        summaries.push_back(s);
    }
    runs_csv.flush();
    gens_csv.flush();
    out << "probe: " << rows.size() << " rows written to " << (dir / "probe.csv").string() << '\n';
    print_summary(summaries, out);
    return 0;
}

std::vector<RunSummary> read_runs_csv(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kRunsHeader) {
        throw std::runtime_error(path + ": unexpected header");
    }
    std::vector<RunSummary> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 7) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 7 fields");
        }
        try {
            RunSummary s;
            s.run_id = std::stoull(f[0]);
            s.seed = std::stoull(f[1]);
            s.controller = f[2];
            s.problem = f[3];
            s.solved = f[4] == "1";
            s.solve_generation = std::stoi(f[5]);
            s.final_best_error = std::stod(f[6]);
            out.push_back(s);
        } catch (std::exception const&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
        }
    }
    return out;
}

void print_summary(std::vector<RunSummary> const& runs, std::ostream& out)
{
    std::vector<std::string> order;
    std::map<std::string, std::vector<RunSummary const*>> groups;
    for (auto const& r : runs) {
        if (!groups.count(r.controller)) {
            order.push_back(r.controller);
        }
        groups[r.controller].push_back(&r);
    }
    if (order.empty()) {
        out << "no runs\n";
        return;
    }
    auto errors_of = [&](std::string const& name) {
        std::vector<double> e;
        for (auto const* r : groups[name]) {
            e.push_back(r->final_best_error);
        }
        return e;
    };
    auto solved_of = [&](std::string const& name) {
        std::size_t s = 0;
        for (auto const* r : groups[name]) {
            s += r->solved ? 1 : 0;
        }
        return s;
    };

    out << std::left << std::setw(10) << "scheme" << std::right << std::setw(6) << "runs" << std::setw(8) << "solved"
        << std::setw(14) << "mean_error" << std::setw(14) << "ci95_low" << std::setw(14) << "ci95_high"
        << std::setw(12) << "p_welch" << std::setw(12) << "p_less" << std::setw(12) << "p_z" << '\n';
    auto const ref_errors = errors_of(order.front());
    std::size_t const ref_solved = solved_of(order.front());
    auto num = [](double v, int prec) {
        std::ostringstream s;
        s << std::setprecision(prec) << v;
        return s.str();
    };
    for (auto const& name : order) {
        auto const e = errors_of(name);
        std::size_t const solved = solved_of(name);
        Rng rng(0);
        StatReport const ci = bootstrap_ci(e, rng);
        out << std::left << std::setw(10) << name << std::right << std::setw(6) << e.size() << std::setw(8) << solved
            << std::setw(14) << num(ci.estimate, 6) << std::setw(14) << num(ci.lower, 6) << std::setw(14)
            << num(ci.upper, 6);
        if (name == order.front()) {
            out << std::setw(12) << "-" << std::setw(12) << "-" << std::setw(12) << "-";
        } else {
            std::string pw = "-";
            std::string pl = "-";
            if (e.size() >= 2 && ref_errors.size() >= 2) {
                // Reference scheme against this one; p_less is P(ref mean < this mean).
                auto const w = welch_test(ref_errors, e);
                pw = num(w.p_two_sided, 4);
                pl = num(w.p_less, 4);
            }
            auto const z = two_proportion_z(ref_solved, ref_errors.size(), solved, e.size());
            out << std::setw(12) << pw << std::setw(12) << pl << std::setw(12) << num(z.p_two_sided, 4);
        }
        out << '\n';
    }
    if (order.size() > 1) {
        out << "p-values compare each scheme with " << order.front() << " (Welch t on final errors, "
            << "two-proportion z on success counts)\n";
    }
}

} // namespace ratectl
