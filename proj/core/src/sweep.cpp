#include "fairline/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairline/aoi.hpp"
#include "fairline/metrics.hpp"

namespace fairline::sweep {

namespace {

VelocityRow evaluate_windows(const Scenario& scenario, const WindowVector& windows) {
    VelocityRow row;
    row.windows = windows;
    const moead::ObjectiveEvaluator eval(scenario);
    const moead::ObjectiveVector f = eval.evaluate(windows);
    const int n = scenario.num_vehicles();
    if (!(f.front() < moead::ObjectiveEvaluator::kInfeasible)) {
        row.ok = false;
        row.error = "infeasible window vector";
        return row;
    }
    row.fk.assign(f.begin(), f.begin() + n);
    row.fage = f[static_cast<std::size_t>(n)];
    row.kindex = eval.fairness_indices(windows);
    row.kindex_avg = std::accumulate(row.kindex.begin(), row.kindex.end(), 0.0) / n;
    return row;
}

moead::OptimizerConfig optimizer_config(const SweepSpec& spec, const std::string& op,
                                        std::uint64_t seed) {
    moead::OptimizerConfig cfg;
    cfg.generations = spec.generations;
    cfg.partitions = spec.partitions;
    cfg.operator_choice = moead::operator_from_name(op);
    cfg.rng_seed = seed;
    return cfg;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Scenario with_average_velocity(const Scenario& templ, double avg_v) {
    std::vector<VehicleParams> vehicles = templ.vehicles();
    const int n = static_cast<int>(vehicles.size());
    for (int i = 0; i < n; ++i)
        vehicles[static_cast<std::size_t>(i)].speed_mps =
            avg_v + 4.0 * (i - (n - 1) / 2.0);
    return validate(templ.config(), std::move(vehicles));
}

Scenario with_vehicle_count(const Scenario& templ, int n) {
    ScenarioConfig config = templ.config();
    config.num_vehicles = n;
    std::vector<double> speeds(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) speeds[static_cast<std::size_t>(i)] = 20.0 + 4.0 * i;
    return validate(config, build_highway(config, speeds));
}

VelocityRow evaluate_baseline(const Scenario& scenario, double window_ms) {
    const WindowVector windows(static_cast<std::size_t>(scenario.num_vehicles()), window_ms);
    VelocityRow row = evaluate_windows(scenario, windows);
    row.op = "baseline";
    return row;
}

std::vector<VelocityRow> sweep_velocity(const SweepSpec& spec, const Scenario& templ,
                                        llm::Client* client) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: empty value list");
    if (spec.repetitions < 1) throw std::invalid_argument("sweep: repetitions must be >= 1");
    std::vector<VelocityRow> rows;
    std::uint64_t counter = 0;
    for (double v : spec.values) {
        Scenario scenario = with_average_velocity(templ, v);
        VelocityRow base = evaluate_baseline(scenario, spec.baseline_window_ms);
        base.avg_v = v;
        rows.push_back(std::move(base));
        for (const std::string& op : spec.operators) {
            for (int trial = 0; trial < spec.repetitions; ++trial) {
                VelocityRow row;
                row.avg_v = v;
                row.op = op;
                row.trial = trial;
                try {
                    const auto cfg =
                        optimizer_config(spec, op, trial_seed(spec.master_seed, counter++));
                    const auto archive = moead::evolve(scenario, cfg, client);
                    row = evaluate_windows(scenario, moead::select_solution(archive));
                    row.avg_v = v;
                    row.op = op;
                    row.trial = trial;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<VehicleRow> sweep_vehicles(const SweepSpec& spec, const Scenario& templ,
                                       llm::Client* client) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: empty value list");
    std::vector<VehicleRow> rows;
    std::uint64_t counter = 0;
    auto fill = [](VehicleRow& out, const VelocityRow& in) {
        out.ok = in.ok;
        out.error = in.error;
        out.network_kindex = in.kindex_avg;
        out.max_fk = in.fk.empty() ? 0.0 : *std::max_element(in.fk.begin(), in.fk.end());
        out.fage = in.fage;
    };
    for (double value : spec.values) {
        const int n = static_cast<int>(value);
        if (n < 1) throw std::invalid_argument("sweep: vehicle count must be >= 1");
        Scenario scenario = with_vehicle_count(templ, n);
        VehicleRow base;
        base.num_vehicles = n;
        base.op = "baseline";
        fill(base, evaluate_baseline(scenario, spec.baseline_window_ms));
        rows.push_back(std::move(base));
        for (const std::string& op : spec.operators) {
            for (int trial = 0; trial < spec.repetitions; ++trial) {
                VehicleRow row;
                row.num_vehicles = n;
                row.op = op;
                row.trial = trial;
                try {
                    const auto cfg =
                        optimizer_config(spec, op, trial_seed(spec.master_seed, counter++));
                    const auto archive = moead::evolve(scenario, cfg, client);
                    fill(row, evaluate_windows(scenario, moead::select_solution(archive)));
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<HvRow> compare_operators(const SweepSpec& spec, const Scenario& scenario,
                                     llm::Client* client,
                                     std::vector<std::string>* skipped) {
    struct Run {
        std::string op;
        int trial;
        double elapsed_s;
        std::vector<std::vector<std::vector<double>>> archives;  // per generation
    };
    std::vector<Run> runs;
    std::uint64_t counter = 0;
    for (const std::string& op : spec.operators) {
        if (op == "llm" && !client) {
            if (skipped) skipped->push_back("llm operator skipped: no client configured");
            continue;
        }
        for (int trial = 0; trial < spec.repetitions; ++trial) {
            Run run;
            run.op = op;
            run.trial = trial;
            auto cfg = optimizer_config(spec, op, trial_seed(spec.master_seed, counter++));
            const auto t0 = std::chrono::steady_clock::now();
            moead::evolve(scenario, cfg, client,
                          [&](int, const moead::ParetoArchive& archive) {
                              std::vector<std::vector<double>> objs;
                              objs.reserve(archive.entries.size());
                              for (const auto& e : archive.entries)
                                  objs.push_back(e.objectives);
                              run.archives.push_back(std::move(objs));
                          });
            run.elapsed_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            runs.push_back(std::move(run));
        }
    }
    if (runs.empty()) return {};

    // Normalize over the union of all final archives; reference 1.1 per axis.
    std::vector<std::vector<double>> union_pts;
    for (const auto& run : runs)
        for (const auto& p : run.archives.back()) union_pts.push_back(p);
    const auto [mins, maxs] = metrics::objective_range(union_pts);
    const std::vector<double> ref(mins.size(), 1.1);

    std::vector<HvRow> rows;
    for (const auto& run : runs)
        for (std::size_t g = 0; g < run.archives.size(); ++g) {
            HvRow row;
            row.op = run.op;
            row.trial = run.trial;
            row.generation = static_cast<int>(g);
            row.hv = metrics::hypervolume(
                metrics::normalize_objectives(run.archives[g], mins, maxs), ref);
            row.elapsed_s = run.elapsed_s;
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace fairline::sweep
