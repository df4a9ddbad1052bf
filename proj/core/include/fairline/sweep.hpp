#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairline/llm_operator.hpp"
#include "fairline/moead.hpp"
#include "fairline/scenario.hpp"

namespace fairline::sweep {

struct SweepSpec {
    std::vector<double> values;  // average velocities (m/s) or vehicle counts
    int repetitions = 30;
    std::vector<std::string> operators = {"mock-llm"};
    double baseline_window_ms = 100.0;
    int generations = 100;
    int partitions = 7;  // Das-Dennis n_p; population C(n_p + N, N)
    std::uint64_t master_seed = 1;
};

/// Seed for trial `counter` derived from the master seed (splitmix64 step).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t counter);

/// Scenario with lane speeds re-centered on avg_v, keeping the 4 m/s gaps.
Scenario with_average_velocity(const Scenario& templ, double avg_v);

/// Scenario rebuilt for n vehicles (speeds 20 + 4k).
Scenario with_vehicle_count(const Scenario& templ, int n);

struct VelocityRow {
    double avg_v = 0.0;
    std::string op;  // operator name or "baseline"
    int trial = 0;
    bool ok = true;
    std::string error;
    WindowVector windows;
    std::vector<double> fk;
    double fage = 0.0;
    std::vector<double> kindex;
    double kindex_avg = 0.0;
};

/// One row per (velocity, operator, trial) plus one baseline row per
/// velocity. Failed runs are kept with ok=false and the sweep continues.
std::vector<VelocityRow> sweep_velocity(const SweepSpec& spec, const Scenario& templ,
                                        llm::Client* client = nullptr);

struct VehicleRow {
    int num_vehicles = 0;
    std::string op;
    int trial = 0;
    bool ok = true;
    std::string error;
    double network_kindex = 0.0;  // mean per-vehicle fairness index
    double max_fk = 0.0;          // max deviation from the mean
    double fage = 0.0;            // mean per-vehicle AoI, s
};

std::vector<VehicleRow> sweep_vehicles(const SweepSpec& spec, const Scenario& templ,
                                       llm::Client* client = nullptr);

struct HvRow {
    std::string op;
    int trial = 0;
    int generation = 0;
    double hv = 0.0;
    double elapsed_s = 0.0;  // wall clock of the whole run
};

/// Per-generation hypervolume of the cumulative archive, normalized over
/// the union of all compared runs' final archives (reference 1.1 per axis).
/// Unavailable operators (llm without a client) are skipped with a notice
/// in `skipped`.
std::vector<HvRow> compare_operators(const SweepSpec& spec, const Scenario& scenario,
                                     llm::Client* client = nullptr,
                                     std::vector<std::string>* skipped = nullptr);

/// Analytic evaluation of a fixed common window (never runs the optimizer).
VelocityRow evaluate_baseline(const Scenario& scenario, double window_ms);

}  // namespace fairline::sweep
