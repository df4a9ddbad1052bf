#pragma once

#include <vector>

#include "fairline/scenario.hpp"

namespace fairline::fairness {

struct FairnessReport {
    std::vector<double> per_vehicle_index;           // K_index^i
    double network_index = 0.0;                      // mean of per_vehicle_index
    std::vector<double> per_vehicle_prr;             // P_PRR^i
    std::vector<std::vector<double>> pair_collision; // delta_COL[i][j], diagonal 0
    std::vector<double> per_vehicle_deviation;       // F_Ki = |K_index - K_index^i|
};

/// T_i = R / v_i. Rejects v <= 0.
double dwell_time(double coverage_m, double speed_mps);

/// P_O = (w_i + w_j + 1) / (1000 * 2^mu * RRI). Rejects results > 1.
double overlap_probability(double wi_ms, double wj_ms, int numerology, double rri_ms);

/// N_Sh = (w_i+1)(w_j+1) / (w_i+w_j+1).
double shared_resources(double wi_ms, double wj_ms);

/// P_SH|O = (N_Sc * N_Sh / N_r)^2, clamped to <= 1 (warning counter incremented).
double shared_selection_prob(int num_subchannels, double shared, int total_resources);

/// Number of times shared_selection_prob has clamped since process start.
long shared_selection_clamp_count();

/// delta_COL = P_O * P_SH|O * C_Ca / N_Ca^2 for the (w_i, w_j) pair.
double collision_probability(double wi_ms, double wj_ms, const ScenarioConfig& config);

/// delta_HD = tau_j / 1000. Rejects tau > 1000.
double half_duplex_probability(double packet_rate);

/// P_PRR^i = prod_{j!=i}(1-delta_COL^j) * prod_{j!=i}(1-delta_HD^j).
double prr(int i, const WindowVector& windows, const Scenario& scenario);

/// K_index^i: traversal-averaged log2(1+SNR) * prod_{j!=i}(1-delta_COL^j) / v_i.
double fairness_index(int i, const WindowVector& windows, const Scenario& scenario);

FairnessReport fairness_report(const WindowVector& windows, const Scenario& scenario);

/// Diagnostic only (expected bits over a dwell): C_i * T_i * P_PRR.
double expected_bits(double bit_rate, double dwell_s, double prr_value);

}  // namespace fairline::fairness
