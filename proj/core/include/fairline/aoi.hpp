#pragma once

#include <cstdint>
#include <vector>

#include "fairline/scenario.hpp"

namespace fairline::aoi {

/// Per-link transition rates of the SHS, all in 1/s.
/// preemption[i][j] is the rate at which link i is preempted by link j
/// (nonzero only when j has strictly higher priority); diagonal zero.
struct RateSet {
    std::vector<double> service;                  // H_k
    std::vector<double> failure_return;           // R_k
    std::vector<std::vector<double>> preemption;  // p[i][j]

    int size() const { return static_cast<int>(service.size()); }
    /// Total rate at which link k is preempted while transmitting.
    double preemption_out(int k) const;
    /// H_k - sum_j p[k][j]; a positive margin is required by the textbook
    /// closed forms but not by the exact solver. Reported as a diagnostic.
    double closed_form_margin(int k) const;
    /// Throws std::invalid_argument naming the offending link for
    /// non-ergodic inputs (H <= 0, R <= 0, p < 0, size mismatch).
    void validate() const;
};

struct CorrelationVectors {
    double v00 = 0.0;                // stationary correlation of x0 with state 0
    std::vector<double> v_q0;        // q = 1..N, correlation of x0 with state q
    double v_k1 = 0.0;               // correlation of link k's own age with state k
};

struct SHSSolution {
    std::vector<double> pi;          // stationary probabilities, states 0..N
    double normalizer = 0.0;         // C_R = 1/pi_0
    std::vector<double> v00;         // per target link k
    std::vector<std::vector<double>> v_q0;  // [k][q], q = 1..N
    std::vector<double> v_k1;        // per target link k
    std::vector<double> per_link_aoi;     // Delta_k, s
    double network_aoi = 0.0;        // mean of per_link_aoi, s
    std::vector<double> margins;     // closed-form feasibility margin per link
};

/// H_i = 1 / (t_p + t_fa + w_i + Bit/C_i), everything in seconds.
double service_rate(double bit_rate_bps, double window_ms, const ScenarioConfig& config);

/// R_i = 1 / (T_ini + n*T_r), T_r = t_NACK + t_sch + t_pkt, t_NACK = t_p + t_fa + t_pkt.
double failure_rate(double bit_rate_bps, double window_ms, const ScenarioConfig& config);

/// p[i][j] = 1 / (t_sch^i + t_p^j) if priority_j > priority_i, else 0.
double preemption_rate(int i, int j, const WindowVector& windows, const Scenario& scenario);

/// Assembles the full RateSet for a window vector (bit rates from the
/// deterministic traversal-averaged channel).
RateSet build_rates(const WindowVector& windows, const Scenario& scenario);

/// Exact stationary distribution of the N+1-state chain (idle + N links),
/// solved from the balance equations. Returns (pi, C_R) with C_R = 1/pi_0.
std::pair<std::vector<double>, double> stationary_distribution(const RateSet& rates);

/// Exact stationary correlation vectors for target link k, solved from the
/// SHS balance equations with the transition reset maps (failure-return
/// keeps ages, success on k maps x0 <- x1, preemption of k zeroes x1).
CorrelationVectors correlation_vectors(int k, const RateSet& rates,
                                       const std::vector<double>& pi);

/// Average AoI of link k: Delta_k = sum_q v_q0.
double link_aoi(int k, const RateSet& rates);

/// Mean of link_aoi over all links.
double network_aoi(const RateSet& rates);

/// Everything at once (single stationary solve shared across links).
SHSSolution solve(const RateSet& rates);

/// Event-driven Monte Carlo of the same chain: exponential holding times,
/// piecewise-linear age integration with the reset maps above. First 1% of
/// events discarded as burn-in. Bit-reproducible for a fixed seed.
double simulate_shs(const RateSet& rates, int target_link, long horizon_events,
                    std::uint64_t seed);

}  // namespace fairline::aoi
