#include "fairline/fairness.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fairline/channel.hpp"

namespace fairline::fairness {

namespace {
std::atomic<long> g_clamp_count{0};
}

double dwell_time(double coverage_m, double speed_mps) {
    if (speed_mps <= 0) throw std::invalid_argument("dwell_time: speed must be > 0");
    return coverage_m / speed_mps;
}

double overlap_probability(double wi_ms, double wj_ms, int numerology, double rri_ms) {
    const double p = (wi_ms + wj_ms + 1.0) / (1000.0 * std::pow(2.0, numerology) * rri_ms);
    if (p > 1.0)
        throw std::invalid_argument("overlap_probability: windows exceed the RRI frame");
    return p;
}

double shared_resources(double wi_ms, double wj_ms) {
    return (wi_ms + 1.0) * (wj_ms + 1.0) / (wi_ms + wj_ms + 1.0);
}

double shared_selection_prob(int num_subchannels, double shared, int total_resources) {
    if (total_resources <= 0)
        throw std::invalid_argument("shared_selection_prob: total_resources must be > 0");
    const double ratio = num_subchannels * shared / total_resources;
    const double p = ratio * ratio;
    if (p > 1.0) {
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
    }
    return p;
}

long shared_selection_clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }

double collision_probability(double wi_ms, double wj_ms, const ScenarioConfig& config) {
    const double po = overlap_probability(wi_ms, wj_ms, config.numerology, config.rri_ms);
    const double psh = shared_selection_prob(config.num_subchannels,
                                             shared_resources(wi_ms, wj_ms),
                                             config.total_resources);
    const double nca = static_cast<double>(config.avg_candidates);
    return po * psh * config.shared_candidates / (nca * nca);
}

double half_duplex_probability(double packet_rate) {
    if (packet_rate < 0) throw std::invalid_argument("half_duplex_probability: rate must be >= 0");
    if (packet_rate > 1000.0)
        throw std::invalid_argument("half_duplex_probability: rate > 1000 gives probability > 1");
    return packet_rate / 1000.0;
}

namespace {

double collision_product(int i, const WindowVector& windows, const Scenario& scenario) {
    double prod = 1.0;
    for (int j = 0; j < scenario.num_vehicles(); ++j) {
        if (j == i) continue;
        prod *= 1.0 - collision_probability(windows[static_cast<std::size_t>(i)],
                                            windows[static_cast<std::size_t>(j)],
                                            scenario.config());
    }
    return prod;
}

}  // namespace

double prr(int i, const WindowVector& windows, const Scenario& scenario) {
    double p = collision_product(i, windows, scenario);
    for (int j = 0; j < scenario.num_vehicles(); ++j) {
        if (j == i) continue;
        p *= 1.0 - half_duplex_probability(scenario.vehicle(j).packet_rate);
    }
    return p;
}

double fairness_index(int i, const WindowVector& windows, const Scenario& scenario) {
    const double log_term = channel::traversal_average_log_term(scenario, i);
    return log_term * collision_product(i, windows, scenario) / scenario.vehicle(i).speed_mps;
}

FairnessReport fairness_report(const WindowVector& windows, const Scenario& scenario) {
    const int n = scenario.num_vehicles();
    if (static_cast<int>(windows.size()) != n)
        throw std::invalid_argument("fairness_report: window vector size mismatch");
    FairnessReport r;
    r.per_vehicle_index.resize(static_cast<std::size_t>(n));
    r.per_vehicle_prr.resize(static_cast<std::size_t>(n));
    r.pair_collision.assign(static_cast<std::size_t>(n),
                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        r.per_vehicle_index[static_cast<std::size_t>(i)] = fairness_index(i, windows, scenario);
        r.per_vehicle_prr[static_cast<std::size_t>(i)] = prr(i, windows, scenario);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            r.pair_collision[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                collision_probability(windows[static_cast<std::size_t>(i)],
                                      windows[static_cast<std::size_t>(j)], scenario.config());
        }
    }
    double sum = 0.0;
    for (double k : r.per_vehicle_index) sum += k;
    r.network_index = sum / n;
    r.per_vehicle_deviation.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        r.per_vehicle_deviation[static_cast<std::size_t>(i)] =
            std::abs(r.network_index - r.per_vehicle_index[static_cast<std::size_t>(i)]);
    return r;
}

double expected_bits(double bit_rate, double dwell_s, double prr_value) {
    return bit_rate * dwell_s * prr_value;
}

}  // namespace fairline::fairness
