#include "fairline/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fairline::channel {

double distance(double vx, double vy, double rx, double ry) {
    return std::hypot(vx - rx, vy - ry);
}

double doppler(double speed_mps, double wavelength_m, double cos_theta) {
    if (speed_mps < 0) throw std::invalid_argument("doppler: speed must be >= 0");
    if (wavelength_m <= 0) throw std::invalid_argument("doppler: wavelength must be > 0");
    return speed_mps / wavelength_m * cos_theta;
}

namespace {

// Power series: J0(x) = sum_k (-1)^k (x/2)^(2k) / (k!)^2, summed in long double.
double j0_series(double x) {
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-25L) break;
    }
    return static_cast<double>(sum);
}

// Hankel asymptotic expansion, accurate to ~1e-13 for x >= 16.
double j0_asymptotic(double x) {
    const long double z = x;
    // a_k = a_{k-1} * (-(2k-1)^2) / (8k); P = sum (-1)^k a_{2k}/x^{2k}, Q likewise odd.
    long double a = 1.0L;
    long double P = 0.0L, Q = 0.0L;
    for (int m = 0; m <= 9; ++m) {
        const long double t = a / std::pow(z, static_cast<long double>(m));
        const int k = m / 2;
        const long double signed_t = ((k % 2 == 0) ? 1.0L : -1.0L) * t;
        if (m % 2 == 0)
            P += signed_t;
        else
            Q += signed_t;
        const long double c = 2.0L * (m + 1) - 1.0L;
        a *= -(c * c) / (8.0L * (m + 1));
    }
    const long double chi = z - std::numbers::pi_v<long double> / 4.0L;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * z));
    return static_cast<double>(amp * (P * std::cos(chi) - Q * std::sin(chi)));
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    return x <= 16.0 ? j0_series(x) : j0_asymptotic(x);
}

double autocorrelation(double doppler_hz, double t_s) {
    if (t_s < 0) throw std::invalid_argument("autocorrelation: t must be >= 0");
    return bessel_j0(2.0 * std::numbers::pi * doppler_hz * t_s);
}

ChannelState evolve_gain(const ChannelState& state, std::mt19937_64& rng) {
    const double rho = state.autocorrelation;
    if (std::abs(rho) > 1.0) throw std::invalid_argument("evolve_gain: |rho| must be <= 1");
    std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);  // CN(0,1) components
    const std::complex<double> e{gauss(rng), gauss(rng)};
    ChannelState next = state;
    next.gain = rho * state.gain + e * std::sqrt(1.0 - rho * rho);
    return next;
}

double shannon_rate(double tx_power, double gain_sq, double distance_m,
                    double path_loss_exponent, double noise_power, double bandwidth_hz) {
    if (distance_m <= 0) throw std::invalid_argument("shannon_rate: d = 0 gives singular path loss");
    if (bandwidth_hz <= 0) throw std::invalid_argument("shannon_rate: bandwidth must be > 0");
    if (noise_power <= 0) throw std::invalid_argument("shannon_rate: noise power must be > 0");
    const double snr = tx_power * gain_sq * std::pow(distance_m, -path_loss_exponent) / noise_power;
    return bandwidth_hz * std::log2(1.0 + snr);
}

namespace {

double traversal_average(const Scenario& scenario, int vehicle_index, bool with_bandwidth) {
    const auto& c = scenario.config();
    const auto& v = scenario.vehicle(vehicle_index);
    const double y = scenario.lane_offset_m(vehicle_index);
    const double mid = c.rsu_coverage_m / 2.0;
    double sum = 0.0;
    int n = 0;
    for (double x = 0.0; x <= c.rsu_coverage_m + 1e-9; x += 1.0) {
        const double d = std::hypot(x - mid, y);
        const double snr = v.tx_power * std::pow(d, -c.path_loss_exponent) / c.noise_power;
        sum += std::log2(1.0 + snr);
        ++n;
    }
    const double avg = sum / n;
    return with_bandwidth ? c.bandwidth_hz * avg : avg;
}

}  // namespace

double traversal_average_rate(const Scenario& scenario, int vehicle_index) {
    return traversal_average(scenario, vehicle_index, true);
}

double traversal_average_log_term(const Scenario& scenario, int vehicle_index) {
    return traversal_average(scenario, vehicle_index, false);
}

}  // namespace fairline::channel
