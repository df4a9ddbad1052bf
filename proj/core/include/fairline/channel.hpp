#pragma once

#include <complex>
#include <random>

#include "fairline/scenario.hpp"

namespace fairline::channel {

struct ChannelState {
    std::complex<double> gain{1.0, 0.0};
    double autocorrelation = 1.0;  // |rho| <= 1
    double doppler_hz = 0.0;
};

double distance(double vx, double vy, double rx, double ry);

/// f_d = (v / lambda0) * cos(theta)
double doppler(double speed_mps, double wavelength_m, double cos_theta);

/// Jakes spectrum: rho = J0(2*pi*f_d*t).
double autocorrelation(double doppler_hz, double t_s);

/// Zeroth-order Bessel function of the first kind, |err| <= 1e-10 on [0, 20].
double bessel_j0(double x);

/// AR(1) step: h' = rho*h + e*sqrt(1-rho^2), e ~ CN(0,1). Stationary E|h|^2 = 1.
ChannelState evolve_gain(const ChannelState& state, std::mt19937_64& rng);

/// Shannon rate in bit/s; gain is |h|^2 (1 in deterministic mode). d = 0 rejected.
double shannon_rate(double tx_power, double gain_sq, double distance_m,
                    double path_loss_exponent, double noise_power, double bandwidth_hz);

/// Deterministic objective mode: unit gain, d sampled at 1 m steps across the
/// coverage chord, Shannon rate averaged over the traversal.
double traversal_average_rate(const Scenario& scenario, int vehicle_index);

/// Same traversal average, but of the log2(1+SNR) term alone (no bandwidth factor).
double traversal_average_log_term(const Scenario& scenario, int vehicle_index);

}  // namespace fairline::channel
