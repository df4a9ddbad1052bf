#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairline {

/// Selection-window sizes in milliseconds, one per vehicle.
using WindowVector = std::vector<double>;

struct WindowBounds {
    double lower_ms = 20.0;
    double upper_ms = 150.0;
};

/// Raised by validation with the offending field and bound in what().
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ScenarioConfig {
    int num_vehicles = 3;
    double bandwidth_hz = 20e6;
    double path_loss_exponent = 3.0;
    double noise_power = 7.9433;   // linear; "noise_db" accepted at the config boundary
    double rsu_coverage_m = 200.0;
    double rsu_offset_m = 5.0;     // perpendicular distance of RSU from lane centerline
    int numerology = 0;
    double rri_ms = 100.0;
    int num_subchannels = 10;
    int total_resources = 100;
    int avg_candidates = 10;
    int shared_candidates = 10;    // defaults to avg_candidates (full overlap worst case)
    double packet_bits = 500.0;
    double t_fa_ms = 0.468;
    double t_p_ms = 0.5;           // sender processing time
    int retransmission_count = 1;
    WindowBounds window_bounds;
    double carrier_wavelength_m = 0.0508;  // 5.9 GHz V2X band
    std::uint64_t rng_seed = 1;
};

struct VehicleParams {
    int id = 0;
    double speed_mps = 20.0;
    double tx_power = 1e7;         // linear units consistent with noise_power
    int priority = 0;              // larger = higher
    double packet_rate = 10.0;     // packets/s
    int lane_index = 0;
    double cos_theta = 1.0;
};

/// Immutable after construction; safe to share across concurrent readers.
class Scenario {
public:
    Scenario(ScenarioConfig config, std::vector<VehicleParams> vehicles);

    const ScenarioConfig& config() const { return config_; }
    const std::vector<VehicleParams>& vehicles() const { return vehicles_; }
    const VehicleParams& vehicle(int i) const { return vehicles_.at(static_cast<std::size_t>(i)); }
    int num_vehicles() const { return static_cast<int>(vehicles_.size()); }

    /// Perpendicular distance from the vehicle's lane centerline to the RSU.
    double lane_offset_m(int i) const;

private:
    ScenarioConfig config_;
    std::vector<VehicleParams> vehicles_;
};

/// Checks every type invariant; throws ValidationError naming the offending field.
Scenario validate(const ScenarioConfig& config, std::vector<VehicleParams> vehicles);

/// One vehicle per lane; adjacent-lane speed gap >= 4 m/s enforced.
std::vector<VehicleParams> build_highway(const ScenarioConfig& config,
                                         const std::vector<double>& lane_speeds);

/// JSON scenario file I/O. Keys match the field names; "noise_db" accepted.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace fairline
