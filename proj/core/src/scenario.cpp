#include "fairline/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairline {

namespace {

constexpr double kLaneWidthM = 4.0;
constexpr double kMinAdjacentSpeedGap = 4.0;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

Scenario::Scenario(ScenarioConfig config, std::vector<VehicleParams> vehicles)
    : config_(std::move(config)), vehicles_(std::move(vehicles)) {}

double Scenario::lane_offset_m(int i) const {
    return config_.rsu_offset_m + kLaneWidthM * vehicle(i).lane_index;
}

Scenario validate(const ScenarioConfig& config, std::vector<VehicleParams> vehicles) {
    require(config.num_vehicles >= 1, "num_vehicles must be >= 1");
    require(config.bandwidth_hz > 0, "bandwidth must be positive");
    require(config.noise_power > 0, "noise_power must be positive");
    require(config.path_loss_exponent > 0, "path_loss_exponent must be positive");
    require(config.rsu_coverage_m > 0, "rsu_coverage must be positive");
    require(config.rsu_offset_m >= 0, "rsu_offset must be nonnegative");
    require(config.numerology >= 0, "numerology must be >= 0");
    require(config.rri_ms > 0, "rri must be positive");
    require(config.num_subchannels > 0, "num_subchannels must be positive");
    require(config.num_subchannels <= config.total_resources,
            "num_subchannels must not exceed total_resources");
    require(config.avg_candidates > 0, "avg_candidates must be positive");
    require(config.shared_candidates >= 0 &&
                config.shared_candidates <= config.avg_candidates * config.avg_candidates,
            "shared_candidates must lie in [0, avg_candidates^2]");
    require(config.packet_bits >= 0, "packet_bits must be nonnegative");
    require(config.t_fa_ms >= 0.0625 && config.t_fa_ms <= 1.0,
            "t_fa must lie in [0.0625, 1] ms");
    require(config.t_p_ms >= 0, "t_p must be nonnegative");
    require(config.retransmission_count >= 0, "retransmission_count must be >= 0");
    require(config.window_bounds.lower_ms <= config.window_bounds.upper_ms,
            "window bounds inverted");
    require(config.window_bounds.lower_ms >= 0, "window lower bound must be nonnegative");
    require(config.carrier_wavelength_m > 0, "carrier_wavelength must be positive");
    require(static_cast<int>(vehicles.size()) == config.num_vehicles,
            "vehicle list size must equal num_vehicles");

    for (const auto& v : vehicles) {
        const std::string tag = "vehicle " + std::to_string(v.id) + ": ";
        require(v.speed_mps > 0, tag + "speed must be positive");
        require(v.tx_power > 0, tag + "tx_power must be positive");
        require(v.packet_rate >= 0, tag + "packet_rate must be nonnegative");
        require(std::abs(v.cos_theta) <= 1.0, tag + "|cos_theta| must be <= 1");
        require(v.lane_index >= 0, tag + "lane_index must be nonnegative");
    }
    return Scenario(config, std::move(vehicles));
}

std::vector<VehicleParams> build_highway(const ScenarioConfig& config,
                                         const std::vector<double>& lane_speeds) {
    if (lane_speeds.empty()) throw ValidationError("build_highway: no lane speeds given");
    for (std::size_t i = 0; i + 1 < lane_speeds.size(); ++i) {
        if (std::abs(lane_speeds[i + 1] - lane_speeds[i]) < kMinAdjacentSpeedGap) {
            std::ostringstream os;
            os << "build_highway: adjacent lanes " << i << " and " << i + 1
               << " differ by " << std::abs(lane_speeds[i + 1] - lane_speeds[i])
               << " m/s, need >= " << kMinAdjacentSpeedGap;
            throw ValidationError(os.str());
        }
    }
    std::vector<VehicleParams> vehicles;
    const int n = static_cast<int>(lane_speeds.size());
    for (int i = 0; i < n; ++i) {
        VehicleParams v;
        v.id = i;
        v.speed_mps = lane_speeds[static_cast<std::size_t>(i)];
        v.lane_index = i;
        v.priority = n - i;  // vehicle 0 highest, preemption matrix upper-triangular
        v.packet_rate = 10.0;
        v.tx_power = 1e7;
        v.cos_theta = 1.0;
        vehicles.push_back(v);
    }
    return vehicles;
}

namespace {

using nlohmann::json;

ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig c;
    if (j.contains("num_vehicles")) c.num_vehicles = j.at("num_vehicles").get<int>();
    if (j.contains("bandwidth")) c.bandwidth_hz = j.at("bandwidth").get<double>();
    if (j.contains("path_loss_exponent")) c.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    if (j.contains("noise_db"))
        c.noise_power = std::pow(10.0, j.at("noise_db").get<double>() / 10.0);
    else if (j.contains("noise_power"))
        c.noise_power = j.at("noise_power").get<double>();
    if (j.contains("rsu_coverage")) c.rsu_coverage_m = j.at("rsu_coverage").get<double>();
    if (j.contains("rsu_offset")) c.rsu_offset_m = j.at("rsu_offset").get<double>();
    if (j.contains("numerology")) c.numerology = j.at("numerology").get<int>();
    if (j.contains("rri")) c.rri_ms = j.at("rri").get<double>();
    if (j.contains("num_subchannels")) c.num_subchannels = j.at("num_subchannels").get<int>();
    if (j.contains("total_resources")) c.total_resources = j.at("total_resources").get<int>();
    if (j.contains("avg_candidates")) c.avg_candidates = j.at("avg_candidates").get<int>();
    c.shared_candidates = c.avg_candidates;
    if (j.contains("shared_candidates")) c.shared_candidates = j.at("shared_candidates").get<int>();
    if (j.contains("packet_bits")) c.packet_bits = j.at("packet_bits").get<double>();
    if (j.contains("t_fa")) c.t_fa_ms = j.at("t_fa").get<double>();
    if (j.contains("t_p")) c.t_p_ms = j.at("t_p").get<double>();
    if (j.contains("retransmission_count")) c.retransmission_count = j.at("retransmission_count").get<int>();
    if (j.contains("window_bounds")) {
        const auto& wb = j.at("window_bounds");
        c.window_bounds.lower_ms = wb.at(0).get<double>();
        c.window_bounds.upper_ms = wb.at(1).get<double>();
    }
    if (j.contains("carrier_wavelength")) c.carrier_wavelength_m = j.at("carrier_wavelength").get<double>();
    if (j.contains("rng_seed")) c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return c;
}

VehicleParams vehicle_from_json(const json& j, int index, int total) {
    VehicleParams v;
    v.id = j.value("id", index);
    if (j.contains("speed")) v.speed_mps = j.at("speed").get<double>();
    if (j.contains("tx_power")) v.tx_power = j.at("tx_power").get<double>();
    v.priority = j.value("priority", total - index);
    if (j.contains("packet_rate")) v.packet_rate = j.at("packet_rate").get<double>();
    v.lane_index = j.value("lane_index", index);
    if (j.contains("cos_theta")) v.cos_theta = j.at("cos_theta").get<double>();
    return v;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario parse error: ") + e.what());
    }
    ScenarioConfig config = config_from_json(j);
    std::vector<VehicleParams> vehicles;
    if (j.contains("vehicles")) {
        const auto& arr = j.at("vehicles");
        const int total = static_cast<int>(arr.size());
        for (int i = 0; i < total; ++i)
            vehicles.push_back(vehicle_from_json(arr.at(static_cast<std::size_t>(i)), i, total));
        config.num_vehicles = total;
    } else {
        for (int i = 0; i < config.num_vehicles; ++i) {
            VehicleParams v;
            v.id = i;
            v.lane_index = i;
            v.priority = config.num_vehicles - i;
            v.speed_mps = 20.0 + 4.0 * i;
            vehicles.push_back(v);
        }
    }
    return validate(config, std::move(vehicles));
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& scenario) {
    const auto& c = scenario.config();
    json j;
    j["num_vehicles"] = c.num_vehicles;
    j["bandwidth"] = c.bandwidth_hz;
    j["path_loss_exponent"] = c.path_loss_exponent;
    j["noise_power"] = c.noise_power;
    j["rsu_coverage"] = c.rsu_coverage_m;
    j["rsu_offset"] = c.rsu_offset_m;
    j["numerology"] = c.numerology;
    j["rri"] = c.rri_ms;
    j["num_subchannels"] = c.num_subchannels;
    j["total_resources"] = c.total_resources;
    j["avg_candidates"] = c.avg_candidates;
    j["shared_candidates"] = c.shared_candidates;
    j["packet_bits"] = c.packet_bits;
    j["t_fa"] = c.t_fa_ms;
    j["t_p"] = c.t_p_ms;
    j["retransmission_count"] = c.retransmission_count;
    j["window_bounds"] = {c.window_bounds.lower_ms, c.window_bounds.upper_ms};
    j["carrier_wavelength"] = c.carrier_wavelength_m;
    j["rng_seed"] = c.rng_seed;
    j["vehicles"] = json::array();
    for (const auto& v : scenario.vehicles()) {
        j["vehicles"].push_back({{"id", v.id},
                                 {"speed", v.speed_mps},
                                 {"tx_power", v.tx_power},
                                 {"priority", v.priority},
                                 {"packet_rate", v.packet_rate},
                                 {"lane_index", v.lane_index},
                                 {"cos_theta", v.cos_theta}});
    }
    return j.dump(2);
}

}  // namespace fairline
