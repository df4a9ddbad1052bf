#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairline/aoi.hpp"
#include "fairline/fairness.hpp"
#include "fairline/llm_operator.hpp"
#include "fairline/metrics.hpp"
#include "fairline/moead.hpp"
#include "fairline/scenario.hpp"
#include "fairline/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw std::runtime_error("cannot open output file " + name + " in " + dir);
    return f;
}

void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
    } else {
        auto f = open_out(out_dir, name);
        f << text;
        std::cout << "wrote " << (std::filesystem::path(out_dir) / name).string() << "\n";
    }
}

fairline::WindowVector resolve_windows(const std::string& windows_csv,
                                       const fairline::Scenario& scenario,
                                       double fallback_ms) {
    if (windows_csv.empty())
        return fairline::WindowVector(static_cast<std::size_t>(scenario.num_vehicles()),
                                      fallback_ms);
    auto w = parse_list(windows_csv);
    if (static_cast<int>(w.size()) != scenario.num_vehicles())
        throw std::invalid_argument("--windows needs one value per vehicle");
    return w;
}

int cmd_aoi(const fairline::Scenario& scenario, const std::string& windows_csv,
            double baseline_ms, const std::string& out_dir) {
    const auto windows = resolve_windows(windows_csv, scenario, baseline_ms);
    const auto rates = fairline::aoi::build_rates(windows, scenario);
    const auto sol = fairline::aoi::solve(rates);

    std::printf("%-5s %12s %12s %12s %12s %12s\n", "link", "H", "R", "sum_p", "pi", "delta");
    for (int k = 0; k < rates.size(); ++k)
        std::printf("%-5d %12.6g %12.6g %12.6g %12.6g %12.6g\n", k,
                    rates.service[static_cast<std::size_t>(k)],
                    rates.failure_return[static_cast<std::size_t>(k)], rates.preemption_out(k),
                    sol.pi[static_cast<std::size_t>(k + 1)],
                    sol.per_link_aoi[static_cast<std::size_t>(k)]);
    std::printf("network AoI: %.6g s (idle probability %.6g)\n", sol.network_aoi, sol.pi[0]);

    std::ostringstream csv;
    csv << "link,H,R,sum_p,pi,delta\n";
    for (int k = 0; k < rates.size(); ++k)
        csv << k << ',' << fmt(rates.service[static_cast<std::size_t>(k)]) << ','
            << fmt(rates.failure_return[static_cast<std::size_t>(k)]) << ','
            << fmt(rates.preemption_out(k)) << ',' << fmt(sol.pi[static_cast<std::size_t>(k + 1)])
            << ',' << fmt(sol.per_link_aoi[static_cast<std::size_t>(k)]) << '\n';
    if (!out_dir.empty()) emit(out_dir, "aoi.csv", csv.str());
    return kExitOk;
}

int cmd_fairness(const fairline::Scenario& scenario, const std::string& windows_csv,
                 double baseline_ms, const std::string& out_dir) {
    const auto windows = resolve_windows(windows_csv, scenario, baseline_ms);
    const auto report = fairline::fairness::fairness_report(windows, scenario);
    std::ostringstream csv;
    csv << "vehicle,kindex,deviation,prr\n";
    for (int i = 0; i < scenario.num_vehicles(); ++i)
        csv << i << ',' << fmt(report.per_vehicle_index[static_cast<std::size_t>(i)]) << ','
            << fmt(report.per_vehicle_deviation[static_cast<std::size_t>(i)]) << ','
            << fmt(report.per_vehicle_prr[static_cast<std::size_t>(i)]) << '\n';
    emit(out_dir, "fairness.csv", csv.str());
    std::printf("network fairness index: %.10g\n", report.network_index);
    return kExitOk;
}

int cmd_optimize(const fairline::Scenario& scenario, const std::string& op, std::uint64_t seed,
                 int generations, int partitions, const std::string& out_dir) {
    fairline::moead::OptimizerConfig cfg;
    cfg.operator_choice = fairline::moead::operator_from_name(op);
    cfg.rng_seed = seed;
    cfg.generations = generations;
    cfg.partitions = partitions;
    std::unique_ptr<fairline::llm::Client> client;
    if (cfg.operator_choice == fairline::moead::OperatorChoice::Llm) {
        client = fairline::llm::make_client_from_env();
        if (!client) throw std::invalid_argument("--operator llm requires LLM_ENDPOINT");
    }
    const auto archive = fairline::moead::evolve(scenario, cfg, client.get());
    const auto selected = fairline::moead::select_solution(archive);

    const int n = scenario.num_vehicles();
    std::ostringstream csv;
    for (int i = 1; i <= n; ++i) csv << 'w' << i << ',';
    for (int i = 1; i <= n; ++i) csv << "fk" << i << ',';
    csv << "fage\n";
    for (const auto& e : archive.entries) {
        for (double w : e.windows) csv << fmt(w) << ',';
        for (std::size_t i = 0; i < e.objectives.size(); ++i)
            csv << fmt(e.objectives[i]) << (i + 1 < e.objectives.size() ? "," : "\n");
    }
    emit(out_dir, "archive.csv", csv.str());
    std::printf("archive size: %zu\nselected w*:", archive.entries.size());
    for (double w : selected) std::printf(" %.10g", w);
    std::printf("\n");
    return kExitOk;
}

fairline::sweep::SweepSpec make_spec(const std::vector<double>& values, int trials,
                                     const std::vector<std::string>& operators,
                                     double baseline_ms, int generations, int partitions,
                                     std::uint64_t seed) {
    fairline::sweep::SweepSpec spec;
    spec.values = values;
    spec.repetitions = trials;
    if (!operators.empty()) spec.operators = operators;
    spec.baseline_window_ms = baseline_ms;
    spec.generations = generations;
    spec.partitions = partitions;
    spec.master_seed = seed;
    return spec;
}

int cmd_sweep_velocity(const fairline::Scenario& scenario,
                       const fairline::sweep::SweepSpec& spec, const std::string& out_dir) {
    std::unique_ptr<fairline::llm::Client> client = fairline::llm::make_client_from_env();
    const auto rows = fairline::sweep::sweep_velocity(spec, scenario, client.get());
    const int n = scenario.num_vehicles();
    std::ostringstream csv;
    csv << "avg_v,operator,trial,";
    for (int i = 1; i <= n; ++i) csv << 'w' << i << ',';
    for (int i = 1; i <= n; ++i) csv << "fk" << i << ',';
    csv << "fage,";
    for (int i = 1; i <= n; ++i) csv << "kindex" << i << ',';
    csv << "kindex_avg\n";
    bool any_failure = false;
    const double nan = std::nan("");
    for (const auto& row : rows) {
        if (!row.ok) {
            any_failure = true;
            std::cerr << "run failed (v=" << row.avg_v << ", " << row.op << ", trial "
                      << row.trial << "): " << row.error << "\n";
        }
        csv << fmt(row.avg_v) << ',' << row.op << ',' << row.trial << ',';
        for (int i = 0; i < n; ++i)
            csv << fmt(row.ok ? row.windows[static_cast<std::size_t>(i)] : nan) << ',';
        for (int i = 0; i < n; ++i)
            csv << fmt(row.ok ? row.fk[static_cast<std::size_t>(i)] : nan) << ',';
        csv << fmt(row.ok ? row.fage : nan) << ',';
        for (int i = 0; i < n; ++i)
            csv << fmt(row.ok ? row.kindex[static_cast<std::size_t>(i)] : nan) << ',';
        csv << fmt(row.ok ? row.kindex_avg : nan) << '\n';
    }
    emit(out_dir, "sweep_velocity.csv", csv.str());
    return any_failure ? kExitPartial : kExitOk;
}

int cmd_sweep_vehicles(const fairline::Scenario& scenario,
                       const fairline::sweep::SweepSpec& spec, const std::string& out_dir) {
    std::unique_ptr<fairline::llm::Client> client = fairline::llm::make_client_from_env();
    const auto rows = fairline::sweep::sweep_vehicles(spec, scenario, client.get());
    std::ostringstream csv;
    csv << "n,operator,trial,network_kindex,max_fk,fage\n";
    bool any_failure = false;
    const double nan = std::nan("");
    for (const auto& row : rows) {
        if (!row.ok) {
            any_failure = true;
            std::cerr << "run failed (n=" << row.num_vehicles << ", " << row.op << ", trial "
                      << row.trial << "): " << row.error << "\n";
        }
        csv << row.num_vehicles << ',' << row.op << ',' << row.trial << ','
            << fmt(row.ok ? row.network_kindex : nan) << ',' << fmt(row.ok ? row.max_fk : nan)
            << ',' << fmt(row.ok ? row.fage : nan) << '\n';
    }
    emit(out_dir, "sweep_vehicles.csv", csv.str());
    return any_failure ? kExitPartial : kExitOk;
}

int cmd_compare(const fairline::Scenario& scenario, const fairline::sweep::SweepSpec& spec,
                const std::string& out_dir) {
    std::unique_ptr<fairline::llm::Client> client = fairline::llm::make_client_from_env();
    std::vector<std::string> skipped;
    const auto rows = fairline::sweep::compare_operators(spec, scenario, client.get(), &skipped);
    for (const auto& msg : skipped) std::cerr << msg << "\n";
    std::ostringstream csv;
    csv << "operator,trial,generation,hv,elapsed_s\n";
    for (const auto& row : rows)
        csv << row.op << ',' << row.trial << ',' << row.generation << ',' << fmt(row.hv) << ','
            << fmt(row.elapsed_s) << '\n';
    emit(out_dir, "compare_operators.csv", csv.str());
    return kExitOk;
}

int cmd_hv(const std::string& archive_path, const std::string& ref_spec) {
    std::ifstream f(archive_path);
    if (!f) throw std::invalid_argument("cannot open archive " + archive_path);
    std::string line;
    if (!std::getline(f, line)) throw std::invalid_argument("empty archive file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) header.push_back(tok);
    }
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i].rfind("fk", 0) == 0 || header[i] == "fage") cols.push_back(i);
    if (cols.empty()) throw std::invalid_argument("archive has no objective columns");
    std::vector<std::vector<double>> points;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        std::vector<double> p;
        for (std::size_t c : cols) p.push_back(std::stod(fields.at(c)));
        points.push_back(std::move(p));
    }
    if (points.empty()) throw std::invalid_argument("archive has no rows");
    std::vector<double> ref = ref_spec == "auto" ? fairline::metrics::reference_point(points)
                                                 : parse_list(ref_spec);
    if (ref.size() != cols.size())
        throw std::invalid_argument("--ref dimension does not match the archive objectives");
    int dropped = 0;
    const double hv = fairline::metrics::hypervolume(points, ref, &dropped);
    if (dropped) std::cerr << dropped << " point(s) above the reference were dropped\n";
    std::printf("%.12g\n", hv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness + AoI window optimization toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, windows_csv, out_dir, op = "mock-llm", ref_spec = "auto";
    std::string archive_path, values_csv;
    std::vector<std::string> operators;
    std::uint64_t seed = 1;
    int generations = 100, trials = 30, partitions = 7;
    double baseline_window = 100.0;
    double vmin = 20.0, vmax = 30.0, vstep = 2.0;

    auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory for CSV artifacts");
    };

    auto* aoi_cmd = app.add_subcommand("aoi", "solve the age model for a window vector");
    add_scenario(aoi_cmd);
    aoi_cmd->add_option("--windows", windows_csv, "comma-separated windows (ms)");
    aoi_cmd->add_option("--baseline-window", baseline_window, "window when --windows omitted");

    auto* fair_cmd = app.add_subcommand("fairness", "fairness report for a window vector");
    add_scenario(fair_cmd);
    fair_cmd->add_option("--windows", windows_csv, "comma-separated windows (ms)");
    fair_cmd->add_option("--baseline-window", baseline_window, "window when --windows omitted");

    auto* opt_cmd = app.add_subcommand("optimize", "run the window optimizer");
    add_scenario(opt_cmd);
    opt_cmd->add_option("--operator", op, "sbx|de|llm|mock-llm");
    opt_cmd->add_option("--seed", seed, "rng seed");
    opt_cmd->add_option("--generations", generations, "generation count");
    opt_cmd->add_option("--partitions", partitions, "Das-Dennis partitions n_p");

    auto add_sweep_common = [&](CLI::App* sub) {
        add_scenario(sub);
        sub->add_option("--operator", operators, "operator(s) to run")->take_all();
        sub->add_option("--trials", trials, "repetitions per point");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--generations", generations, "generations per run");
        sub->add_option("--baseline-window", baseline_window, "fixed baseline window (ms)");
        sub->add_option("--partitions", partitions, "Das-Dennis partitions n_p");
    };

    auto* sv_cmd = app.add_subcommand("sweep-velocity", "sweep over average velocity");
    add_sweep_common(sv_cmd);
    sv_cmd->add_option("--min", vmin, "minimum average velocity (m/s)");
    sv_cmd->add_option("--max", vmax, "maximum average velocity (m/s)");
    sv_cmd->add_option("--step", vstep, "velocity step (m/s)");
    sv_cmd->add_option("--values", values_csv, "explicit velocity list (overrides min/max)");

    auto* sn_cmd = app.add_subcommand("sweep-vehicles", "sweep over vehicle count");
    add_sweep_common(sn_cmd);
    sn_cmd->add_option("--values", values_csv, "vehicle counts, e.g. 2,3,4,5,6");

    auto* cmp_cmd = app.add_subcommand("compare-operators", "per-generation HV per operator");
    add_sweep_common(cmp_cmd);

    auto* hv_cmd = app.add_subcommand("hv", "hypervolume of an archive CSV");
    hv_cmd->add_option("--archive", archive_path, "archive CSV")->required();
    hv_cmd->add_option("--ref", ref_spec, "auto or comma-separated reference point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (hv_cmd->parsed()) return cmd_hv(archive_path, ref_spec);
        const fairline::Scenario scenario = fairline::load_scenario(scenario_path);
        if (aoi_cmd->parsed())
            return cmd_aoi(scenario, windows_csv, baseline_window, out_dir);
        if (fair_cmd->parsed())
            return cmd_fairness(scenario, windows_csv, baseline_window, out_dir);
        if (opt_cmd->parsed())
            return cmd_optimize(scenario, op, seed, generations, partitions, out_dir);

        std::vector<double> values;
        if (!values_csv.empty()) {
            values = parse_list(values_csv);
        } else if (sv_cmd->parsed()) {
            for (double v = vmin; v <= vmax + 1e-9; v += vstep) values.push_back(v);
        } else if (sn_cmd->parsed()) {
            values = {2, 3, 4, 5, 6};
        }
        const auto spec =
            make_spec(values, trials, operators, baseline_window, generations, partitions, seed);
        if (sv_cmd->parsed()) return cmd_sweep_velocity(scenario, spec, out_dir);
        if (sn_cmd->parsed()) return cmd_sweep_vehicles(scenario, spec, out_dir);
        if (cmp_cmd->parsed()) return cmd_compare(scenario, spec, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
