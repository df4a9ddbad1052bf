#include "fairline/moead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairline/aoi.hpp"
#include "fairline/channel.hpp"
#include "fairline/fairness.hpp"

namespace fairline::moead {

namespace {

void dd_recurse(int m, int n_p, int remaining, int depth, std::vector<int>& parts,
                std::vector<WeightVector>& out) {
    if (depth == m - 1) {
        parts[static_cast<std::size_t>(depth)] = remaining;
        WeightVector w(static_cast<std::size_t>(m));
        for (int d = 0; d < m; ++d)
            w[static_cast<std::size_t>(d)] =
                static_cast<double>(parts[static_cast<std::size_t>(d)]) / n_p;
        out.push_back(std::move(w));
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        parts[static_cast<std::size_t>(depth)] = k;
        dd_recurse(m, n_p, remaining - k, depth + 1, parts, out);
    }
}

double cosine(const WeightVector& a, const WeightVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0 || nb <= 0) throw std::invalid_argument("build_neighborhoods: zero-norm weight");
    return dot / std::sqrt(na * nb);
}

WindowVector clamp_to_bounds(WindowVector w, const WindowBounds& b) {
    for (double& x : w) x = std::clamp(x, b.lower_ms, b.upper_ms);
    return w;
}

WindowVector sbx_crossover(const WindowVector& p1, const WindowVector& p2,
                           const WindowBounds& bounds, double eta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    WindowVector child = p1;
    for (std::size_t d = 0; d < p1.size(); ++d) {
        if (uni(rng) > 0.5) continue;
        const double u = uni(rng);
        const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                     : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
        child[d] = 0.5 * ((1.0 + beta) * p1[d] + (1.0 - beta) * p2[d]);
    }
    return clamp_to_bounds(std::move(child), bounds);
}

void polynomial_mutation(WindowVector& w, const WindowBounds& bounds, double eta,
                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double rate = 1.0 / static_cast<double>(w.size());
    const double span = bounds.upper_ms - bounds.lower_ms;
    for (double& x : w) {
        if (uni(rng) > rate) continue;
        const double u = uni(rng);
        const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
        x = std::clamp(x + delta * span, bounds.lower_ms, bounds.upper_ms);
    }
}

WindowVector de_variation(const WindowVector& base, const WindowVector& p1,
                          const WindowVector& p2, const WindowBounds& bounds,
                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
    const std::size_t forced = pick(rng);
    WindowVector child = base;
    for (std::size_t d = 0; d < base.size(); ++d)
        if (d == forced || uni(rng) < 0.9) child[d] = base[d] + 0.5 * (p1[d] - p2[d]);
    return clamp_to_bounds(std::move(child), bounds);
}

bool is_feasible(const ObjectiveVector& f) {
    for (double x : f)
        if (!(x < ObjectiveEvaluator::kInfeasible)) return false;
    return true;
}

void archive_insert(ParetoArchive& archive, const WindowVector& w, const ObjectiveVector& f) {
    for (const auto& e : archive.entries)
        if (dominates(e.objectives, f) || e.objectives == f) return;
    std::erase_if(archive.entries,
                  [&](const ArchiveEntry& e) { return dominates(f, e.objectives); });
    archive.entries.push_back({w, f});
}

}  // namespace

OperatorChoice operator_from_name(const std::string& name) {
    if (name == "sbx") return OperatorChoice::Sbx;
    if (name == "de") return OperatorChoice::De;
    if (name == "mock-llm") return OperatorChoice::MockLlm;
    if (name == "llm") return OperatorChoice::Llm;
    throw std::invalid_argument("unknown operator: " + name);
}

std::string operator_name(OperatorChoice op) {
    switch (op) {
        case OperatorChoice::Sbx: return "sbx";
        case OperatorChoice::De: return "de";
        case OperatorChoice::MockLlm: return "mock-llm";
        case OperatorChoice::Llm: return "llm";
    }
    return "?";
}

std::vector<WeightVector> das_dennis_weights(int m, int n_p) {
    if (m < 2 || n_p < 1) throw std::invalid_argument("das_dennis_weights: need M >= 2, n_p >= 1");
    std::vector<WeightVector> out;
    std::vector<int> parts(static_cast<std::size_t>(m), 0);
    dd_recurse(m, n_p, n_p, 0, parts, out);
    return out;
}

std::vector<std::vector<int>> build_neighborhoods(const std::vector<WeightVector>& weights,
                                                  int k) {
    const int h = static_cast<int>(weights.size());
    if (k < 1 || k > h) throw std::invalid_argument("build_neighborhoods: K out of range");
    std::vector<std::vector<int>> out(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) {
        std::vector<std::pair<double, int>> sims;
        sims.reserve(static_cast<std::size_t>(h));
        for (int j = 0; j < h; ++j)
            sims.emplace_back(cosine(weights[static_cast<std::size_t>(i)],
                                     weights[static_cast<std::size_t>(j)]),
                              j);
        std::stable_sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        auto& ni = out[static_cast<std::size_t>(i)];
        for (int t = 0; t < k; ++t) ni.push_back(sims[static_cast<std::size_t>(t)].second);
    }
    return out;
}

double tchebycheff(const ObjectiveVector& f, const WeightVector& w,
                   const std::vector<double>& z_star) {
    if (f.size() != w.size() || f.size() != z_star.size())
        throw std::invalid_argument("tchebycheff: dimension mismatch");
    double g = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        g = std::max(g, w[i] * std::abs(f[i] - z_star[i]));
    return g;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

ObjectiveEvaluator::ObjectiveEvaluator(const Scenario& scenario) : scenario_(scenario) {
    const int n = scenario.num_vehicles();
    log_terms_.resize(static_cast<std::size_t>(n));
    bit_rates_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        log_terms_[static_cast<std::size_t>(i)] = channel::traversal_average_log_term(scenario, i);
        bit_rates_[static_cast<std::size_t>(i)] = channel::traversal_average_rate(scenario, i);
    }
}

std::vector<double> ObjectiveEvaluator::fairness_indices(const WindowVector& windows) const {
    const int n = scenario_.num_vehicles();
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double product = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            product *= 1.0 - fairness::collision_probability(
                                 windows[static_cast<std::size_t>(i)],
                                 windows[static_cast<std::size_t>(j)], scenario_.config());
        }
        k[static_cast<std::size_t>(i)] = log_terms_[static_cast<std::size_t>(i)] * product /
                                         scenario_.vehicle(i).speed_mps;
    }
    return k;
}

ObjectiveVector ObjectiveEvaluator::evaluate(const WindowVector& windows) const {
    const int n = scenario_.num_vehicles();
    const ObjectiveVector sentinel(static_cast<std::size_t>(n) + 1, kInfeasible);
    if (static_cast<int>(windows.size()) != n) return sentinel;
    const auto& b = scenario_.config().window_bounds;
    for (double w : windows)
        if (!(w >= b.lower_ms && w <= b.upper_ms)) return sentinel;
    try {
        const std::vector<double> k = fairness_indices(windows);
        const double mean = std::accumulate(k.begin(), k.end(), 0.0) / n;

        aoi::RateSet rates;
        rates.service.resize(static_cast<std::size_t>(n));
        rates.failure_return.resize(static_cast<std::size_t>(n));
        rates.preemption.assign(static_cast<std::size_t>(n),
                                std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i) {
            rates.service[static_cast<std::size_t>(i)] = aoi::service_rate(
                bit_rates_[static_cast<std::size_t>(i)], windows[static_cast<std::size_t>(i)],
                scenario_.config());
            rates.failure_return[static_cast<std::size_t>(i)] = aoi::failure_rate(
                bit_rates_[static_cast<std::size_t>(i)], windows[static_cast<std::size_t>(i)],
                scenario_.config());
            for (int j = 0; j < n; ++j)
                rates.preemption[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    aoi::preemption_rate(i, j, windows, scenario_);
        }
        const aoi::SHSSolution sol = aoi::solve(rates);

        ObjectiveVector f(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i)
            f[static_cast<std::size_t>(i)] = std::abs(mean - k[static_cast<std::size_t>(i)]);
        f[static_cast<std::size_t>(n)] = sol.network_aoi;
        return f;
    } catch (const std::exception&) {
        return sentinel;
    }
}

ParetoArchive evolve(const Scenario& scenario, const OptimizerConfig& config,
                     llm::Client* client, const GenerationCallback& on_generation) {
    if (config.generations < 0) throw std::invalid_argument("evolve: negative generations");
    if (!(config.neighbor_prob >= 0 && config.neighbor_prob <= 1))
        throw std::invalid_argument("evolve: p_nei out of [0,1]");

    const ObjectiveEvaluator eval(scenario);
    const int m = eval.num_objectives();
    const auto weights = das_dennis_weights(m, config.partitions);
    const int h = static_cast<int>(weights.size());
    const int k = std::clamp(config.neighborhood_size, 1, h);
    const auto neighborhoods = build_neighborhoods(weights, k);
    const WindowBounds& bounds = scenario.config().window_bounds;

    std::mt19937_64 rng(config.rng_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> win(bounds.lower_ms, bounds.upper_ms);

    llm::MockClient mock(config.rng_seed ^ 0x6d6f636bULL);
    llm::Client* llm_client = client;
    if (config.operator_choice == OperatorChoice::MockLlm && !llm_client) llm_client = &mock;
    if (config.operator_choice == OperatorChoice::Llm && !llm_client)
        throw std::invalid_argument("evolve: llm operator requires a configured client");

    const int n_vars = scenario.num_vehicles();
    std::vector<WindowVector> pop(static_cast<std::size_t>(h));
    std::vector<ObjectiveVector> obj(static_cast<std::size_t>(h));
    ParetoArchive archive;
    archive.ideal.assign(static_cast<std::size_t>(m), ObjectiveEvaluator::kInfeasible);

    for (int i = 0; i < h; ++i) {
        WindowVector w(static_cast<std::size_t>(n_vars));
        for (double& x : w) x = win(rng);
        auto f = eval.evaluate(w);
        for (int d = 0; d < m; ++d)
            archive.ideal[static_cast<std::size_t>(d)] = std::min(
                archive.ideal[static_cast<std::size_t>(d)], f[static_cast<std::size_t>(d)]);
        if (is_feasible(f)) archive_insert(archive, w, f);
        pop[static_cast<std::size_t>(i)] = std::move(w);
        obj[static_cast<std::size_t>(i)] = std::move(f);
    }
    if (on_generation) on_generation(0, archive);

    const auto sbx_fallback = [&](const WindowVector& a, const WindowVector& b,
                                  std::mt19937_64& r) {
        return sbx_crossover(a, b, bounds, config.sbx_eta, r);
    };

    for (int gen = 1; gen <= config.generations; ++gen) {
        for (int i = 0; i < h; ++i) {
            const auto& ni = neighborhoods[static_cast<std::size_t>(i)];
            const bool use_nbhd = uni(rng) < config.neighbor_prob;
            auto pick = [&](std::mt19937_64& r) {
                if (use_nbhd) {
                    std::uniform_int_distribution<std::size_t> d(0, ni.size() - 1);
                    return ni[d(r)];
                }
                std::uniform_int_distribution<int> d(0, h - 1);
                return d(r);
            };
            int a = pick(rng);
            int b = pick(rng);
            for (int tries = 0; b == a && tries < 16; ++tries) b = pick(rng);

            WindowVector child;
            switch (config.operator_choice) {
                case OperatorChoice::Sbx:
                    child = sbx_crossover(pop[static_cast<std::size_t>(a)],
                                          pop[static_cast<std::size_t>(b)], bounds,
                                          config.sbx_eta, rng);
                    polynomial_mutation(child, bounds, config.mutation_eta, rng);
                    break;
                case OperatorChoice::De:
                    child = de_variation(pop[static_cast<std::size_t>(i)],
                                         pop[static_cast<std::size_t>(a)],
                                         pop[static_cast<std::size_t>(b)], bounds, rng);
                    polynomial_mutation(child, bounds, config.mutation_eta, rng);
                    break;
                case OperatorChoice::MockLlm:
                case OperatorChoice::Llm: {
                    const std::vector<WindowVector> parents = {
                        pop[static_cast<std::size_t>(a)], pop[static_cast<std::size_t>(b)]};
                    const std::vector<double> values = {
                        tchebycheff(obj[static_cast<std::size_t>(a)],
                                    weights[static_cast<std::size_t>(i)], archive.ideal),
                        tchebycheff(obj[static_cast<std::size_t>(b)],
                                    weights[static_cast<std::size_t>(i)], archive.ideal)};
                    child = llm::llm_mate(parents, values, *llm_client, bounds, m,
                                          sbx_fallback, rng);
                    break;
                }
            }

            const ObjectiveVector f = eval.evaluate(child);
            for (int d = 0; d < m; ++d)
                archive.ideal[static_cast<std::size_t>(d)] = std::min(
                    archive.ideal[static_cast<std::size_t>(d)], f[static_cast<std::size_t>(d)]);
            if (is_feasible(f)) archive_insert(archive, child, f);

            for (int j : ni) {
                const auto& wj = weights[static_cast<std::size_t>(j)];
                if (tchebycheff(f, wj, archive.ideal) <
                    tchebycheff(obj[static_cast<std::size_t>(j)], wj, archive.ideal)) {
                    pop[static_cast<std::size_t>(j)] = child;
                    obj[static_cast<std::size_t>(j)] = f;
                }
            }
        }
        if (on_generation) on_generation(gen, archive);
    }
    return archive;
}

double k_bound(std::vector<double> deviations) {
    if (deviations.empty()) throw std::invalid_argument("k_bound: empty archive");
    std::sort(deviations.begin(), deviations.end());
    const std::size_t n = deviations.size();
    const std::size_t j = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(n)));
    return deviations[j - 1];
}

WindowVector select_solution(const ParetoArchive& archive) {
    if (archive.entries.empty()) throw std::invalid_argument("select_solution: empty archive");
    const std::size_t m = archive.entries.front().objectives.size();
    std::vector<double> max_dev;
    max_dev.reserve(archive.entries.size());
    for (const auto& e : archive.entries) {
        double d = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) d = std::max(d, e.objectives[i]);
        max_dev.push_back(d);
    }
    const double bound = k_bound(max_dev);

    std::size_t best = archive.entries.size();
    for (std::size_t i = 0; i < archive.entries.size(); ++i) {
        if (max_dev[i] > bound) continue;
        if (best == archive.entries.size() ||
            archive.entries[i].objectives[m - 1] < archive.entries[best].objectives[m - 1])
            best = i;
    }
    if (best == archive.entries.size()) {
        best = 0;
        for (std::size_t i = 1; i < archive.entries.size(); ++i)
            if (max_dev[i] < max_dev[best]) best = i;
    }
    return archive.entries[best].windows;
}

}  // namespace fairline::moead
