#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fairline/llm_operator.hpp"
#include "fairline/scenario.hpp"

namespace fairline::moead {

using WeightVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;  // F_K1..F_KN then F_age

struct ArchiveEntry {
    WindowVector windows;
    ObjectiveVector objectives;
};

struct ParetoArchive {
    std::vector<ArchiveEntry> entries;  // mutually nondominated
    std::vector<double> ideal;          // z*, componentwise min of everything evaluated
};

enum class OperatorChoice { Sbx, De, MockLlm, Llm };

OperatorChoice operator_from_name(const std::string& name);  // sbx|de|mock-llm|llm
std::string operator_name(OperatorChoice op);

struct OptimizerConfig {
    int generations = 100;
    int partitions = 7;          // n_p in the Das-Dennis lattice
    int neighborhood_size = 20;  // K
    double neighbor_prob = 0.8;  // p_nei
    OperatorChoice operator_choice = OperatorChoice::Sbx;
    std::uint64_t rng_seed = 1;
    double sbx_eta = 20.0;
    double mutation_eta = 20.0;
};

/// All Das-Dennis lattice points (k1/n_p,...,kM/n_p), sum = 1, in
/// lexicographic order; count = C(n_p + M - 1, M - 1).
std::vector<WeightVector> das_dennis_weights(int m, int n_p);

/// For each i, the K indices with largest cosine similarity to w_i
/// (ties by lower index; i itself always qualifies).
std::vector<std::vector<int>> build_neighborhoods(const std::vector<WeightVector>& weights,
                                                  int k);

/// g(f | w, z*) = max_i w_i * |f_i - z*_i|
double tchebycheff(const ObjectiveVector& f, const WeightVector& w,
                   const std::vector<double>& z_star);

/// true iff a dominates b (componentwise <=, strict somewhere; minimization).
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Caches the per-vehicle traversal channel averages so repeated window
/// evaluations only redo the collision products and the SHS solve.
class ObjectiveEvaluator {
   public:
    static constexpr double kInfeasible = 1e30;

    explicit ObjectiveEvaluator(const Scenario& scenario);

    /// (F_K1..F_KN, F_age); out-of-bounds windows or a non-ergodic RateSet
    /// yield the kInfeasible sentinel in every component.
    ObjectiveVector evaluate(const WindowVector& windows) const;

    /// Per-vehicle K_index for a window vector (no sentinel handling).
    std::vector<double> fairness_indices(const WindowVector& windows) const;

    int num_objectives() const { return scenario_.num_vehicles() + 1; }
    const Scenario& scenario() const { return scenario_; }

   private:
    const Scenario& scenario_;
    std::vector<double> log_terms_;  // traversal-averaged log2(1+SNR)
    std::vector<double> bit_rates_;  // traversal-averaged Shannon rate, bit/s
};

using GenerationCallback =
    std::function<void(int generation, const ParetoArchive& archive)>;

/// Algorithm 1: decomposition loop with neighborhood mating/replacement and
/// a cumulative nondominated archive. Deterministic for a fixed seed with
/// deterministic operators. `client` is only consulted for the llm operator
/// choices (MockLlm builds its own seeded mock when client is null).
ParetoArchive evolve(const Scenario& scenario, const OptimizerConfig& config,
                     llm::Client* client = nullptr,
                     const GenerationCallback& on_generation = {});

/// Sort ascending, return the value at 1-based position ceil(0.9 n):
/// the smallest of the largest 10%.
double k_bound(std::vector<double> deviations);

/// Among entries whose every fairness deviation is <= k_bound of the
/// archive's max-deviations, the one with minimal F_age; if none qualify,
/// the one minimizing the max deviation. Ties go to the lower index.
WindowVector select_solution(const ParetoArchive& archive);

}  // namespace fairline::moead
