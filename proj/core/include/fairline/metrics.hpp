#pragma once

#include <optional>
#include <vector>

namespace fairline::metrics {

struct HvReport {
    std::vector<double> per_generation_hv;
    std::vector<double> reference_point;
    std::optional<int> converged_at;
};

/// Lebesgue measure of the union of boxes [point, ref] (minimization).
/// Points with any component above ref are dropped; `dropped`, when given,
/// receives the count. Exact recursive dimension sweep, intended for
/// M <= 5 and <= 500 points.
double hypervolume(const std::vector<std::vector<double>>& points,
                   const std::vector<double>& ref, int* dropped = nullptr);

/// First generation g with max-min of hv over the full window [g, g+window)
/// below epsilon; nullopt if never (or the series is shorter than window).
std::optional<int> track_convergence(const std::vector<double>& hv_series, int window,
                                     double epsilon);

/// Componentwise max over the point union, scaled by `scale`.
std::vector<double> reference_point(const std::vector<std::vector<double>>& points,
                                    double scale = 1.1);

/// Componentwise (min, max) over a point union.
std::pair<std::vector<double>, std::vector<double>> objective_range(
    const std::vector<std::vector<double>>& points);

/// Maps each component to (x - min)/(max - min); degenerate dimensions
/// collapse to 0.
std::vector<std::vector<double>> normalize_objectives(
    const std::vector<std::vector<double>>& points, const std::vector<double>& mins,
    const std::vector<double>& maxs);

}  // namespace fairline::metrics
