#include "fairline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fairline::metrics {

namespace {

bool weak_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Area for d = 2: sort ascending by f0 (nondominated set => f1 descending),
// accumulate horizontal strips.
double hv2(std::vector<std::vector<double>> pts, double ref0, double ref1) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double prev_f1 = ref1;
    for (const auto& p : pts) {
        if (p[1] < prev_f1) {
            area += (ref0 - p[0]) * (prev_f1 - p[1]);
            prev_f1 = p[1];
        }
    }
    return area;
}

// Staircase of mutually nondominated 2-D points (x ascending, y strictly
// descending) with the covered area [p, ref] maintained incrementally.
class Staircase2 {
   public:
    Staircase2(double ref0, double ref1) : ref0_(ref0), ref1_(ref1) {}

    void insert(double x, double y) {
        auto it = stairs_.upper_bound(x);
        double level = (it == stairs_.begin()) ? ref1_ : std::prev(it)->second;
        if (level <= y) return;  // already covered at this x
        double cur_x = x;
        double cur_level = level;
        while (cur_level > y) {
            const double next_x = (it == stairs_.end()) ? ref0_ : it->first;
            area_ += (next_x - cur_x) * (cur_level - y);
            if (it == stairs_.end()) break;
            cur_x = next_x;
            cur_level = it->second;
            if (cur_level >= y) it = stairs_.erase(it);  // now dominated
        }
        stairs_[x] = y;
    }

    double area() const { return area_; }

   private:
    std::map<double, double> stairs_;
    double ref0_, ref1_;
    double area_ = 0.0;
};

// Exact 3-D volume: sweep the third dimension, integrating the staircase area.
double hv3(std::vector<std::vector<double>> pts, const std::vector<double>& ref) {
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });
    Staircase2 stairs(ref[0], ref[1]);
    double vol = 0.0;
    double z_prev = pts.front()[2];
    for (const auto& p : pts) {
        if (p[2] > z_prev) {
            vol += stairs.area() * (p[2] - z_prev);
            z_prev = p[2];
        }
        stairs.insert(p[0], p[1]);
    }
    vol += stairs.area() * (ref[2] - z_prev);
    return vol;
}

double hv_rec(std::vector<std::vector<double>> pts, const std::vector<double>& ref, int d);

// Sweep the last dimension while maintaining the nondominated front of the
// (d-1)-projections; each slab contributes width x hv of the current front.
double hv_sweep(std::vector<std::vector<double>>& pts, const std::vector<double>& ref,
                int d) {
    const std::size_t last = static_cast<std::size_t>(d - 1);
    std::sort(pts.begin(), pts.end(),
              [last](const auto& a, const auto& b) { return a[last] < b[last]; });
    std::vector<std::vector<double>> front;
    double vol = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
        const double z = pts[i][last];
        for (; i < pts.size() && pts[i][last] == z; ++i) {
            std::vector<double> proj(pts[i].begin(), pts[i].begin() + (d - 1));
            bool covered = false;
            for (const auto& f : front)
                if (weak_dominates(f, proj)) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            std::erase_if(front, [&](const std::vector<double>& f) {
                return weak_dominates(proj, f);
            });
            front.push_back(std::move(proj));
        }
        const double z_hi = (i < pts.size()) ? pts[i][last] : ref[last];
        if (z_hi > z && !front.empty()) vol += (z_hi - z) * hv_rec(front, ref, d - 1);
    }
    return vol;
}

double hv_rec(std::vector<std::vector<double>> pts, const std::vector<double>& ref, int d) {
    if (pts.empty()) return 0.0;
    if (d == 1) {
        double lo = ref[0];
        for (const auto& p : pts) lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }
    if (d == 2) return hv2(std::move(pts), ref[0], ref[1]);
    if (d == 3) return hv3(std::move(pts), ref);
    return hv_sweep(pts, ref, d);
}

}  // namespace

double hypervolume(const std::vector<std::vector<double>>& points,
                   const std::vector<double>& ref, int* dropped) {
    const int d = static_cast<int>(ref.size());
    if (d < 1) throw std::invalid_argument("hypervolume: empty reference point");
    std::vector<std::vector<double>> usable;
    int drop = 0;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("hypervolume: point dimension mismatch");
        bool inside = true;
        for (int i = 0; i < d; ++i)
            if (!(p[static_cast<std::size_t>(i)] <= ref[static_cast<std::size_t>(i)]) ||
                !std::isfinite(p[static_cast<std::size_t>(i)])) {
                inside = false;
                break;
            }
        if (inside)
            usable.push_back(p);
        else
            ++drop;
    }
    if (dropped) *dropped = drop;
    if (usable.empty()) return 0.0;
    return hv_rec(std::move(usable), ref, d);
}

std::optional<int> track_convergence(const std::vector<double>& hv_series, int window,
                                     double epsilon) {
    if (hv_series.empty()) throw std::invalid_argument("track_convergence: empty series");
    if (window < 1) throw std::invalid_argument("track_convergence: window must be >= 1");
    const int n = static_cast<int>(hv_series.size());
    for (int g = 0; g + window <= n; ++g) {
        double lo = hv_series[static_cast<std::size_t>(g)];
        double hi = lo;
        for (int t = g + 1; t < g + window; ++t) {
            lo = std::min(lo, hv_series[static_cast<std::size_t>(t)]);
            hi = std::max(hi, hv_series[static_cast<std::size_t>(t)]);
        }
        if (hi - lo < epsilon) return g;
    }
    return std::nullopt;
}

std::vector<double> reference_point(const std::vector<std::vector<double>>& points,
                                    double scale) {
    if (points.empty()) throw std::invalid_argument("reference_point: no points");
    std::vector<double> ref = points.front();
    for (const auto& p : points)
        for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = std::max(ref[i], p[i]);
    for (double& r : ref) r *= scale;
    return ref;
}

std::pair<std::vector<double>, std::vector<double>> objective_range(
    const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("objective_range: no points");
    std::vector<double> mins = points.front();
    std::vector<double> maxs = points.front();
    for (const auto& p : points)
        for (std::size_t i = 0; i < mins.size(); ++i) {
            mins[i] = std::min(mins[i], p[i]);
            maxs[i] = std::max(maxs[i], p[i]);
        }
    return {mins, maxs};
}

std::vector<std::vector<double>> normalize_objectives(
    const std::vector<std::vector<double>>& points, const std::vector<double>& mins,
    const std::vector<double>& maxs) {
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        std::vector<double> q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double span = maxs[i] - mins[i];
            q[i] = span > 0 ? (p[i] - mins[i]) / span : 0.0;
        }
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace fairline::metrics
