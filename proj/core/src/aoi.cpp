#include "fairline/aoi.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "fairline/channel.hpp"

namespace fairline::aoi {

namespace {

constexpr double kMsToS = 1e-3;

// Dense Gaussian elimination with partial pivoting; A is row-major n x n.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(pivot) * n + col]))
                pivot = r;
        if (std::abs(a[static_cast<std::size_t>(pivot) * n + col]) < 1e-300)
            throw std::runtime_error("SHS linear system is singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -=
                    f * a[static_cast<std::size_t>(col) * n + c];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c)
            s -= a[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

}  // namespace

double RateSet::preemption_out(int k) const {
    double s = 0.0;
    for (int j = 0; j < size(); ++j)
        if (j != k) s += preemption[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    return s;
}

double RateSet::closed_form_margin(int k) const {
    return service[static_cast<std::size_t>(k)] - preemption_out(k);
}

void RateSet::validate() const {
    const int n = size();
    if (n == 0) throw std::invalid_argument("RateSet: empty");
    if (static_cast<int>(failure_return.size()) != n ||
        static_cast<int>(preemption.size()) != n)
        throw std::invalid_argument("RateSet: size mismatch between H, R, p");
    for (int k = 0; k < n; ++k) {
        if (static_cast<int>(preemption[static_cast<std::size_t>(k)].size()) != n)
            throw std::invalid_argument("RateSet: preemption matrix is not N x N");
        if (!(service[static_cast<std::size_t>(k)] > 0))
            throw std::invalid_argument("RateSet: link " + std::to_string(k) +
                                        " has nonpositive service rate");
        if (!(failure_return[static_cast<std::size_t>(k)] > 0))
            throw std::invalid_argument("RateSet: link " + std::to_string(k) +
                                        " has nonpositive failure-return rate");
        for (int j = 0; j < n; ++j) {
            const double p = preemption[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            if (p < 0)
                throw std::invalid_argument("RateSet: link " + std::to_string(k) +
                                            " has negative preemption rate");
            if (j == k && p != 0)
                throw std::invalid_argument("RateSet: link " + std::to_string(k) +
                                            " has nonzero self-preemption");
        }
    }
}

double service_rate(double bit_rate_bps, double window_ms, const ScenarioConfig& config) {
    if (bit_rate_bps < 0) throw std::invalid_argument("service_rate: bit rate must be >= 0");
    const double t_pkt_s = config.packet_bits > 0
                               ? config.packet_bits / bit_rate_bps
                               : 0.0;
    const double denom =
        (config.t_p_ms + config.t_fa_ms + window_ms) * kMsToS + t_pkt_s;
    if (!(denom > 0)) throw std::invalid_argument("service_rate: nonpositive transmission time");
    return 1.0 / denom;
}

double failure_rate(double bit_rate_bps, double window_ms, const ScenarioConfig& config) {
    if (bit_rate_bps < 0) throw std::invalid_argument("failure_rate: bit rate must be >= 0");
    const double t_pkt_s = config.packet_bits > 0 ? config.packet_bits / bit_rate_bps : 0.0;
    const double t_sch_s = (config.t_p_ms + config.t_fa_ms + window_ms) * kMsToS;
    const double t_ini_s = t_sch_s + t_pkt_s;
    const double t_nack_s = (config.t_p_ms + config.t_fa_ms) * kMsToS + t_pkt_s;
    const double t_retx_s = t_nack_s + t_sch_s + t_pkt_s;
    const double denom = t_ini_s + config.retransmission_count * t_retx_s;
    if (!(denom > 0)) throw std::invalid_argument("failure_rate: nonpositive transmission time");
    return 1.0 / denom;
}

double preemption_rate(int i, int j, const WindowVector& windows, const Scenario& scenario) {
    if (i == j) return 0.0;
    if (scenario.vehicle(j).priority <= scenario.vehicle(i).priority) return 0.0;
    const auto& c = scenario.config();
    const double t_sch_i_s =
        (c.t_p_ms + c.t_fa_ms + windows[static_cast<std::size_t>(i)]) * kMsToS;
    const double t_p_j_s = c.t_p_ms * kMsToS;
    return 1.0 / (t_sch_i_s + t_p_j_s);
}

RateSet build_rates(const WindowVector& windows, const Scenario& scenario) {
    const int n = scenario.num_vehicles();
    if (static_cast<int>(windows.size()) != n)
        throw std::invalid_argument("build_rates: window vector size mismatch");
    RateSet r;
    r.service.resize(static_cast<std::size_t>(n));
    r.failure_return.resize(static_cast<std::size_t>(n));
    r.preemption.assign(static_cast<std::size_t>(n),
                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        const double bit_rate = channel::traversal_average_rate(scenario, i);
        r.service[static_cast<std::size_t>(i)] =
            service_rate(bit_rate, windows[static_cast<std::size_t>(i)], scenario.config());
        r.failure_return[static_cast<std::size_t>(i)] =
            failure_rate(bit_rate, windows[static_cast<std::size_t>(i)], scenario.config());
        for (int j = 0; j < n; ++j)
            r.preemption[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                preemption_rate(i, j, windows, scenario);
    }
    r.validate();
    return r;
}

std::pair<std::vector<double>, double> stationary_distribution(const RateSet& rates) {
    rates.validate();
    const int n = rates.size();
    const int m = n + 1;  // states 0..N
    // pi Q = 0 with sum(pi) = 1; last balance row replaced by the normalization.
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * m + c]; };
    // column s of Q^T: inflow to state r from state s.
    for (int k = 0; k < n; ++k) {
        const double hk = rates.service[static_cast<std::size_t>(k)];
        const double rk = rates.failure_return[static_cast<std::size_t>(k)];
        at(k + 1, 0) += rk;                 // 0 -> k
        at(0, k + 1) += hk;                 // k -> 0
        double out = hk;
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            const double p = rates.preemption[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            at(j + 1, k + 1) += p;          // k -> j
            out += p;
        }
        at(k + 1, k + 1) -= out;
        at(0, 0) -= rk;
    }
    for (int c = 0; c < m; ++c) at(m - 1, c) = 1.0;
    b[static_cast<std::size_t>(m - 1)] = 1.0;
    std::vector<double> pi = solve_linear(std::move(a), std::move(b));
    for (double p : pi)
        if (!(p > -1e-12))
            throw std::runtime_error("stationary_distribution: negative probability");
    return {pi, 1.0 / pi[0]};
}

CorrelationVectors correlation_vectors(int k, const RateSet& rates,
                                       const std::vector<double>& pi) {
    rates.validate();
    const int n = rates.size();
    if (k < 0 || k >= n) throw std::invalid_argument("correlation_vectors: bad link index");
    const int m = n + 1;
    const int dim = 2 * m;  // unknowns v_q0 (0..N) then v_q1 (0..N)
    std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
    std::vector<double> b(static_cast<std::size_t>(dim), 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * dim + c]; };
    auto i0 = [](int q) { return q; };
    auto i1 = [&](int q) { return m + q; };

    double sum_r = 0.0;
    for (int j = 0; j < n; ++j) sum_r += rates.failure_return[static_cast<std::size_t>(j)];

    // State 0: out-rate sum(R). Incoming j->0 at H_j; success on k maps x0 <- x1.
    at(i0(0), i0(0)) = sum_r;
    b[static_cast<std::size_t>(i0(0))] = pi[0];
    for (int j = 0; j < n; ++j) {
        if (j == k)
            at(i0(0), i1(j + 1)) -= rates.service[static_cast<std::size_t>(j)];
        else
            at(i0(0), i0(j + 1)) -= rates.service[static_cast<std::size_t>(j)];
    }
    at(i1(0), i1(0)) = sum_r;
    for (int j = 0; j < n; ++j)
        if (j != k) at(i1(0), i1(j + 1)) -= rates.service[static_cast<std::size_t>(j)];

    // States q = 1..N: out-rate H_q + preemption_out(q). Incoming 0->q at R_q
    // (identity reset) and j->q at p[j][q] (zeroes x1 only when j == k).
    for (int q = 0; q < n; ++q) {
        const double out = rates.service[static_cast<std::size_t>(q)] + rates.preemption_out(q);
        at(i0(q + 1), i0(q + 1)) = out;
        b[static_cast<std::size_t>(i0(q + 1))] = pi[static_cast<std::size_t>(q + 1)];
        at(i0(q + 1), i0(0)) -= rates.failure_return[static_cast<std::size_t>(q)];
        for (int j = 0; j < n; ++j)
            if (j != q)
                at(i0(q + 1), i0(j + 1)) -=
                    rates.preemption[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)];

        at(i1(q + 1), i1(q + 1)) = out;
        b[static_cast<std::size_t>(i1(q + 1))] = (q == k) ? pi[static_cast<std::size_t>(q + 1)] : 0.0;
        at(i1(q + 1), i1(0)) -= rates.failure_return[static_cast<std::size_t>(q)];
        for (int j = 0; j < n; ++j)
            if (j != q && j != k)
                at(i1(q + 1), i1(j + 1)) -=
                    rates.preemption[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)];
    }

    const std::vector<double> v = solve_linear(std::move(a), std::move(b));
    CorrelationVectors out;
    out.v00 = v[static_cast<std::size_t>(i0(0))];
    out.v_q0.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) out.v_q0[static_cast<std::size_t>(q)] = v[static_cast<std::size_t>(i0(q + 1))];
    out.v_k1 = v[static_cast<std::size_t>(i1(k + 1))];
    return out;
}

double link_aoi(int k, const RateSet& rates) {
    const auto [pi, c] = stationary_distribution(rates);
    (void)c;
    const CorrelationVectors v = correlation_vectors(k, rates, pi);
    double delta = v.v00;
    for (double x : v.v_q0) delta += x;
    if (!(delta > 0)) throw std::runtime_error("link_aoi: nonpositive age");
    return delta;
}

double network_aoi(const RateSet& rates) {
    double sum = 0.0;
    for (int k = 0; k < rates.size(); ++k) sum += link_aoi(k, rates);
    return sum / rates.size();
}

SHSSolution solve(const RateSet& rates) {
    SHSSolution s;
    auto [pi, c] = stationary_distribution(rates);
    s.pi = std::move(pi);
    s.normalizer = c;
    const int n = rates.size();
    s.per_link_aoi.resize(static_cast<std::size_t>(n));
    s.v00.resize(static_cast<std::size_t>(n));
    s.v_q0.resize(static_cast<std::size_t>(n));
    s.v_k1.resize(static_cast<std::size_t>(n));
    s.margins.resize(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const CorrelationVectors v = correlation_vectors(k, rates, s.pi);
        double delta = v.v00;
        for (double x : v.v_q0) delta += x;
        s.v00[static_cast<std::size_t>(k)] = v.v00;
        s.v_q0[static_cast<std::size_t>(k)] = v.v_q0;
        s.v_k1[static_cast<std::size_t>(k)] = v.v_k1;
        s.per_link_aoi[static_cast<std::size_t>(k)] = delta;
        s.margins[static_cast<std::size_t>(k)] = rates.closed_form_margin(k);
        sum += delta;
    }
    s.network_aoi = sum / n;
    return s;
}

double simulate_shs(const RateSet& rates, int target_link, long horizon_events,
                    std::uint64_t seed) {
    rates.validate();
    const int n = rates.size();
    if (target_link < 0 || target_link >= n)
        throw std::invalid_argument("simulate_shs: bad link index");
    if (horizon_events < 1000)
        throw std::invalid_argument("simulate_shs: horizon too short");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    const long burn = horizon_events / 100;
    int q = 0;  // 0 = idle, 1..N = link q-1 transmitting
    double x0 = 0.0, x1 = 0.0;
    double area = 0.0, measured = 0.0;

    for (long e = 0; e < horizon_events; ++e) {
        double total = 0.0;
        if (q == 0) {
            for (int j = 0; j < n; ++j) total += rates.failure_return[static_cast<std::size_t>(j)];
        } else {
            const int l = q - 1;
            total = rates.service[static_cast<std::size_t>(l)] + rates.preemption_out(l);
        }
        const double dt = -std::log1p(-uni(rng)) / total;
        if (e >= burn) {
            area += x0 * dt + 0.5 * dt * dt;
            measured += dt;
        }
        x0 += dt;
        if (q - 1 == target_link) x1 += dt;

        double u = uni(rng) * total;
        if (q == 0) {
            for (int j = 0; j < n; ++j) {
                u -= rates.failure_return[static_cast<std::size_t>(j)];
                if (u <= 0) {
                    q = j + 1;  // failure return: ages unchanged
                    break;
                }
            }
        } else {
            const int l = q - 1;
            u -= rates.service[static_cast<std::size_t>(l)];
            if (u <= 0) {
                if (l == target_link) {  // success on the target: x0 <- x1
                    x0 = x1;
                    x1 = 0.0;
                }
                q = 0;
            } else {
                for (int j = 0; j < n; ++j) {
                    if (j == l) continue;
                    u -= rates.preemption[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
                    if (u <= 0) {
                        if (l == target_link) x1 = 0.0;  // target preempted
                        q = j + 1;
                        break;
                    }
                }
            }
        }
    }
    return area / measured;
}

}  // namespace fairline::aoi
