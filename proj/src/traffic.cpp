#include "crwb/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include "crwb/rng.hpp"
#include "crwb/ultradiscrete.hpp"

namespace crwb {

double density(const PeriodicField<double>& u, double capacity) {
    return field_sum(u) / (static_cast<double>(u.size()) * capacity);
}

double flow(const PeriodicField<double>& u, const PeriodicField<double>& vt_prev,
            double capacity) {
    if (u.size() != vt_prev.size())
        throw LengthMismatch("occupancy and inflow-limit fields must have equal length");
    const auto n = static_cast<std::int64_t>(u.size());
    double sum = 0.0;
    for (std::int64_t j = 0; j < n; ++j) sum += inflow_at(u, vt_prev, capacity, j + 1);
    return sum / (static_cast<double>(u.size()) * capacity);
}

bool check_conservation(const Trajectory& traj, double tol_abs) {
    if (traj.stats.empty()) return true;
    const double initial = traj.stats.front().occupancy_sum;
    for (const StepStats& st : traj.stats)
        if (std::abs(st.occupancy_sum - initial) > tol_abs) return false;
    return true;
}

int DiagramConfig::resolved_first(int n) const {
    if (first_measured > 0) return first_measured;
    return static_cast<int>(std::lround(90.0 * n / 50.0)) + 1;
}

int DiagramConfig::resolved_last(int n) const {
    if (last_measured > 0) return last_measured;
    return resolved_first(n) + 9;
}

namespace {

void validate(const DiagramConfig& cfg) {
    if (cfg.sites < 2) throw ConfigError("diagram needs at least 2 sites");
    if (!(cfg.capacity >= 1.0) || cfg.capacity != std::nearbyint(cfg.capacity))
        throw ConfigError("diagram capacity must be a positive integer");
    if (cfg.vt_min < 1 || cfg.vt_min > static_cast<int>(cfg.capacity))
        throw ConfigError("vt_min must lie in [1, L]");
    if (cfg.mode == DiagramConfig::Mode::ControlledDensity) {
        if (!(cfg.grid_step > 0.0 && cfg.grid_step < 0.5))
            throw ConfigError("grid step must lie in (0, 0.5)");
        if (cfg.samples_per_density < 1) throw ConfigError("need at least one sample per density");
    } else if (cfg.total_samples < 1) {
        throw ConfigError("need at least one sample");
    }
    if (cfg.resolved_first(cfg.sites) > cfg.resolved_last(cfg.sites))
        throw ConfigError("measurement window is empty");
}

PeriodicField<double> draw_inflow_limits(SeededRng& rng, int n, int vt_min, int cap) {
    std::vector<double> vt(n);
    for (int j = 0; j < n; ++j) vt[j] = static_cast<double>(rng.uniform_int(vt_min, cap));
    return PeriodicField<double>(std::move(vt));
}

PeriodicField<double> place_cars(SeededRng& rng, int n, int cap, int cars) {
    std::vector<double> u(n, 0.0);
    std::vector<int> open(n);
    for (int j = 0; j < n; ++j) open[j] = j;
    for (int c = 0; c < cars; ++c) {
        const auto pick = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1));
        const int site = open[pick];
        u[site] += 1.0;
        if (u[site] >= cap) {
            open[pick] = open.back();
            open.pop_back();
        }
    }
    return PeriodicField<double>(std::move(u));
}

// Mean flow measured over the configured window for one initial state.
DiagramPoint measure_sample(const DiagramConfig& cfg, const PeriodicField<double>& u0,
                            const PeriodicField<double>& vt0) {
    const PeriodicField<double> vt_prev(u0.size(), 0.0);
    const UdBurgersState state(u0, vt0, vt_prev, cfg.capacity);
    const int first = cfg.resolved_first(cfg.sites);
    const int last = cfg.resolved_last(cfg.sites);
    const Trajectory traj = run(state, last);

    DiagramPoint pt;
    pt.density = density(u0, cfg.capacity);
    pt.sample_count = 1;
    double sum = 0.0, sum_sq = 0.0;
    int count = 0;
    for (int t = first; t <= last; ++t) {
        const double f = traj.stats[t].flow;
        sum += f;
        sum_sq += f * f;
        ++count;
    }
    pt.mean_flow = sum / count;
    pt.flow_std = std::sqrt(std::max(0.0, sum_sq / count - pt.mean_flow * pt.mean_flow));
    return pt;
}

// Static chunking over a preallocated result vector keeps the output
// identical regardless of thread count.
void parallel_samples(int count, const std::function<DiagramPoint(int)>& make,
                      std::vector<DiagramPoint>& out) {
    out.resize(count);
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, static_cast<int>(std::min<unsigned>(hw ? hw : 1, 8)));
    if (workers == 1 || count < 4) {
        for (int i = 0; i < count; ++i) out[i] = make(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) out[i] = make(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<DiagramPoint> fundamental_diagram(const DiagramConfig& cfg) {
    validate(cfg);
    const int n = cfg.sites;
    const int cap = static_cast<int>(cfg.capacity);

    // Optional shared inflow-limit field (stream index ~0 is reserved for it).
    PeriodicField<double> shared_vt(static_cast<std::size_t>(n), 0.0);
    if (cfg.fixed_vt0) {
        SeededRng rng = SeededRng::derive(cfg.seed, ~0ull);
        shared_vt = draw_inflow_limits(rng, n, cfg.vt_min, cap);
    }

    std::vector<DiagramPoint> points;
    if (cfg.mode == DiagramConfig::Mode::Scatter) {
        const auto make = [&](int i) {
            SeededRng rng = SeededRng::derive(cfg.seed, static_cast<std::uint64_t>(i));
            std::vector<double> u(n);
            for (int j = 0; j < n; ++j) u[j] = static_cast<double>(rng.uniform_int(0, cap));
            const PeriodicField<double> u0(std::move(u));
            const PeriodicField<double> vt0 =
                cfg.fixed_vt0 ? shared_vt : draw_inflow_limits(rng, n, cfg.vt_min, cap);
            return measure_sample(cfg, u0, vt0);
        };
        parallel_samples(cfg.total_samples, make, points);
        return points;
    }

    std::vector<int> car_counts;
    for (double rho = cfg.grid_step; rho < 1.0 - cfg.grid_step / 2.0; rho += cfg.grid_step)
        car_counts.push_back(static_cast<int>(std::lround(rho * n * cap)));
    const int per = cfg.samples_per_density;

    std::vector<DiagramPoint> raw;
    const auto make = [&](int i) {
        const int cars = car_counts[i / per];
        SeededRng rng = SeededRng::derive(cfg.seed, static_cast<std::uint64_t>(i));
        const PeriodicField<double> u0 = place_cars(rng, n, cap, cars);
        const PeriodicField<double> vt0 =
            cfg.fixed_vt0 ? shared_vt : draw_inflow_limits(rng, n, cfg.vt_min, cap);
        return measure_sample(cfg, u0, vt0);
    };
    parallel_samples(static_cast<int>(car_counts.size()) * per, make, raw);

    // bucket by target density
    for (std::size_t b = 0; b < car_counts.size(); ++b) {
        DiagramPoint pt;
        pt.density = static_cast<double>(car_counts[b]) / (n * cap);
        pt.sample_count = per;
        double sum = 0.0, sum_sq = 0.0;
        for (int s = 0; s < per; ++s) {
            const double f = raw[b * per + s].mean_flow;
            sum += f;
            sum_sq += f * f;
        }
        pt.mean_flow = sum / per;
        pt.flow_std = std::sqrt(std::max(0.0, sum_sq / per - pt.mean_flow * pt.mean_flow));
        points.push_back(pt);
    }
    return points;
}

TransitionEstimate estimate_transitions(const std::vector<DiagramPoint>& points, double capacity,
                                        int vt_min, double tol, double bin_width) {
    if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
    std::map<long, std::pair<double, int>> bins;  // bin index -> (flow sum, count)
    for (const DiagramPoint& p : points) {
        const long b = std::lround(p.density / bin_width);
        auto& [sum, cnt] = bins[b];
        sum += p.mean_flow * p.sample_count;
        cnt += p.sample_count;
    }
    if (bins.size() < 10)
        throw InsufficientData("transition estimate needs >= 10 density bins, got " +
                               std::to_string(bins.size()));

    TransitionEstimate est;
    est.conjectured_q = vt_min / (2.0 * capacity);
    est.conjectured_rho_low = est.conjectured_q;
    est.conjectured_rho_high = 1.0 - est.conjectured_q;

    double q_star = 0.0;
    for (const auto& [b, acc] : bins) q_star = std::max(q_star, acc.first / acc.second);
    est.q_star = q_star;
    if (q_star <= tol) {
        est.degenerate = true;
        est.rho_low = 0.0;
        est.rho_high = 1.0;
        return est;
    }
    double lo = 1.0, hi = 0.0;
    for (const auto& [b, acc] : bins) {
        if (acc.first / acc.second >= q_star - tol) {
            const double rho = b * bin_width;
            lo = std::min(lo, rho);
            hi = std::max(hi, rho);
        }
    }
    est.rho_low = lo;
    est.rho_high = hi;
    return est;
}

}  // namespace crwb
