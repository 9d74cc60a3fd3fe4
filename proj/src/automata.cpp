#include "crwb/automata.hpp"

#include <cmath>
#include <sstream>

#include "crwb/ultradiscrete.hpp"

namespace crwb {

namespace {

constexpr double kRealSlack = 1e-9;

bool all_integral(const PeriodicField<double>& f) {
    for (double x : f)
        if (x != std::nearbyint(x)) return false;
    return true;
}

std::string format_site(const PeriodicField<double>& f, std::int64_t j) {
    std::ostringstream os;
    os << f[j] << " at site " << j;
    return os.str();
}

}  // namespace

UdBurgersState::UdBurgersState(PeriodicField<double> u0, PeriodicField<double> vt0,
                               PeriodicField<double> vt_minus1, double capacity)
    : u_(std::move(u0)),
      vt_(std::move(vt0)),
      vt_prev_(std::move(vt_minus1)),
      capacity_(capacity),
      i0_(u_.size(), 0.0),
      strict_regime_(true),
      integral_(false) {
    if (!(capacity_ > 0.0) || !std::isfinite(capacity_))
        throw OutOfRange("capacity must be a positive real");
    if (vt_.size() != u_.size() || vt_prev_.size() != u_.size())
        throw LengthMismatch("occupancy and inflow-limit fields must have equal length");

    const auto n = static_cast<std::int64_t>(u_.size());
    for (std::int64_t j = 0; j < n; ++j) {
        if (!(u_[j] >= 0.0 && u_[j] <= capacity_))
            throw OutOfRange("occupancy outside [0, L]: " + format_site(u_, j));
        if (!(vt_[j] >= 0.0))
            throw OutOfRange("inflow limit must be >= 0: " + format_site(vt_, j));
        if (!(vt_prev_[j] >= 0.0))
            throw OutOfRange("inflow limit must be >= 0: " + format_site(vt_prev_, j));
        if (vt_prev_[j] + vt_[j] > capacity_) strict_regime_ = false;
    }

    std::vector<double> i0(u_.size());
    for (std::int64_t j = 0; j < n; ++j)
        i0[j] = inflow_at(u_, vt_prev_, capacity_, j) + vt_[j];
    i0_ = PeriodicField<double>(std::move(i0));

    integral_ = capacity_ == std::nearbyint(capacity_) && all_integral(u_) &&
                all_integral(vt_) && all_integral(vt_prev_);
}

UdBurgersState::UdBurgersState(PeriodicField<double> u, PeriodicField<double> vt,
                               PeriodicField<double> vt_prev, double capacity,
                               PeriodicField<double> i0, bool strict_regime, bool integral)
    : u_(std::move(u)),
      vt_(std::move(vt)),
      vt_prev_(std::move(vt_prev)),
      capacity_(capacity),
      i0_(std::move(i0)),
      strict_regime_(strict_regime),
      integral_(integral) {}

UdBurgersState step_ud_burgers_reduced(const UdBurgersState& s) {
    const auto n = static_cast<std::int64_t>(s.size());
    const double cap = s.capacity();

    std::vector<double> x(s.size());
    for (std::int64_t j = 0; j < n; ++j) x[j] = inflow_at(s.u_, s.vt_prev_, cap, j);
    const PeriodicField<double> inflow(std::move(x));

    std::vector<double> u_next(s.size());
    for (std::int64_t j = 0; j < n; ++j) u_next[j] = s.u_[j] + inflow[j] - inflow[j + 1];
    const PeriodicField<double> un(std::move(u_next));

    std::vector<double> vt_next(s.size());
    for (std::int64_t j = 0; j < n; ++j)
        vt_next[j] = s.vt_[j] + inflow[j] - inflow_at(un, s.vt_, cap, j);

    return UdBurgersState(un, PeriodicField<double>(std::move(vt_next)), s.vt_, cap, s.i0_,
                          s.strict_regime_, s.integral_);
}

namespace {

StepStats collect_stats(const UdBurgersState& s) {
    StepStats st;
    const auto n = static_cast<std::int64_t>(s.size());
    st.inflow.resize(s.size());
    double sum_x = 0.0;
    st.min_occupancy = st.max_occupancy = s.occupancy()[0];
    st.min_inflow_limit = st.max_inflow_limit = s.inflow_limit()[0];
    for (std::int64_t j = 0; j < n; ++j) {
        st.inflow[j] = inflow_at(s.occupancy(), s.inflow_limit_prev(), s.capacity(), j);
        sum_x += st.inflow[j];
        st.occupancy_sum += s.occupancy()[j];
        st.min_occupancy = std::min(st.min_occupancy, s.occupancy()[j]);
        st.max_occupancy = std::max(st.max_occupancy, s.occupancy()[j]);
        st.min_inflow_limit = std::min(st.min_inflow_limit, s.inflow_limit()[j]);
        st.max_inflow_limit = std::max(st.max_inflow_limit, s.inflow_limit()[j]);
    }
    st.flow = sum_x / (static_cast<double>(s.size()) * s.capacity());
    return st;
}

void assert_invariants(const UdBurgersState& s, const StepStats& st, int step) {
    const double slack = s.integral() ? 0.0 : kRealSlack;
    const auto n = static_cast<std::int64_t>(s.size());
    const auto fail = [&](std::int64_t j, const std::string& what, double value) {
        std::ostringstream os;
        os << what << " at step " << step << ", site " << j << ": value " << value
           << " (capacity " << s.capacity() << ", regime "
           << (s.strict_regime() ? "strict" : "relaxed") << ", integral "
           << (s.integral() ? "yes" : "no") << ")";
        throw InvariantViolation(os.str());
    };
    for (std::int64_t j = 0; j < n; ++j) {
        const double u = s.occupancy()[j];
        const double vt = s.inflow_limit()[j];
        if (u < -slack || u > s.capacity() + slack) fail(j, "occupancy bound violated", u);
        if (vt < -slack) fail(j, "inflow limit negative", vt);
        if (vt > s.initial_bound()[j] + slack) fail(j, "inflow limit exceeds I0", vt);
        if (s.strict_regime() && vt > s.capacity() + slack)
            fail(j, "inflow limit exceeds capacity", vt);
        const double identity_gap = std::abs(vt - (s.initial_bound()[j] - st.inflow[j]));
        if (identity_gap > slack) fail(j, "Vt = I0 - X identity broken, gap", identity_gap);
        if (s.integral() && (u != std::nearbyint(u) || vt != std::nearbyint(vt)))
            fail(j, "integer run drifted off the integers", u);
    }
}

}  // namespace

Trajectory run(const UdBurgersState& s, int steps) {
    if (steps < 0) throw OutOfRange("step count must be >= 0");
    Trajectory traj;
    traj.capacity = s.capacity();
    traj.occupancy.reserve(steps + 1);
    traj.inflow_limit.reserve(steps + 1);
    traj.stats.reserve(steps + 1);

    UdBurgersState cur = s;
    for (int t = 0;; ++t) {
        const StepStats st = collect_stats(cur);
        if (t > 0) assert_invariants(cur, st, t);
        traj.occupancy.push_back(cur.occupancy());
        traj.inflow_limit.push_back(cur.inflow_limit());
        traj.stats.push_back(st);
        if (t == steps) break;
        cur = step_ud_burgers_reduced(cur);
    }
    return traj;
}

PeriodicField<double> rule184_step(const PeriodicField<double>& u) {
    const auto n = static_cast<std::int64_t>(u.size());
    for (std::int64_t j = 0; j < n; ++j)
        if (u[j] != 0.0 && u[j] != 1.0)
            throw NonBinary("entry must be 0 or 1: " + format_site(u, j));
    std::vector<double> next(u.size());
    for (std::int64_t j = 0; j < n; ++j)
        next[j] = u[j] + std::min(u[j - 1], 1.0 - u[j]) - std::min(u[j], 1.0 - u[j + 1]);
    return PeriodicField<double>(std::move(next));
}

std::string to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::I: return "I";
        case CaseLabel::II: return "II";
        case CaseLabel::III: return "III";
        case CaseLabel::IV: return "IV";
        case CaseLabel::V: return "V";
        case CaseLabel::VI: return "VI";
    }
    return "?";
}

CaseLabel classify_case(int u_m1, int u, int u_p1, int vt, int vt_p1) {
    for (int b : {u_m1, u, u_p1, vt, vt_p1})
        if (b != 0 && b != 1) throw NonBinary("classification arguments must be 0 or 1");
    if (u_m1 == 0 && u == 0) return CaseLabel::I;      // nothing can move here
    if (u == 1 && u_p1 == 1) return CaseLabel::II;     // blocked by the car ahead
    if (u_m1 == 1 && u == 0) return vt == 1 ? CaseLabel::III : CaseLabel::V;
    return vt_p1 == 1 ? CaseLabel::IV : CaseLabel::VI;  // u == 1, u_p1 == 0
}

CaseOutcome classify_outcome(int u_m1, int u, int u_p1, int vt, int vt_p1) {
    CaseOutcome out;
    out.label = classify_case(u_m1, u, u_p1, vt, vt_p1);
    out.inflow_in = std::min(u_m1, std::min(1 - u, vt));
    out.inflow_out = std::min(u, std::min(1 - u_p1, vt_p1));
    out.u_next = u + out.inflow_in - out.inflow_out;
    return out;
}

const std::array<NeighbourhoodRow, 32>& neighbourhood_table() {
    using C = CaseLabel;
    static const std::array<NeighbourhoodRow, 32> table = {{
        {1, 0, 0, 0, 0, 0, 0, 0, 0, C::I},
        {2, 0, 0, 0, 0, 1, 0, 0, 0, C::I},
        {3, 0, 0, 0, 1, 0, 0, 0, 0, C::I},
        {4, 0, 0, 0, 1, 1, 0, 0, 0, C::I},
        {5, 0, 0, 1, 0, 0, 0, 0, 0, C::I},
        {6, 0, 0, 1, 0, 1, 0, 0, 0, C::I},
        {7, 0, 0, 1, 1, 0, 0, 0, 0, C::I},
        {8, 0, 0, 1, 1, 1, 0, 0, 0, C::I},
        {9, 0, 1, 0, 0, 0, 0, 0, 1, C::VI},
        {10, 0, 1, 0, 0, 1, 0, 1, 0, C::IV},
        {11, 0, 1, 0, 1, 0, 0, 0, 1, C::VI},
        {12, 0, 1, 0, 1, 1, 0, 1, 0, C::IV},
        {13, 0, 1, 1, 0, 0, 0, 0, 1, C::II},
        {14, 0, 1, 1, 0, 1, 0, 0, 1, C::II},
        {15, 0, 1, 1, 1, 0, 0, 0, 1, C::II},
        {16, 0, 1, 1, 1, 1, 0, 0, 1, C::II},
        {17, 1, 0, 0, 0, 0, 0, 0, 0, C::V},
        {18, 1, 0, 0, 0, 1, 0, 0, 0, C::V},
        {19, 1, 0, 0, 1, 0, 1, 0, 1, C::III},
        {20, 1, 0, 0, 1, 1, 1, 0, 1, C::III},
        {21, 1, 0, 1, 0, 0, 0, 0, 0, C::V},
        {22, 1, 0, 1, 0, 1, 0, 0, 0, C::V},
        {23, 1, 0, 1, 1, 0, 1, 0, 1, C::III},
        {24, 1, 0, 1, 1, 1, 1, 0, 1, C::III},
        {25, 1, 1, 0, 0, 0, 0, 0, 1, C::VI},
        {26, 1, 1, 0, 0, 1, 0, 1, 0, C::IV},
        {27, 1, 1, 0, 1, 0, 0, 0, 1, C::VI},
        {28, 1, 1, 0, 1, 1, 0, 1, 0, C::IV},
        {29, 1, 1, 1, 0, 0, 0, 0, 1, C::II},
        {30, 1, 1, 1, 0, 1, 0, 0, 1, C::II},
        {31, 1, 1, 1, 1, 0, 0, 0, 1, C::II},
        {32, 1, 1, 1, 1, 1, 0, 0, 1, C::II},
    }};
    return table;
}

BoundsReport check_real_valued_bounds(const UdBurgersState& s, int steps) {
    const Trajectory traj = run(s, steps);
    BoundsReport rep;
    rep.steps = steps;
    rep.ok = true;
    rep.min_occupancy = rep.max_occupancy = traj.occupancy.front()[0];
    rep.min_inflow_limit = rep.max_inflow_limit = traj.inflow_limit.front()[0];
    for (std::size_t t = 0; t < traj.occupancy.size(); ++t) {
        const auto& st = traj.stats[t];
        rep.min_occupancy = std::min(rep.min_occupancy, st.min_occupancy);
        rep.max_occupancy = std::max(rep.max_occupancy, st.max_occupancy);
        rep.min_inflow_limit = std::min(rep.min_inflow_limit, st.min_inflow_limit);
        rep.max_inflow_limit = std::max(rep.max_inflow_limit, st.max_inflow_limit);
        const auto n = static_cast<std::int64_t>(traj.occupancy[t].size());
        for (std::int64_t j = 0; j < n; ++j) {
            const double gap =
                std::abs(traj.inflow_limit[t][j] - (s.initial_bound()[j] - st.inflow[j]));
            rep.max_identity_gap = std::max(rep.max_identity_gap, gap);
        }
    }
    return rep;
}

}  // namespace crwb
