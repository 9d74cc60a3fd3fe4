#ifndef CRWB_TRAFFIC_HPP
#define CRWB_TRAFFIC_HPP

#include <cstdint>
#include <vector>

#include "crwb/automata.hpp"

namespace crwb {

/// rho = sum(U) / (N L); invariant along any periodic trajectory.
double density(const PeriodicField<double>& u, double capacity);

/// f = sum_j min(Vt^{n-1}_{j+1}, U_j, L - U_{j+1}) / (N L), i.e. the
/// normalized sum of all inflows.
double flow(const PeriodicField<double>& u, const PeriodicField<double>& vt_prev,
            double capacity);

/// True iff sum(U) is the same at every step (exactly for integer runs,
/// within tol_abs otherwise).
bool check_conservation(const Trajectory& traj, double tol_abs);

struct DiagramConfig {
    enum class Mode { Scatter, ControlledDensity };

    int sites = 50;
    double capacity = 1.0;  // must be a positive integer for the sampling
    Mode mode = Mode::ControlledDensity;
    int samples_per_density = 20;  // controlled-density mode
    int total_samples = 1000;      // scatter mode
    double grid_step = 0.02;       // controlled-density grid
    int vt_min = 1;                // inflow limits drawn from [vt_min, L]
    bool fixed_vt0 = false;        // one inflow-limit draw shared by all samples
    std::uint64_t seed = 1;
    // First/last measured step; 0 = derive from N (t = 91..100 at N = 50,
    // scaled linearly for other sizes).
    int first_measured = 0;
    int last_measured = 0;

    int resolved_first(int n) const;
    int resolved_last(int n) const;
};

struct DiagramPoint {
    double density = 0.0;
    double mean_flow = 0.0;
    double flow_std = 0.0;
    int sample_count = 0;
};

/// Sweep the automaton over densities and measure steady flows.
/// Scatter mode: every sample draws U0 uniformly from {0..L} per site and
/// emits one point at its own density.  Controlled-density mode: for each
/// grid density, round(rho N L) unit cars are placed uniformly at random
/// (respecting the cap) and points are averaged per density.
/// In both modes Vt0 is uniform on {vt_min..L} and Vt(-1) = 0.
std::vector<DiagramPoint> fundamental_diagram(const DiagramConfig& cfg);

struct TransitionEstimate {
    double rho_low = 0.0;
    double rho_high = 0.0;
    double q_star = 0.0;
    double conjectured_rho_low = 0.0;   // vt_min / (2 L)
    double conjectured_rho_high = 0.0;  // 1 - vt_min / (2 L)
    double conjectured_q = 0.0;         // vt_min / (2 L)
    bool degenerate = false;            // flat diagram, breakpoints meaningless
};

/// Locate the plateau of a measured diagram: q* is the highest bin-averaged
/// flow and the breakpoints are the outermost bin densities within tol of it.
TransitionEstimate estimate_transitions(const std::vector<DiagramPoint>& points, double capacity,
                                        int vt_min, double tol = 0.02, double bin_width = 0.02);

}  // namespace crwb

#endif
