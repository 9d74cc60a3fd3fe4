#ifndef CRWB_AUTOMATA_HPP
#define CRWB_AUTOMATA_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "crwb/periodic_field.hpp"

namespace crwb {

/// State of the capacity-L traffic automaton in reduced variables:
/// occupancy U in [0, L], inflow limits Vt (layer n) and VtPrev (layer n-1),
/// plus the per-site bound I0 frozen from the initial data.
///
/// Two hypothesis regimes are recorded at construction:
///   - strict:  Vt(-1) + Vt(0) <= L sitewise, which additionally bounds every
///              later inflow limit by L;
///   - relaxed: only nonnegativity, bounding inflow limits by I0.
/// run() asserts exactly the bounds proved for the recorded regime.
class UdBurgersState {
  public:
    UdBurgersState(PeriodicField<double> u0, PeriodicField<double> vt0,
                   PeriodicField<double> vt_minus1, double capacity);

    const PeriodicField<double>& occupancy() const noexcept { return u_; }
    const PeriodicField<double>& inflow_limit() const noexcept { return vt_; }
    const PeriodicField<double>& inflow_limit_prev() const noexcept { return vt_prev_; }
    const PeriodicField<double>& initial_bound() const noexcept { return i0_; }
    double capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return u_.size(); }

    /// True when Vt(-1) + Vt(0) <= L held at construction.
    bool strict_regime() const noexcept { return strict_regime_; }
    /// True when every initial entry (and the capacity) is an exact integer.
    bool integral() const noexcept { return integral_; }

  private:
    friend UdBurgersState step_ud_burgers_reduced(const UdBurgersState& s);

    UdBurgersState(PeriodicField<double> u, PeriodicField<double> vt,
                   PeriodicField<double> vt_prev, double capacity, PeriodicField<double> i0,
                   bool strict_regime, bool integral);

    PeriodicField<double> u_, vt_, vt_prev_;
    double capacity_;
    PeriodicField<double> i0_;
    bool strict_regime_;
    bool integral_;
};

/// One step of the reduced system: with X_j = min(U_{j-1}, L-U_j, Vt^{n-1}_j),
///   U'  = U + X_j - X_{j+1}
///   Vt' = Vt + X_j - X'_j        (X' recomputed from U' and Vt^n).
UdBurgersState step_ud_burgers_reduced(const UdBurgersState& s);

struct StepStats {
    std::vector<double> inflow;  // X_j at this step
    double occupancy_sum = 0.0;
    double flow = 0.0;  // sum(X) / (N L)
    double min_occupancy = 0.0, max_occupancy = 0.0;
    double min_inflow_limit = 0.0, max_inflow_limit = 0.0;
};

/// Time-ordered stack of (U, Vt) snapshots with per-step diagnostics.
struct Trajectory {
    double capacity = 1.0;
    std::vector<PeriodicField<double>> occupancy;      // index = time step
    std::vector<PeriodicField<double>> inflow_limit;   // index = time step
    std::vector<StepStats> stats;                      // index = time step

    std::size_t steps() const noexcept { return occupancy.empty() ? 0 : occupancy.size() - 1; }
};

/// Iterate the reduced step, asserting after every step the bounds of the
/// recorded regime, the identity Vt = I0 - X, and (for integer data)
/// integrality.  Violations throw InvariantViolation with full context.
Trajectory run(const UdBurgersState& s, int steps);

/// Elementary rule 184 via U' = U + min(U_{j-1}, 1-U_j) - min(U_j, 1-U_{j+1}).
PeriodicField<double> rule184_step(const PeriodicField<double>& u);

enum class CaseLabel { I, II, III, IV, V, VI };

std::string to_string(CaseLabel c);

/// Movement classification of a binary (L=1) neighbourhood.  Arguments are
/// U_{j-1}, U_j, U_{j+1} and the previous-layer inflow limits at j and j+1.
CaseLabel classify_case(int u_m1, int u, int u_p1, int vt, int vt_p1);

struct CaseOutcome {
    int inflow_in = 0;   // X_j
    int inflow_out = 0;  // X_{j+1}
    int u_next = 0;
    CaseLabel label = CaseLabel::I;
};

CaseOutcome classify_outcome(int u_m1, int u, int u_p1, int vt, int vt_p1);

struct NeighbourhoodRow {
    int no;
    int u_m1, u, u_p1, vt, vt_p1;
    int inflow_in, inflow_out, u_next;
    CaseLabel label;
};

/// The full 32-row reference table of binary neighbourhood outcomes at L=1.
const std::array<NeighbourhoodRow, 32>& neighbourhood_table();

struct BoundsReport {
    int steps = 0;
    bool ok = false;
    double min_occupancy = 0.0, max_occupancy = 0.0;
    double min_inflow_limit = 0.0, max_inflow_limit = 0.0;
    double max_identity_gap = 0.0;  // worst |Vt - (I0 - X)|
};

/// Run a (typically non-integer) state and report the observed ranges; the
/// underlying run() already throws on any bound violation.
BoundsReport check_real_valued_bounds(const UdBurgersState& s, int steps);

}  // namespace crwb

#endif
