#ifndef CRWB_ULTRADISCRETE_HPP
#define CRWB_ULTRADISCRETE_HPP

#include <utility>
#include <vector>

#include "crwb/extended_real.hpp"
#include "crwb/periodic_field.hpp"

namespace crwb {

using UdField = PeriodicField<ExtendedReal>;

/// Two layers of the max-plus diffusion field.  `memory` is the weight R of
/// the n-1 layer: F_j^{n+1} = max(F_{j-1}, F_{j+1}, R + F_j^{n-1}); R = -inf
/// turns the memory term off and recovers the two-neighbour max equation.
class UdHistory {
  public:
    UdHistory(UdField f_prev, UdField f_curr, ExtendedReal memory);

    const UdField& prev() const noexcept { return f_prev_; }
    const UdField& curr() const noexcept { return f_curr_; }
    ExtendedReal memory() const noexcept { return memory_; }
    std::size_t size() const noexcept { return f_curr_.size(); }

  private:
    UdField f_prev_, f_curr_;
    ExtendedReal memory_;
};

/// Max-plus ratio system before R-elimination.  U is the spatial difference
/// field, V the temporal one; capacity L > 0, memory R finite or -inf.
class UdBurgersFull {
  public:
    UdBurgersFull(UdField u, UdField v, UdField v_prev, double capacity, ExtendedReal memory);

    const UdField& u() const noexcept { return u_; }
    const UdField& v() const noexcept { return v_; }
    const UdField& v_prev() const noexcept { return v_prev_; }
    double capacity() const noexcept { return capacity_; }
    ExtendedReal memory() const noexcept { return memory_; }
    std::size_t size() const noexcept { return u_.size(); }

  private:
    UdField u_, v_, v_prev_;
    double capacity_;
    ExtendedReal memory_;
};

/// Record of one vanishing-epsilon check.
struct LimitReport {
    std::vector<double> epsilons;
    std::vector<double> max_abs_error;  // one entry per epsilon
    bool converged = false;
    double rate_constant = 0.0;  // final error divided by the final epsilon
};

UdHistory step_ud_diffusion(const UdHistory& h);

/// U_j = F_{j+1} - F_j + L/2, V_j = Fnext_j - Fcurr_j + L/2.
/// Throws IndeterminateForm where both operands of a difference are -inf.
std::pair<UdField, UdField> ud_cole_hopf(const UdField& f_curr, const UdField& f_next,
                                         double capacity);

/// One step of the max-plus ratio system,
///   U' = U + min(U_{j-1}, L-U_j, V_j^{n-1}-R) - min(U_j, L-U_{j+1}, V_{j+1}^{n-1}-R)
///   V' = V + min(U_{j-1}, L-U_j, V_j^{n-1}-R) - min(U'_{j-1}, L-U'_j, V_j^n-R)
/// with U' computed before V'.
UdBurgersFull step_ud_burgers_full(const UdBurgersFull& s);

/// Shift V-fields by -R and set R := 0, producing the equivalent system in
/// which the memory parameter is eliminated.  Throws RNotFinite for R = -inf.
UdBurgersFull reduce_memory(const UdBurgersFull& s);

/// min(U_{j-1}, L - U_j, Vt_j): the mass admitted into site j this step.
ExtendedReal inflow_at(const UdField& u, const UdField& vt, double capacity, std::int64_t j);
double inflow_at(const PeriodicField<double>& u, const PeriodicField<double>& vt, double capacity,
                 std::int64_t j);

/// Unique p in (0, 1/2] with (1-2p)/p^2 = exp(R/eps); p = 1/2 for R = -inf.
double solve_p_diffusion(ExtendedReal r, double eps);

/// Unique p in (0, 1/2] with (1-2p)/p = exp(R/eps); p = 1/2 for R = -inf.
double solve_p_burgers(ExtendedReal r, double eps);

std::vector<double> default_epsilon_schedule();

/// One-step check that the log-domain discrete diffusion step converges to
/// the max-plus step as eps -> 0.  The discrete side is evaluated entirely in
/// the shifted log domain; the p^n prefactor is handled symbolically.
LimitReport verify_limit_diffusion(const UdHistory& h, const std::vector<double>& epsilons);

/// Same check for the ratio system.  Each of the two update equations is
/// verified against its own limit: the v-equation receives its u^{n+1} input
/// through the variable transformation of the already-ultradiscretized U',
/// so the reported gap isolates the per-equation limit claim.
LimitReport verify_limit_burgers(const UdBurgersFull& s, const std::vector<double>& epsilons);

}  // namespace crwb

#endif
