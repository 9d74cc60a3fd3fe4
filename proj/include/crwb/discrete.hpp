#ifndef CRWB_DISCRETE_HPP
#define CRWB_DISCRETE_HPP

#include <utility>

#include "crwb/periodic_field.hpp"

namespace crwb {

using RealField = PeriodicField<double>;

/// Occupation pair of a correlated random walk: muL(j) / muR(j) carry the
/// probability mass arriving at site j from the right / left, and p (resp. q)
/// is the probability that a leftward (resp. rightward) move repeats.
class CrwPairState {
  public:
    CrwPairState(RealField mu_left, RealField mu_right, double p, double q);

    const RealField& mu_left() const noexcept { return mu_left_; }
    const RealField& mu_right() const noexcept { return mu_right_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    std::size_t size() const noexcept { return mu_left_.size(); }

  private:
    RealField mu_left_, mu_right_;
    double p_, q_;
};

/// Two consecutive layers of a positive scalar field evolving by the
/// three-term persistence recurrence
///   f_j^{n+1} = p (f_{j-1}^n + f_{j+1}^n) - (2p-1) f_j^{n-1}.
class ScalarHistory {
  public:
    ScalarHistory(RealField f_prev, RealField f_curr, double p);

    const RealField& prev() const noexcept { return f_prev_; }
    const RealField& curr() const noexcept { return f_curr_; }
    double p() const noexcept { return p_; }
    std::size_t size() const noexcept { return f_curr_.size(); }

  private:
    RealField f_prev_, f_curr_;
    double p_;
};

/// Ratio variables of the Cole-Hopf picture: u(j) spatial ratio, v(j)
/// temporal ratio at the current layer, v_prev(j) one layer back.
/// p is restricted to (0, 1/2] so every update stays a sum of positive terms.
class BurgersState {
  public:
    BurgersState(RealField u, RealField v, RealField v_prev, double p);

    const RealField& u() const noexcept { return u_; }
    const RealField& v() const noexcept { return v_; }
    const RealField& v_prev() const noexcept { return v_prev_; }
    double p() const noexcept { return p_; }
    std::size_t size() const noexcept { return u_.size(); }

  private:
    RealField u_, v_, v_prev_;
    double p_;
};

/// One step of f_j^{n+1} = (f_{j+1}^n + f_{j-1}^n) / 2 on the ring.
RealField step_diffusion(const RealField& f);

/// One step of the pair system
///   muL'(j) = p muL(j+1) + (1-q) muR(j+1)
///   muR'(j) = (1-p) muL(j-1) + q muR(j-1).
CrwPairState step_crw_pair(const CrwPairState& s);

/// One step of the three-term recurrence; throws NonPositiveValue (with site)
/// when the output leaves the positive cone required downstream.
ScalarHistory step_crw_scalar(const ScalarHistory& h);

/// u(j) = fCurr(j+1)/fCurr(j), v(j) = fNext(j)/fCurr(j).
std::pair<RealField, RealField> cole_hopf(const RealField& f_curr, const RealField& f_next);

/// One step of the ratio system; u' is computed first, then v' (which
/// references u').  Outputs stay positive for p in (0, 1/2].
BurgersState step_burgers(const BurgersState& s);

/// Seed a BurgersState from a three-layer scalar history: one recurrence step
/// produces f^1 and the state carries u = ratios of f^0, v = f^1/f^0,
/// v_prev = f^0/f^{-1}.
BurgersState burgers_from_history(const ScalarHistory& h);

double total_mass(const CrwPairState& s);

}  // namespace crwb

#endif
