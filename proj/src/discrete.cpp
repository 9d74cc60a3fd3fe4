#include "crwb/discrete.hpp"

#include <cmath>
#include <string>

namespace crwb {

namespace {

void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0))
        throw OutOfRange(std::string(name) + " must lie in [0,1], got " + std::to_string(x));
}

void require_equal_size(std::size_t a, std::size_t b) {
    if (a != b)
        throw LengthMismatch("field lengths differ: " + std::to_string(a) + " vs " +
                             std::to_string(b));
}

void require_nonnegative(const RealField& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.values()[j];
        if (!(x >= 0.0) || !std::isfinite(x))
            throw OutOfRange(std::string(name) + " must be finite and >= 0 at site " +
                             std::to_string(j) + ", got " + std::to_string(x));
    }
}

void require_positive(const RealField& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.values()[j];
        if (!(x > 0.0) || !std::isfinite(x))
            throw NonPositiveValue(std::string(name) + " must be finite and > 0 at site " +
                                   std::to_string(j) + ", got " + std::to_string(x));
    }
}

}  // namespace

CrwPairState::CrwPairState(RealField mu_left, RealField mu_right, double p, double q)
    : mu_left_(std::move(mu_left)), mu_right_(std::move(mu_right)), p_(p), q_(q) {
    require_equal_size(mu_left_.size(), mu_right_.size());
    require_unit_interval(p_, "p");
    require_unit_interval(q_, "q");
    require_nonnegative(mu_left_, "muL");
    require_nonnegative(mu_right_, "muR");
}

ScalarHistory::ScalarHistory(RealField f_prev, RealField f_curr, double p)
    : f_prev_(std::move(f_prev)), f_curr_(std::move(f_curr)), p_(p) {
    require_equal_size(f_prev_.size(), f_curr_.size());
    if (!(p_ > 0.0 && p_ <= 1.0))
        throw OutOfRange("p must lie in (0,1], got " + std::to_string(p_));
    require_positive(f_prev_, "f(n-1)");
    require_positive(f_curr_, "f(n)");
}

BurgersState::BurgersState(RealField u, RealField v, RealField v_prev, double p)
    : u_(std::move(u)), v_(std::move(v)), v_prev_(std::move(v_prev)), p_(p) {
    require_equal_size(u_.size(), v_.size());
    require_equal_size(u_.size(), v_prev_.size());
    if (!(p_ > 0.0 && p_ <= 0.5))
        throw OutOfRange("p must lie in (0,1/2] for the ratio system, got " + std::to_string(p_));
    require_positive(u_, "u");
    require_positive(v_, "v");
    require_positive(v_prev_, "v(n-1)");
}

RealField step_diffusion(const RealField& f) {
    const auto n = static_cast<std::int64_t>(f.size());
    std::vector<double> out(f.size());
    for (std::int64_t j = 0; j < n; ++j) out[j] = 0.5 * (f[j + 1] + f[j - 1]);
    return RealField(std::move(out));
}

CrwPairState step_crw_pair(const CrwPairState& s) {
    const auto n = static_cast<std::int64_t>(s.size());
    const double p = s.p(), q = s.q();
    std::vector<double> left(s.size()), right(s.size());
    for (std::int64_t j = 0; j < n; ++j) {
        left[j] = p * s.mu_left()[j + 1] + (1.0 - q) * s.mu_right()[j + 1];
        right[j] = (1.0 - p) * s.mu_left()[j - 1] + q * s.mu_right()[j - 1];
    }
    return CrwPairState(RealField(std::move(left)), RealField(std::move(right)), p, q);
}

ScalarHistory step_crw_scalar(const ScalarHistory& h) {
    const auto n = static_cast<std::int64_t>(h.size());
    const double p = h.p();
    std::vector<double> next(h.size());
    for (std::int64_t j = 0; j < n; ++j) {
        next[j] = p * (h.curr()[j - 1] + h.curr()[j + 1]) - (2.0 * p - 1.0) * h.prev()[j];
        if (!(next[j] > 0.0))
            throw NonPositiveValue("recurrence produced non-positive value " +
                                   std::to_string(next[j]) + " at site " + std::to_string(j));
    }
    return ScalarHistory(h.curr(), RealField(std::move(next)), p);
}

std::pair<RealField, RealField> cole_hopf(const RealField& f_curr, const RealField& f_next) {
    require_equal_size(f_curr.size(), f_next.size());
    require_positive(f_curr, "f(n)");
    require_positive(f_next, "f(n+1)");
    const auto n = static_cast<std::int64_t>(f_curr.size());
    std::vector<double> u(f_curr.size()), v(f_curr.size());
    for (std::int64_t j = 0; j < n; ++j) {
        u[j] = f_curr[j + 1] / f_curr[j];
        v[j] = f_next[j] / f_curr[j];
    }
    return {RealField(std::move(u)), RealField(std::move(v))};
}

BurgersState step_burgers(const BurgersState& s) {
    const auto n = static_cast<std::int64_t>(s.size());
    const double p = s.p();
    const double c = 1.0 - 2.0 * p;  // >= 0 on the admitted p range
    const RealField& u = s.u();
    const RealField& v = s.v();
    const RealField& vp = s.v_prev();

    std::vector<double> den(s.size()), u_next(s.size());
    for (std::int64_t j = 0; j < n; ++j) {
        den[j] = p * (u[j] + 1.0 / u[j - 1]) + c / vp[j];
        const double num = p * (u[j + 1] + 1.0 / u[j]) + c / vp[j + 1];
        if (!(den[j] > 0.0))
            throw DivisionByZero("vanishing denominator at site " + std::to_string(j));
        u_next[j] = u[j] * num / den[j];
        if (!(u_next[j] > 0.0) || !std::isfinite(u_next[j]))
            throw NonPositiveValue("u update left the positive cone at site " +
                                   std::to_string(j) + ": " + std::to_string(u_next[j]));
    }
    const RealField un(std::move(u_next));

    std::vector<double> v_next(s.size());
    for (std::int64_t j = 0; j < n; ++j) {
        const double num = p * (un[j] + 1.0 / un[j - 1]) + c / v[j];
        v_next[j] = v[j] * num / den[j];
        if (!(v_next[j] > 0.0) || !std::isfinite(v_next[j]))
            throw NonPositiveValue("v update left the positive cone at site " +
                                   std::to_string(j) + ": " + std::to_string(v_next[j]));
    }
    return BurgersState(un, RealField(std::move(v_next)), s.v(), p);
}

BurgersState burgers_from_history(const ScalarHistory& h) {
    if (!(h.p() <= 0.5))
        throw OutOfRange("ratio system needs p in (0,1/2], got " + std::to_string(h.p()));
    const ScalarHistory advanced = step_crw_scalar(h);
    auto [u, v] = cole_hopf(h.curr(), advanced.curr());
    auto [u_prev_unused, v_prev] = cole_hopf(h.prev(), h.curr());
    (void)u_prev_unused;
    return BurgersState(std::move(u), std::move(v), std::move(v_prev), h.p());
}

double total_mass(const CrwPairState& s) {
    return field_sum(s.mu_left()) + field_sum(s.mu_right());
}

}  // namespace crwb
