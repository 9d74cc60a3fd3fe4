#include "crwb/ultradiscrete.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

namespace crwb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_equal_size(std::size_t a, std::size_t b) {
    if (a != b)
        throw LengthMismatch("field lengths differ: " + std::to_string(a) + " vs " +
                             std::to_string(b));
}

void require_no_top(const UdField& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f.values()[j].is_top())
            throw OutOfRange(std::string(name) + " must not contain +inf (site " +
                             std::to_string(j) + ")");
}

void require_finite(const UdField& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (!f.values()[j].is_finite())
            throw OutOfRange(std::string(name) + " must be finite at site " + std::to_string(j));
}

double softplus(double x) {
    // log(1 + e^x), safe for any magnitude
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// log p for (1-2p)/p^2 = e^{R/eps}:  p = 1/(1 + sqrt(1+K))
double log_p_diffusion(ExtendedReal r, double eps) {
    if (r.is_bottom()) return std::log(0.5);
    const double ls = 0.5 * softplus(r.value() / eps);  // log sqrt(1+K)
    return -(ls + std::log1p(std::exp(-ls)));
}

// log p for (1-2p)/p = e^{R/eps}:  p = 1/(K + 2)
double log_p_burgers(ExtendedReal r, double eps) {
    if (r.is_bottom()) return std::log(0.5);
    const double x = r.value() / eps;
    const double l2 = std::log(2.0);
    const double m = x > l2 ? x : l2;
    return -(m + std::log(std::exp(x - m) + std::exp(l2 - m)));
}

// Max-shifted log-sum-exp split into (max, gap).  The gap is log1p over the
// non-max terms so it stays positive far below 1 ulp of the max itself.
struct ShiftedLse {
    double max;  // -inf when every argument is -inf
    double gap;  // log(sum e^{a_i - max}) >= 0
};

ShiftedLse lse_parts(std::initializer_list<double> args) {
    double m = kNegInf;
    for (double a : args) {
        if (std::isnan(a) || a == std::numeric_limits<double>::infinity())
            throw OverflowGuard("log-domain argument left the shifted domain");
        if (a > m) m = a;
    }
    if (m == kNegInf) return {kNegInf, 0.0};
    double rest = 0.0;
    bool max_seen = false;
    for (double a : args) {
        if (!max_seen && a == m) {
            max_seen = true;
            continue;
        }
        if (a != kNegInf) rest += std::exp(a - m);
    }
    return {m, std::log1p(rest)};
}

void validate_schedule(const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw OutOfRange("epsilon schedule is empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw OutOfRange("epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw OutOfRange("epsilons must be strictly decreasing");
    }
}

LimitReport finish_report(std::vector<double> epsilons, std::vector<double> errors) {
    LimitReport report;
    report.converged = true;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        if (!(errors[i + 1] <= errors[i])) report.converged = false;
    const double eps_min = epsilons.back();
    report.rate_constant = errors.back() / eps_min;
    // log 3 is the worst single-step log-sum-exp gap (three-term max); allow
    // one extra eps of slack for composed roundings.
    if (!(errors.back() <= eps_min * (std::log(3.0) + 1.0))) report.converged = false;
    report.epsilons = std::move(epsilons);
    report.max_abs_error = std::move(errors);
    return report;
}

}  // namespace

UdHistory::UdHistory(UdField f_prev, UdField f_curr, ExtendedReal memory)
    : f_prev_(std::move(f_prev)), f_curr_(std::move(f_curr)), memory_(memory) {
    require_equal_size(f_prev_.size(), f_curr_.size());
    if (memory_.is_top()) throw OutOfRange("memory weight R must be finite or -inf");
    require_no_top(f_prev_, "F(n-1)");
    require_no_top(f_curr_, "F(n)");
}

UdBurgersFull::UdBurgersFull(UdField u, UdField v, UdField v_prev, double capacity,
                             ExtendedReal memory)
    : u_(std::move(u)),
      v_(std::move(v)),
      v_prev_(std::move(v_prev)),
      capacity_(capacity),
      memory_(memory) {
    require_equal_size(u_.size(), v_.size());
    require_equal_size(u_.size(), v_prev_.size());
    if (!(capacity_ > 0.0) || !std::isfinite(capacity_))
        throw OutOfRange("capacity must be a positive real");
    if (memory_.is_top()) throw OutOfRange("memory weight R must be finite or -inf");
}

UdHistory step_ud_diffusion(const UdHistory& h) {
    const auto n = static_cast<std::int64_t>(h.size());
    std::vector<ExtendedReal> next;
    next.reserve(h.size());
    for (std::int64_t j = 0; j < n; ++j) {
        const ExtendedReal mem =
            h.memory().is_bottom() ? ExtendedReal::bottom() : h.memory() + h.prev()[j];
        next.push_back(max(h.curr()[j - 1], h.curr()[j + 1], mem));
    }
    return UdHistory(h.curr(), UdField(std::move(next)), h.memory());
}

std::pair<UdField, UdField> ud_cole_hopf(const UdField& f_curr, const UdField& f_next,
                                         double capacity) {
    require_equal_size(f_curr.size(), f_next.size());
    const ExtendedReal half(capacity / 2.0);
    const auto n = static_cast<std::int64_t>(f_curr.size());
    std::vector<ExtendedReal> u, v;
    u.reserve(f_curr.size());
    v.reserve(f_curr.size());
    for (std::int64_t j = 0; j < n; ++j) {
        u.push_back(f_curr[j + 1] - f_curr[j] + half);
        v.push_back(f_next[j] - f_curr[j] + half);
    }
    return {UdField(std::move(u)), UdField(std::move(v))};
}

ExtendedReal inflow_at(const UdField& u, const UdField& vt, double capacity, std::int64_t j) {
    return min(u[j - 1], ExtendedReal(capacity) - u[j], vt[j]);
}

double inflow_at(const PeriodicField<double>& u, const PeriodicField<double>& vt, double capacity,
                 std::int64_t j) {
    return std::min(std::min(u[j - 1], capacity - u[j]), vt[j]);
}

UdBurgersFull step_ud_burgers_full(const UdBurgersFull& s) {
    const auto n = static_cast<std::int64_t>(s.size());
    const ExtendedReal cap(s.capacity());
    const ExtendedReal r = s.memory();
    // V - R with R = -inf yields +inf, which never wins a min: the memory
    // argument simply drops out.
    const auto v_minus_r = [&](const ExtendedReal& v) {
        return r.is_bottom() ? ExtendedReal::top() : v - r;
    };

    std::vector<ExtendedReal> x;
    x.reserve(s.size());
    for (std::int64_t j = 0; j < n; ++j)
        x.push_back(min(s.u()[j - 1], cap - s.u()[j], v_minus_r(s.v_prev()[j])));
    const UdField inflow(std::move(x));

    std::vector<ExtendedReal> u_next;
    u_next.reserve(s.size());
    for (std::int64_t j = 0; j < n; ++j)
        u_next.push_back(s.u()[j] + inflow[j] - inflow[j + 1]);
    const UdField un(std::move(u_next));

    std::vector<ExtendedReal> v_next;
    v_next.reserve(s.size());
    for (std::int64_t j = 0; j < n; ++j) {
        const ExtendedReal out = min(un[j - 1], cap - un[j], v_minus_r(s.v()[j]));
        v_next.push_back(s.v()[j] + inflow[j] - out);
    }
    return UdBurgersFull(un, UdField(std::move(v_next)), s.v(), s.capacity(), s.memory());
}

UdBurgersFull reduce_memory(const UdBurgersFull& s) {
    if (!s.memory().is_finite())
        throw RNotFinite("memory elimination needs finite R; use R = -inf directly");
    const ExtendedReal r = s.memory();
    const auto shift = [r](const ExtendedReal& v) { return v - r; };
    return UdBurgersFull(s.u(), field_map(s.v(), shift), field_map(s.v_prev(), shift),
                         s.capacity(), ExtendedReal(0.0));
}

double solve_p_diffusion(ExtendedReal r, double eps) {
    if (!(eps > 0.0)) throw OutOfRange("eps must be positive");
    if (r.is_bottom()) return 0.5;
    if (r.is_top()) throw OutOfRange("R must be finite or -inf");
    const double k = std::exp(r.value() / eps);
    if (std::isfinite(k)) return 1.0 / (1.0 + std::sqrt(1.0 + k));
    return std::exp(log_p_diffusion(r, eps));
}

double solve_p_burgers(ExtendedReal r, double eps) {
    if (!(eps > 0.0)) throw OutOfRange("eps must be positive");
    if (r.is_bottom()) return 0.5;
    if (r.is_top()) throw OutOfRange("R must be finite or -inf");
    const double k = std::exp(r.value() / eps);
    if (std::isfinite(k)) return 1.0 / (k + 2.0);
    return std::exp(log_p_burgers(r, eps));
}

std::vector<double> default_epsilon_schedule() {
    return {1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01};
}

LimitReport verify_limit_diffusion(const UdHistory& h, const std::vector<double>& epsilons) {
    validate_schedule(epsilons);
    const auto n = static_cast<std::int64_t>(h.size());
    const UdField target = step_ud_diffusion(h).curr();

    std::vector<double> errors;
    errors.reserve(epsilons.size());
    for (const double eps : epsilons) {
        const double lp = log_p_diffusion(h.memory(), eps);
        const double lcoef = h.memory().is_bottom() ? kNegInf : h.memory().value() / eps + 2.0 * lp;
        double worst = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            // layer n=0 carries F/eps, layer n=-1 carries -log p + F/eps
            const double a1 = lp + h.curr()[j - 1].value() / eps;
            const double a2 = lp + h.curr()[j + 1].value() / eps;
            const double a3 =
                lcoef == kNegInf ? kNegInf : lcoef + (-lp + h.prev()[j].value() / eps);
            const auto [m, gap] = lse_parts({a1, a2, a3});
            const ExtendedReal ud = target[j];
            if (m == kNegInf || ud.is_bottom()) {
                if (m != kNegInf || !ud.is_bottom())
                    throw OverflowGuard("one-sided degenerate value at site " + std::to_string(j));
                continue;
            }
            // eps*(m - lp) realigns with the max-plus value; the gap is the
            // genuine log-sum-exp excess and is kept as a separate term so it
            // is not absorbed by the much larger shift.
            const double dev = (eps * (m - lp) - ud.value()) + eps * gap;
            if (!std::isfinite(dev)) throw OverflowGuard("non-finite deviation");
            worst = std::max(worst, std::abs(dev));
        }
        errors.push_back(worst);
    }
    return finish_report(epsilons, std::move(errors));
}

LimitReport verify_limit_burgers(const UdBurgersFull& s, const std::vector<double>& epsilons) {
    validate_schedule(epsilons);
    require_finite(s.u(), "U");
    require_finite(s.v(), "V");
    require_finite(s.v_prev(), "V(n-1)");
    const auto n = static_cast<std::int64_t>(s.size());
    const double cap = s.capacity();
    const UdBurgersFull next = step_ud_burgers_full(s);

    std::vector<double> errors;
    errors.reserve(epsilons.size());
    for (const double eps : epsilons) {
        const double lp = log_p_burgers(s.memory(), eps);
        const double lc = s.memory().is_bottom() ? kNegInf : s.memory().value() / eps + lp;
        const auto log_u = [&](std::int64_t j) { return (s.u()[j].value() - cap / 2.0) / eps; };
        const auto log_un = [&](std::int64_t j) {
            return (next.u()[j].value() - cap / 2.0) / eps;
        };
        const auto log_v = [&](std::int64_t j) { return (s.v()[j].value() - cap / 2.0) / eps; };
        const auto log_vp = [&](std::int64_t j) {
            return (s.v_prev()[j].value() - cap / 2.0) / eps;
        };

        double worst = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            const auto den = lse_parts(
                {lp + log_u(j), lp - log_u(j - 1), lc == kNegInf ? kNegInf : lc - log_vp(j)});
            const auto num = lse_parts({lp + log_u(j + 1), lp - log_u(j),
                                        lc == kNegInf ? kNegInf : lc - log_vp(j + 1)});
            const double dev_u = (s.u()[j].value() + eps * (num.max - den.max) -
                                  next.u()[j].value()) +
                                 eps * (num.gap - den.gap);

            // v-equation, with its u^{n+1} inputs taken from the
            // ultradiscrete step through the variable transformation
            const auto num2 = lse_parts({lp + log_un(j), lp - log_un(j - 1),
                                         lc == kNegInf ? kNegInf : lc - log_v(j)});
            const double dev_v = (s.v()[j].value() + eps * (num2.max - den.max) -
                                  next.v()[j].value()) +
                                 eps * (num2.gap - den.gap);

            if (!std::isfinite(dev_u) || !std::isfinite(dev_v))
                throw OverflowGuard("non-finite deviation at site " + std::to_string(j));
            worst = std::max(worst, std::max(std::abs(dev_u), std::abs(dev_v)));
        }
        errors.push_back(worst);
    }
    return finish_report(epsilons, std::move(errors));
}

}  // namespace crwb
