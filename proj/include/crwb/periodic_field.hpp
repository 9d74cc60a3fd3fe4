#ifndef CRWB_PERIODIC_FIELD_HPP
#define CRWB_PERIODIC_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "crwb/errors.hpp"

namespace crwb {

/// Length-N cyclic array; every integer index (including negatives) resolves
/// modulo N.  Immutable after construction.
template <typename S>
class PeriodicField {
  public:
    explicit PeriodicField(std::vector<S> values) : values_(std::move(values)) {
        if (values_.empty()) throw OutOfRange("periodic field needs at least one site");
    }

    PeriodicField(std::size_t n, const S& fill) : values_(n, fill) {
        if (n == 0) throw OutOfRange("periodic field needs at least one site");
    }

    std::size_t size() const noexcept { return values_.size(); }

    const S& operator[](std::int64_t j) const noexcept { return values_[wrap(j)]; }

    /// ((j mod N) + N) mod N
    std::size_t wrap(std::int64_t j) const noexcept {
        const auto n = static_cast<std::int64_t>(values_.size());
        return static_cast<std::size_t>(((j % n) + n) % n);
    }

    const std::vector<S>& values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const PeriodicField& a, const PeriodicField& b) {
        return a.values_ == b.values_;
    }

  private:
    std::vector<S> values_;
};

/// Elementwise combination of two equal-length fields.
template <typename S, typename Op>
auto field_map2(const PeriodicField<S>& f, const PeriodicField<S>& g, Op op) {
    if (f.size() != g.size())
        throw LengthMismatch("field lengths differ: " + std::to_string(f.size()) + " vs " +
                             std::to_string(g.size()));
    using R = decltype(op(f[0], g[0]));
    std::vector<R> out;
    out.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        out.push_back(op(f.values()[j], g.values()[j]));
    return PeriodicField<R>(std::move(out));
}

template <typename S, typename Op>
auto field_map(const PeriodicField<S>& f, Op op) {
    using R = decltype(op(f[0]));
    std::vector<R> out;
    out.reserve(f.size());
    for (const S& x : f) out.push_back(op(x));
    return PeriodicField<R>(std::move(out));
}

inline double field_sum(const PeriodicField<double>& f) {
    double s = 0.0;
    for (double x : f) s += x;
    return s;
}

}  // namespace crwb

#endif
