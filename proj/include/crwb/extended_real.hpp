#ifndef CRWB_EXTENDED_REAL_HPP
#define CRWB_EXTENDED_REAL_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "crwb/errors.hpp"

namespace crwb {

/// Scalar of the max-plus world: a finite real, -inf (identity of max) or
/// +inf.  +inf never appears in inputs; it only arises as x - (-inf) and
/// encodes "this argument drops out of a min".
///
/// Mixed-infinity sums and same-infinity differences throw IndeterminateForm
/// instead of silently producing NaN.
class ExtendedReal {
  public:
    constexpr ExtendedReal() noexcept : value_(0.0) {}

    ExtendedReal(double value) : value_(value) {
        if (std::isnan(value)) throw IndeterminateForm("NaN is not an extended real");
    }

    static ExtendedReal bottom() noexcept {
        ExtendedReal x;
        x.value_ = -std::numeric_limits<double>::infinity();
        return x;
    }
    static ExtendedReal top() noexcept {
        ExtendedReal x;
        x.value_ = std::numeric_limits<double>::infinity();
        return x;
    }

    bool is_bottom() const noexcept { return std::isinf(value_) && value_ < 0; }
    bool is_top() const noexcept { return std::isinf(value_) && value_ > 0; }
    bool is_finite() const noexcept { return std::isfinite(value_); }

    /// Raw double; -inf/+inf for bottom/top.
    double value() const noexcept { return value_; }

    double finite() const {
        if (!is_finite()) throw OutOfRange("extended real is not finite");
        return value_;
    }

    friend bool operator==(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ == b.value_; }
    friend bool operator!=(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ != b.value_; }
    friend bool operator<(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ < b.value_; }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ <= b.value_; }
    friend bool operator>(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ > b.value_; }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) noexcept { return a.value_ >= b.value_; }

    friend ExtendedReal operator-(ExtendedReal a) noexcept {
        ExtendedReal x;
        x.value_ = -a.value_;
        return x;
    }

    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        const double r = a.value_ + b.value_;
        if (std::isnan(r)) throw IndeterminateForm("(-inf) + (+inf) is undefined");
        ExtendedReal x;
        x.value_ = r;
        return x;
    }

    /// x - (-inf) = +inf for x != -inf; (-inf) - x = -inf for finite x.
    friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) {
        const double r = a.value_ - b.value_;
        if (std::isnan(r)) throw IndeterminateForm("difference of equal infinities is undefined");
        ExtendedReal x;
        x.value_ = r;
        return x;
    }

  private:
    double value_;
};

inline ExtendedReal max(ExtendedReal a, ExtendedReal b) noexcept { return a < b ? b : a; }
inline ExtendedReal max(ExtendedReal a, ExtendedReal b, ExtendedReal c) noexcept {
    return max(max(a, b), c);
}
inline ExtendedReal min(ExtendedReal a, ExtendedReal b) noexcept { return b < a ? b : a; }
inline ExtendedReal min(ExtendedReal a, ExtendedReal b, ExtendedReal c) noexcept {
    return min(min(a, b), c);
}

/// True for finite values that are exact integers (within double range).
inline bool is_integral(ExtendedReal x) noexcept {
    return x.is_finite() && x.value() == std::nearbyint(x.value());
}

/// Shortest decimal that round-trips exactly; "-inf"/"+inf" for the infinities.
inline std::string to_string(ExtendedReal x) {
    if (x.is_bottom()) return "-inf";
    if (x.is_top()) return "+inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x.value());
    (void)ec;
    return std::string(buf, ptr);
}

inline ExtendedReal parse_extended_real(std::string_view text) {
    if (text == "-inf") return ExtendedReal::bottom();
    if (text == "+inf" || text == "inf") return ExtendedReal::top();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not an extended real: '" + std::string(text) + "'");
    return ExtendedReal(v);
}

}  // namespace crwb

#endif
