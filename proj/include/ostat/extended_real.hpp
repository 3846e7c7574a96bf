#ifndef OSTAT_EXTENDED_REAL_HPP
#define OSTAT_EXTENDED_REAL_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ostat {

/// A value in [-inf, +inf]. NaN is never representable.
///
/// Arithmetic follows the extended-real conventions used throughout the
/// library: a +/- inf = +/- inf for real a, inf + inf = inf,
/// -inf - inf = -inf, and 0 * (+/- inf) = 0. The indeterminate form
/// inf - inf throws std::domain_error.
class ExtendedReal {
public:
    constexpr ExtendedReal() noexcept = default;

    // Implicit on purpose: every real is an extended real.
    ExtendedReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
        if (std::isnan(v)) {
            throw std::invalid_argument("ExtendedReal: NaN is not an extended real");
        }
    }

    static constexpr ExtendedReal neg_inf() noexcept {
        return ExtendedReal(-std::numeric_limits<double>::infinity(), raw_tag{});
    }
    static constexpr ExtendedReal pos_inf() noexcept {
        return ExtendedReal(std::numeric_limits<double>::infinity(), raw_tag{});
    }

    constexpr double value() const noexcept { return v_; }
    bool is_finite() const noexcept { return std::isfinite(v_); }
    constexpr bool is_neg_inf() const noexcept { return v_ == -std::numeric_limits<double>::infinity(); }
    constexpr bool is_pos_inf() const noexcept { return v_ == std::numeric_limits<double>::infinity(); }

    friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept { return a.v_ == b.v_; }
    friend constexpr std::strong_ordering operator<=>(ExtendedReal a, ExtendedReal b) noexcept {
        // Total because NaN is excluded at construction.
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (b.v_ < a.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend constexpr ExtendedReal operator-(ExtendedReal a) noexcept { return ExtendedReal(-a.v_, raw_tag{}); }

    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
            throw std::domain_error("ExtendedReal: inf - inf is undefined");
        }
        return ExtendedReal(a.v_ + b.v_, raw_tag{});
    }
    friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a + (-b); }

    friend ExtendedReal operator*(ExtendedReal a, ExtendedReal b) noexcept {
        if (a.v_ == 0.0 || b.v_ == 0.0) return ExtendedReal(0.0, raw_tag{});
        return ExtendedReal(a.v_ * b.v_, raw_tag{});
    }

    ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }
    ExtendedReal& operator-=(ExtendedReal o) { return *this = *this - o; }
    ExtendedReal& operator*=(ExtendedReal o) noexcept { return *this = *this * o; }

    std::string to_string() const;

private:
    struct raw_tag {};
    constexpr ExtendedReal(double v, raw_tag) noexcept : v_(v) {}

    double v_ = 0.0;
};

inline ExtendedReal max(ExtendedReal a, ExtendedReal b) noexcept { return a < b ? b : a; }
inline ExtendedReal min(ExtendedReal a, ExtendedReal b) noexcept { return b < a ? b : a; }

}  // namespace ostat

#include "ostat/format.hpp"

namespace ostat {

inline std::string ExtendedReal::to_string() const {
    if (is_neg_inf()) return "-inf";
    if (is_pos_inf()) return "+inf";
    return format_double(v_);
}

inline std::ostream& operator<<(std::ostream& os, ExtendedReal x) { return os << x.to_string(); }

}  // namespace ostat

#endif  // OSTAT_EXTENDED_REAL_HPP
