#ifndef OSTAT_RANK_SCHEDULE_HPP
#define OSTAT_RANK_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ostat {

/// Rule n -> k_n with 1 <= k_n <= n and k_n / n -> lambda in {0, 1}.
///
///   BottomConst(k)  k_n = min(k, n)                      lambda = 0, extreme
///   TopConst(j)     k_n = max(1, n - j + 1)              lambda = 1, extreme
///   PowerLow(b)     k_n = max(1, ceil(n^b))              lambda = 0, intermediate
///   PowerHigh(b)    k_n = n - max(1, ceil(n^b)) + 1      lambda = 1, intermediate
///
/// Ranks are clamped into [1, n] so every schedule is defined from n = 1.
class RankSchedule {
public:
    enum class Kind { BottomConst, TopConst, PowerLow, PowerHigh };

    static RankSchedule bottom_const(std::uint64_t k) {
        if (k < 1) throw std::invalid_argument("RankSchedule: k must be >= 1");
        return RankSchedule(Kind::BottomConst, k, 0.0);
    }
    static RankSchedule top_const(std::uint64_t j) {
        if (j < 1) throw std::invalid_argument("RankSchedule: j must be >= 1");
        return RankSchedule(Kind::TopConst, j, 0.0);
    }
    static RankSchedule power_low(double beta) { return RankSchedule(Kind::PowerLow, 0, check_beta(beta)); }
    static RankSchedule power_high(double beta) { return RankSchedule(Kind::PowerHigh, 0, check_beta(beta)); }

    Kind kind() const noexcept { return kind_; }
    std::uint64_t offset() const noexcept { return offset_; }
    double beta() const noexcept { return beta_; }

    int lambda() const noexcept { return (kind_ == Kind::BottomConst || kind_ == Kind::PowerLow) ? 0 : 1; }

    std::uint64_t rank_at(std::uint64_t n) const {
        if (n < 1) throw std::invalid_argument("RankSchedule::rank_at: n must be >= 1");
        switch (kind_) {
            case Kind::BottomConst:
                return std::min(offset_, n);
            case Kind::TopConst:
                return offset_ >= n ? 1 : n - offset_ + 1;
            case Kind::PowerLow:
                return std::min(ceil_power(n), n);
            case Kind::PowerHigh:
                return n - std::min(ceil_power(n), n) + 1;
        }
        return 1;
    }

    std::string name() const {
        switch (kind_) {
            case Kind::BottomConst: return "bottom_const(" + std::to_string(offset_) + ")";
            case Kind::TopConst: return "top_const(" + std::to_string(offset_) + ")";
            case Kind::PowerLow: return "power_low(" + std::to_string(beta_) + ")";
            case Kind::PowerHigh: return "power_high(" + std::to_string(beta_) + ")";
        }
        return "?";
    }

    friend bool operator==(const RankSchedule&, const RankSchedule&) = default;

private:
    RankSchedule(Kind kind, std::uint64_t offset, double beta) : kind_(kind), offset_(offset), beta_(beta) {}

    static double check_beta(double beta) {
        if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("RankSchedule: beta must lie in (0, 1)");
        return beta;
    }

    // max(1, ceil(n^beta)); a power within rounding of an integer counts as that integer.
    std::uint64_t ceil_power(std::uint64_t n) const {
        const double r = std::pow(static_cast<double>(n), beta_);
        const double near = std::round(r);
        const double c = std::abs(r - near) <= 1e-9 * std::max(1.0, r) ? near : std::ceil(r);
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
    }

    Kind kind_;
    std::uint64_t offset_;
    double beta_;
};

}  // namespace ostat

#endif  // OSTAT_RANK_SCHEDULE_HPP
