#ifndef OSTAT_DIAGNOSTICS_HPP
#define OSTAT_DIAGNOSTICS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ostat {

/// Fraction of xs that are <= x.
inline double empirical_cdf(std::span<const double> xs, double x) {
    if (xs.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
    std::size_t c = 0;
    for (double v : xs) c += v <= x;
    return static_cast<double>(c) / static_cast<double>(xs.size());
}

/// Indicator path I(x_t <= x) packed 64 per word, so lagged co-occurrence
/// counts reduce to popcounts of shifted AND.
class IndicatorBits {
public:
    IndicatorBits(std::span<const double> xs, double x) : n_(xs.size()), words_((xs.size() + 63) / 64 + 1, 0) {
        for (std::size_t t = 0; t < n_; ++t) {
            if (xs[t] <= x) {
                words_[t >> 6] |= std::uint64_t{1} << (t & 63);
                ++ones_;
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t ones() const noexcept { return ones_; }

    /// #{t < n - lag : b_t = b_{t+lag} = 1}.
    std::size_t co_occurrences(std::size_t lag) const {
        if (lag >= n_) return 0;
        const std::size_t q = lag >> 6;
        const unsigned r = static_cast<unsigned>(lag & 63);
        const std::size_t nw = words_.size() - 1;
        std::size_t count = 0;
        for (std::size_t k = 0; k + q < nw; ++k) {
            std::uint64_t shifted = words_[k + q] >> r;
            if (r != 0) shifted |= words_[k + q + 1] << (64 - r);
            count += static_cast<std::size_t>(std::popcount(words_[k] & shifted));
        }
        return count;
    }

private:
    std::size_t n_;
    std::size_t ones_ = 0;
    std::vector<std::uint64_t> words_;  // one trailing zero word
};

/// Plug-in autocovariance of (I(X_t <= x)) at the given lag:
/// (1/(n-lag)) sum_t I(x_t <= x) I(x_{t+lag} <= x) - F^2.
/// F is the empirical cdf at x unless a reference marginal value is given.
inline double autocov_indicator(const IndicatorBits& bits, std::size_t lag, std::optional<double> reference_cdf = {}) {
    if (lag >= bits.size()) {
        throw std::invalid_argument("autocov_indicator: lag " + std::to_string(lag) + " must be below sample length " +
                                    std::to_string(bits.size()));
    }
    const double f = reference_cdf ? *reference_cdf
                                   : static_cast<double>(bits.ones()) / static_cast<double>(bits.size());
    const double joint = static_cast<double>(bits.co_occurrences(lag)) / static_cast<double>(bits.size() - lag);
    return joint - f * f;
}

inline double autocov_indicator(std::span<const double> xs, double x, std::size_t lag,
                                std::optional<double> reference_cdf = {}) {
    if (xs.empty()) throw std::invalid_argument("autocov_indicator: empty sample");
    return autocov_indicator(IndicatorBits(xs, x), lag, reference_cdf);
}

inline constexpr double kTailFlatnessThreshold = 0.05;

struct AutocovLag {
    std::size_t lag;
    double c_hat;
    double partial_sum;  // S_m = sum_{i <= m} c_hat(i) / i
};

/// Numerical look at sum_i c_x(i)/i for one threshold x. Diagnostic only:
/// bounded partial sums never prove convergence, large tail movement only
/// flags divergence-like growth.
struct AutocovReport {
    double x = 0.0;
    std::optional<double> reference_cdf;  // centering used instead of the empirical cdf
    std::vector<AutocovLag> lags;
    double tail_flatness = 0.0;  // max |S_m - S_m'| over the last quarter of lags
    bool flagged = false;        // tail_flatness > kTailFlatnessThreshold
};

inline AutocovReport summability_diagnostic(std::span<const double> xs, double x, std::size_t max_lag,
                                            std::optional<double> reference_cdf = {}) {
    if (max_lag < 1) throw std::invalid_argument("summability_diagnostic: max_lag must be >= 1");
    if (max_lag * 10 >= xs.size()) {
        throw std::invalid_argument("summability_diagnostic: max_lag " + std::to_string(max_lag) +
                                    " must be below n/10 for n = " + std::to_string(xs.size()));
    }
    const IndicatorBits bits(xs, x);
    AutocovReport rep;
    rep.x = x;
    rep.reference_cdf = reference_cdf;
    rep.lags.reserve(max_lag);
    double s = 0.0;
    for (std::size_t i = 1; i <= max_lag; ++i) {
        const double c = autocov_indicator(bits, i, reference_cdf);
        s += c / static_cast<double>(i);
        rep.lags.push_back({i, c, s});
    }
    // Last quarter: lags m >= max_lag - max_lag/4 (at least the final two).
    const std::size_t quarter = std::max<std::size_t>(1, max_lag / 4);
    const std::size_t from = max_lag > quarter ? max_lag - quarter - 1 : 0;
    double lo = rep.lags[from].partial_sum;
    double hi = lo;
    for (std::size_t k = from; k < rep.lags.size(); ++k) {
        lo = std::min(lo, rep.lags[k].partial_sum);
        hi = std::max(hi, rep.lags[k].partial_sum);
    }
    rep.tail_flatness = hi - lo;
    rep.flagged = rep.tail_flatness > kTailFlatnessThreshold;
    return rep;
}

/// Empirical q-quantile: order statistic of rank ceil(q n).
inline double empirical_quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
    k = std::clamp<std::size_t>(k, 1, xs.size());
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k - 1), xs.end());
    return xs[k - 1];
}

}  // namespace ostat

#endif  // OSTAT_DIAGNOSTICS_HPP
