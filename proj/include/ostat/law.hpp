#ifndef OSTAT_LAW_HPP
#define OSTAT_LAW_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ostat/distribution.hpp"
#include "ostat/extended_real.hpp"

namespace ostat {

/// A law on [-inf, +inf] described by its cdf and left-limit cdf on the reals.
class Law {
public:
    Law(std::function<double(double)> cdf, std::function<double(double)> cdf_left)
        : cdf_(std::move(cdf)), cdf_left_(std::move(cdf_left)) {}

    static Law of(const Distribution& d) {
        return Law([d](double x) { return d.cdf(x); }, [d](double x) { return d.cdf_left(x); });
    }

    /// Point mass; at -inf the cdf is 1 on all reals, at +inf it is 0.
    static Law point(ExtendedReal c) {
        Law l([c](double x) { return ExtendedReal(x) >= c ? 1.0 : 0.0; },
              [c](double x) { return ExtendedReal(x) > c ? 1.0 : 0.0; });
        l.atom_ = c;
        return l;
    }

    static Law mixture(const std::vector<double>& weights, const std::vector<Law>& parts) {
        if (weights.size() != parts.size() || parts.empty()) throw std::invalid_argument("Law::mixture: bad sizes");
        auto cdf = [weights, parts](double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < parts.size(); ++i) s += weights[i] * parts[i].cdf(x);
            return s;
        };
        auto left = [weights, parts](double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < parts.size(); ++i) s += weights[i] * parts[i].cdf_left(x);
            return s;
        };
        return Law(cdf, left);
    }

    double cdf(double x) const { return cdf_(x); }
    double cdf_left(double x) const { return cdf_left_(x); }

    /// Set for point masses.
    const std::optional<ExtendedReal>& atom() const noexcept { return atom_; }

    /// inf{x : F(x) >= q} by bracketing and bisection, for q in (0, 1).
    double quantile(double q) const {
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("Law::quantile: q must lie in (0, 1)");
        double lo = -1.0;
        double hi = 1.0;
        while (cdf(hi) < q) {
            hi *= 2.0;
            if (!std::isfinite(hi)) throw std::domain_error("Law::quantile: no finite upper bracket");
        }
        while (cdf(lo) >= q) {
            lo *= 2.0;
            if (!std::isfinite(lo)) throw std::domain_error("Law::quantile: no finite lower bracket");
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            (cdf(mid) >= q ? hi : lo) = mid;
        }
        return hi;
    }

private:
    std::function<double(double)> cdf_;
    std::function<double(double)> cdf_left_;
    std::optional<ExtendedReal> atom_;
};

}  // namespace ostat

#endif  // OSTAT_LAW_HPP
