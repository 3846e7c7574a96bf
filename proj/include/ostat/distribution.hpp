#ifndef OSTAT_DISTRIBUTION_HPP
#define OSTAT_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "ostat/extended_real.hpp"
#include "ostat/rng.hpp"

namespace ostat {

struct Uniform {
    double a = 0.0;
    double b = 1.0;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};
struct Exponential {
    double rate = 1.0;
    friend bool operator==(const Exponential&, const Exponential&) = default;
};
struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
    friend bool operator==(const Normal&, const Normal&) = default;
};
struct Pareto {
    double xm = 1.0;
    double alpha = 1.0;
    friend bool operator==(const Pareto&, const Pareto&) = default;
};
/// Takes v1 with probability p and v0 otherwise.
struct TwoPoint {
    double p = 0.5;
    double v0 = 0.0;
    double v1 = 1.0;
    friend bool operator==(const TwoPoint&, const TwoPoint&) = default;
};

inline double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// A univariate marginal law with its support endpoints.
class Distribution {
public:
    using Family = std::variant<Uniform, Exponential, Normal, Pareto, TwoPoint>;

    Distribution() : family_(Uniform{}) {}
    Distribution(Family f) : family_(f) { validate(); }  // NOLINT(google-explicit-constructor)

    static Distribution uniform(double a, double b) { return Distribution(Uniform{a, b}); }
    static Distribution exponential(double rate) { return Distribution(Exponential{rate}); }
    static Distribution normal(double mu, double sigma) { return Distribution(Normal{mu, sigma}); }
    static Distribution pareto(double xm, double alpha) { return Distribution(Pareto{xm, alpha}); }
    static Distribution two_point(double p, double v0, double v1) { return Distribution(TwoPoint{p, v0, v1}); }

    const Family& family() const noexcept { return family_; }

    std::string family_name() const {
        return std::visit(
            [](const auto& d) -> std::string {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) return "uniform";
                else if constexpr (std::is_same_v<D, Exponential>) return "exponential";
                else if constexpr (std::is_same_v<D, Normal>) return "normal";
                else if constexpr (std::is_same_v<D, Pareto>) return "pareto";
                else return "two_point";
            },
            family_);
    }

    double sample(Rng& rng) const {
        return std::visit(
            [&](const auto& d) -> double {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) {
                    return d.a + (d.b - d.a) * rng.uniform01();
                } else if constexpr (std::is_same_v<D, Exponential>) {
                    return -std::log1p(-rng.uniform01()) / d.rate;
                } else if constexpr (std::is_same_v<D, Normal>) {
                    return d.mu + d.sigma * rng.standard_normal();
                } else if constexpr (std::is_same_v<D, Pareto>) {
                    return d.xm * std::pow(1.0 - rng.uniform01(), -1.0 / d.alpha);
                } else {
                    return rng.uniform01() < d.p ? d.v1 : d.v0;
                }
            },
            family_);
    }

    /// P(X <= x).
    double cdf(double x) const {
        return std::visit(
            [&](const auto& d) -> double {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) {
                    if (x <= d.a) return 0.0;
                    if (x >= d.b) return 1.0;
                    return (x - d.a) / (d.b - d.a);
                } else if constexpr (std::is_same_v<D, Exponential>) {
                    return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x);
                } else if constexpr (std::is_same_v<D, Normal>) {
                    return standard_normal_cdf((x - d.mu) / d.sigma);
                } else if constexpr (std::is_same_v<D, Pareto>) {
                    return x <= d.xm ? 0.0 : 1.0 - std::pow(d.xm / x, d.alpha);
                } else {
                    double c = 0.0;
                    if (d.v0 <= x) c += 1.0 - d.p;
                    if (d.v1 <= x) c += d.p;
                    return c;
                }
            },
            family_);
    }

    /// P(X < x); differs from cdf only at atoms.
    double cdf_left(double x) const {
        if (const auto* d = std::get_if<TwoPoint>(&family_)) {
            double c = 0.0;
            if (d->v0 < x) c += 1.0 - d->p;
            if (d->v1 < x) c += d->p;
            return c;
        }
        return cdf(x);
    }

    ExtendedReal left_endpoint() const {
        return std::visit(
            [](const auto& d) -> ExtendedReal {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) return d.a;
                else if constexpr (std::is_same_v<D, Exponential>) return 0.0;
                else if constexpr (std::is_same_v<D, Normal>) return ExtendedReal::neg_inf();
                else if constexpr (std::is_same_v<D, Pareto>) return d.xm;
                else return std::min(d.v0, d.v1);
            },
            family_);
    }

    ExtendedReal right_endpoint() const {
        return std::visit(
            [](const auto& d) -> ExtendedReal {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) return d.b;
                else if constexpr (std::is_same_v<D, TwoPoint>) return std::max(d.v0, d.v1);
                else return ExtendedReal::pos_inf();
            },
            family_);
    }

    ExtendedReal endpoint(int lambda) const { return lambda == 0 ? left_endpoint() : right_endpoint(); }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    void validate() const {
        auto bad = [](const std::string& m) { throw std::invalid_argument("Distribution: " + m); };
        auto finite = [](double v) { return std::isfinite(v); };
        std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Uniform>) {
                    if (!finite(d.a) || !finite(d.b) || !(d.a < d.b)) bad("uniform needs finite a < b");
                } else if constexpr (std::is_same_v<D, Exponential>) {
                    if (!finite(d.rate) || !(d.rate > 0.0)) bad("exponential needs rate > 0");
                } else if constexpr (std::is_same_v<D, Normal>) {
                    if (!finite(d.mu) || !finite(d.sigma) || !(d.sigma > 0.0)) bad("normal needs sigma > 0");
                } else if constexpr (std::is_same_v<D, Pareto>) {
                    if (!finite(d.xm) || !(d.xm > 0.0) || !finite(d.alpha) || !(d.alpha > 0.0)) {
                        bad("pareto needs xm > 0 and alpha > 0");
                    }
                } else {
                    if (!(d.p > 0.0 && d.p < 1.0) || !finite(d.v0) || !finite(d.v1)) {
                        bad("two_point needs p in (0, 1) and finite values");
                    }
                }
            },
            family_);
    }

    Family family_;
};

}  // namespace ostat

#endif  // OSTAT_DISTRIBUTION_HPP
