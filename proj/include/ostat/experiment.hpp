#ifndef OSTAT_EXPERIMENT_HPP
#define OSTAT_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ostat/extended_real.hpp"
#include "ostat/format.hpp"
#include "ostat/law.hpp"
#include "ostat/order_stat_tracker.hpp"
#include "ostat/process.hpp"
#include "ostat/rank_schedule.hpp"
#include "ostat/rng.hpp"

namespace ostat {

/// Sup-distance between the empirical cdf of samples and a reference law,
/// evaluated on both sides of every jump of the empirical cdf.
inline double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf,
                          const std::function<double(double)>& cdf_left) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const double below = static_cast<double>(i) / n;  // F_n(x-)
        const double at = static_cast<double>(j) / n;     // F_n(x)
        d = std::max({d, std::abs(at - cdf(xs[i])), std::abs(below - cdf_left(xs[i]))});
        i = j;
    }
    return std::min(d, 1.0);
}

/// Left limits approximated by the cdf one ulp below each sample point.
inline double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    return ks_distance(samples, cdf, [&cdf](double x) {
        return cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    });
}

inline double ks_distance(std::span<const double> samples, const Law& law) {
    return ks_distance(
        samples, [&law](double x) { return law.cdf(x); }, [&law](double x) { return law.cdf_left(x); });
}

/// Checks evaluated by run_ensemble(); unset ones are skipped.
struct Assertions {
    struct RegimeFraction {
        std::size_t regime = 0;
        double min = 0.0;
        double max = 1.0;
    };

    std::optional<double> max_final_error;  // |final - limit| for finite limits
    std::optional<double> final_value_max;  // every final value <= this (limit -inf)
    std::optional<double> final_value_min;  // every final value >= this (limit +inf)
    std::optional<double> ks_max;           // KS distance of final values to the limit law
    std::optional<RegimeFraction> regime_fraction;
    bool exact_checkpoints = false;         // every checkpoint value == realized limit
    bool sandwich = false;                  // lambda = 0: value >= limit; lambda = 1: value <= limit

    bool empty() const {
        return !max_final_error && !final_value_max && !final_value_min && !ks_max && !regime_fraction &&
               !exact_checkpoints && !sandwich;
    }
};

struct ExperimentConfig {
    ProcessSpec process;
    RankSchedule schedule = RankSchedule::bottom_const(1);
    std::uint64_t n_max = 0;
    std::vector<std::uint64_t> checkpoints;  // empty: default_checkpoints(n_max)
    std::size_t replications = 1;
    std::uint64_t master_seed = 0;
    Assertions assertions;
};

/// Geometric grid 10^2, 10^2.25, ... (rounded) up to n_max, always ending at n_max.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t n_max) {
    std::vector<std::uint64_t> out;
    for (int j = 0;; ++j) {
        const auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, 2.0 + j / 4.0)));
        if (n >= n_max) break;
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    if (n_max >= 1) out.push_back(n_max);
    return out;
}

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.n_max < 1) throw std::invalid_argument("ExperimentConfig: n_max must be >= 1");
    if (cfg.replications < 1) throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        const auto c = cfg.checkpoints[i];
        if (c < 1 || c > cfg.n_max) throw std::invalid_argument("ExperimentConfig: checkpoint outside [1, n_max]");
        if (i > 0 && c <= cfg.checkpoints[i - 1]) {
            throw std::invalid_argument("ExperimentConfig: checkpoints must be strictly increasing");
        }
    }
    if (cfg.assertions.regime_fraction) {
        const auto& r = *cfg.assertions.regime_fraction;
        if (!(r.min <= r.max)) throw std::invalid_argument("ExperimentConfig: regime_fraction min > max");
    }
    validate(cfg.process);
}

inline std::vector<std::uint64_t> effective_checkpoints(const ExperimentConfig& cfg) {
    return cfg.checkpoints.empty() ? default_checkpoints(cfg.n_max) : cfg.checkpoints;
}

struct CheckpointValue {
    std::uint64_t n;
    std::uint64_t k;
    double value;
};

struct Trajectory {
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    HiddenState hidden;
    std::vector<CheckpointValue> points;
    ExtendedReal limit;

    double final_value() const { return points.back().value; }
};

inline std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t replication) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(replication));
}

inline Trajectory run_trajectory(const ExperimentConfig& cfg, std::size_t replication) {
    validate(cfg);
    const auto checkpoints = effective_checkpoints(cfg);
    Trajectory tr;
    tr.replication = replication;
    tr.seed = replication_seed(cfg.master_seed, replication);
    ProcessStream stream = make_stream(cfg.process, tr.seed);
    tr.hidden = stream.hidden();
    tr.limit = stream.theoretical_limit(cfg.schedule.lambda());

    OrderStatTracker tracker;
    tracker.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(cfg.n_max, 1u << 20)));
    tr.points.reserve(checkpoints.size());
    std::size_t next_cp = 0;
    for (std::uint64_t n = 1; n <= cfg.n_max && next_cp < checkpoints.size(); ++n) {
        tracker.insert(stream.next());
        if (n == checkpoints[next_cp]) {
            const auto k = cfg.schedule.rank_at(n);
            tr.points.push_back({n, k, tracker.select(k)});
            ++next_cp;
        }
    }
    return tr;
}

struct ThresholdCrossing {
    double threshold = 0.0;
    std::optional<std::uint64_t> first_n;  // first checkpoint past the threshold
    bool final_crossed = false;
};

struct AssertionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ConvergenceReport {
    int lambda = 0;
    std::vector<Trajectory> trajectories;
    std::vector<std::optional<double>> final_errors;       // per replication; set for finite limits
    std::vector<std::optional<ThresholdCrossing>> crossings;  // per replication; set for infinite limits
    std::optional<double> max_final_error;
    std::optional<double> median_final_error;
    bool limits_vary = false;
    std::vector<double> limit_sample;  // final values, one per replication
    std::optional<double> ks_distance;
    std::map<std::size_t, std::size_t> regime_counts;
    std::vector<AssertionResult> assertions;

    bool passed() const {
        return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
    }
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

inline std::vector<Trajectory> run_all(const ExperimentConfig& cfg, unsigned threads) {
    std::vector<Trajectory> out(cfg.replications);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.replications)));
    if (threads == 1) {
        for (std::size_t r = 0; r < cfg.replications; ++r) out[r] = run_trajectory(cfg, r);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t r; (r = next.fetch_add(1)) < cfg.replications;) {
                try {
                    out[r] = run_trajectory(cfg, r);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace detail

/// Runs every replication and folds them in replication order, so the report
/// does not depend on the thread count.
inline ConvergenceReport run_ensemble(const ExperimentConfig& cfg, unsigned threads = 1) {
    validate(cfg);
    ConvergenceReport rep;
    rep.lambda = cfg.schedule.lambda();
    rep.trajectories = detail::run_all(cfg, threads);
    const auto& as = cfg.assertions;

    std::vector<double> finite_errors;
    for (const auto& tr : rep.trajectories) {
        const double fin = tr.final_value();
        rep.limit_sample.push_back(fin);
        if (tr.hidden.regime) ++rep.regime_counts[*tr.hidden.regime];
        if (tr.limit.is_finite()) {
            const double e = std::abs(fin - tr.limit.value());
            rep.final_errors.emplace_back(e);
            rep.crossings.emplace_back();
            finite_errors.push_back(e);
        } else {
            rep.final_errors.emplace_back();
            const std::optional<double> thr = tr.limit.is_neg_inf() ? as.final_value_max : as.final_value_min;
            if (thr) {
                ThresholdCrossing c;
                c.threshold = *thr;
                auto crossed = [&](double v) { return tr.limit.is_neg_inf() ? v <= *thr : v >= *thr; };
                for (const auto& p : tr.points) {
                    if (crossed(p.value)) {
                        c.first_n = p.n;
                        break;
                    }
                }
                c.final_crossed = crossed(fin);
                rep.crossings.emplace_back(c);
            } else {
                rep.crossings.emplace_back();
            }
        }
    }
    if (!finite_errors.empty()) {
        rep.max_final_error = *std::max_element(finite_errors.begin(), finite_errors.end());
        rep.median_final_error = detail::median_of(finite_errors);
    }
    for (const auto& tr : rep.trajectories) {
        rep.limits_vary = rep.limits_vary || tr.limit != rep.trajectories.front().limit;
    }
    if (rep.limits_vary) {
        if (auto law = limit_law(cfg.process, rep.lambda)) rep.ks_distance = ks_distance(rep.limit_sample, *law);
    }

    const std::size_t reps = rep.trajectories.size();
    if (as.max_final_error) {
        std::size_t bad = 0;
        std::size_t checked = 0;
        for (const auto& e : rep.final_errors) {
            if (!e) continue;
            ++checked;
            bad += *e > *as.max_final_error;
        }
        rep.assertions.push_back({"max_final_error", checked == reps && bad == 0,
                                  std::to_string(bad) + " of " + std::to_string(checked) + " finite-limit replications exceed " +
                                      format_double(*as.max_final_error) +
                                      (checked < reps ? "; " + std::to_string(reps - checked) + " have infinite limits" : "")});
    }
    if (as.final_value_max) {
        std::size_t bad = 0;
        for (double v : rep.limit_sample) bad += v > *as.final_value_max;
        rep.assertions.push_back({"final_value_max", bad == 0,
                                  std::to_string(bad) + " final values above " + format_double(*as.final_value_max)});
    }
    if (as.final_value_min) {
        std::size_t bad = 0;
        for (double v : rep.limit_sample) bad += v < *as.final_value_min;
        rep.assertions.push_back({"final_value_min", bad == 0,
                                  std::to_string(bad) + " final values below " + format_double(*as.final_value_min)});
    }
    if (as.ks_max) {
        std::optional<double> ks = rep.ks_distance;
        if (!ks) {
            if (auto law = limit_law(cfg.process, rep.lambda)) ks = ks_distance(rep.limit_sample, *law);
        }
        rep.assertions.push_back({"ks_max", ks && *ks <= *as.ks_max,
                                  ks ? "KS distance " + format_double(*ks) + " vs bound " + format_double(*as.ks_max)
                                     : "no closed-form limit law for this process"});
    }
    if (as.regime_fraction) {
        const auto& rf = *as.regime_fraction;
        const auto it = rep.regime_counts.find(rf.regime);
        const double frac =
            static_cast<double>(it == rep.regime_counts.end() ? 0 : it->second) / static_cast<double>(reps);
        rep.assertions.push_back({"regime_fraction", frac >= rf.min && frac <= rf.max,
                                  "regime " + std::to_string(rf.regime) + " fraction " + format_double(frac) + " vs [" +
                                      format_double(rf.min) + ", " + format_double(rf.max) + "]"});
    }
    if (as.exact_checkpoints) {
        std::size_t bad = 0;
        for (const auto& tr : rep.trajectories) {
            for (const auto& p : tr.points) bad += ExtendedReal(p.value) != tr.limit;
        }
        rep.assertions.push_back({"exact_checkpoints", bad == 0, std::to_string(bad) + " checkpoint values differ from the limit"});
    }
    if (as.sandwich) {
        std::size_t bad = 0;
        for (const auto& tr : rep.trajectories) {
            for (const auto& p : tr.points) {
                bad += rep.lambda == 0 ? ExtendedReal(p.value) < tr.limit : ExtendedReal(p.value) > tr.limit;
            }
        }
        rep.assertions.push_back({"sandwich", bad == 0, std::to_string(bad) + " checkpoint values on the wrong side of the limit"});
    }
    return rep;
}

}  // namespace ostat

#endif  // OSTAT_EXPERIMENT_HPP
