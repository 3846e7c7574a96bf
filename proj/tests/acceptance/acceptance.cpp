// Acceptance run: one PASS/FAIL line per primary criterion. Thresholds are
// pinned below; the finite-sample failure probabilities they imply are
// computed from exact sampling laws and printed next to each result.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ostat/diagnose.hpp"
#include "ostat/distribution.hpp"
#include "ostat/experiment.hpp"
#include "ostat/finite/endpoints.hpp"
#include "ostat/finite/suite.hpp"
#include "ostat/format.hpp"
#include "ostat/order_stat_tracker.hpp"
#include "ostat/rng.hpp"

using namespace ostat;

namespace {

// Finite suite
constexpr std::size_t kFiniteSpaces = 1000;
constexpr std::size_t kFiniteMaxOutcomes = 12;
constexpr double kFiniteMaxSeconds = 30.0;
// Monotone-limit counterexample
constexpr std::size_t kGridPoints = 100;
// Simulation sizes
constexpr std::uint64_t kNMax = 100000;
constexpr std::size_t kReps100 = 100;
constexpr std::size_t kReps200 = 200;
constexpr std::size_t kRepsIdentical = 50;
// Thresholds
constexpr double kUniformMinBound = 1e-3;
constexpr double kUniformMinMaxSeconds = 60.0;
constexpr double kIntermediateBound = 4e-3;
constexpr double kNormalMinBound = -3.7;
constexpr double kEnsembleFailureBudget = 0.01;
constexpr double kMixtureTolerance = 1e-3;
constexpr double kMixtureFractionLo = 0.38;
constexpr double kMixtureFractionHi = 0.62;
constexpr double kShiftKsBound = 0.15;
// Tracker
constexpr std::size_t kTrackerSequences = 1000;
constexpr std::size_t kTrackerMaxLength = 1000;
constexpr std::size_t kTrackerOps = 10000000;
constexpr double kTrackerSoftSeconds = 10.0;
constexpr double kTrackerHardSeconds = 60.0;
// Diagnostics
constexpr std::size_t kDiagRuns = 100;
constexpr std::size_t kDiagN = 100000;
constexpr std::size_t kDiagMaxLag = 1000;
constexpr std::size_t kDiagIidMinFlat = 95;
constexpr std::size_t kDiagIdenticalMinFlagged = 100;

constexpr std::uint64_t kSeed = 20260101;

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// P(at least one of r independent replications fails) given per-rep p.
double ensemble_failure(double p, std::size_t r) { return -std::expm1(static_cast<double>(r) * std::log1p(-p)); }

// P(Binomial(n, t) < k) summed in log space.
double binomial_lower_tail(std::uint64_t n, double t, std::uint64_t k) {
    const double nn = static_cast<double>(n);
    double total = 0.0;
    for (std::uint64_t j = 0; j < k; ++j) {
        const double jj = static_cast<double>(j);
        const double lp = std::lgamma(nn + 1) - std::lgamma(jj + 1) - std::lgamma(nn - jj + 1) + jj * std::log(t) +
                          (nn - jj) * std::log1p(-t);
        total += std::exp(lp);
    }
    return total;
}

// P(Binomial(n, 1/2) outside [lo, hi]).
double binomial_half_outside(std::uint64_t n, std::uint64_t lo, std::uint64_t hi) {
    const double nn = static_cast<double>(n);
    double inside = 0.0;
    for (std::uint64_t j = lo; j <= hi; ++j) {
        const double jj = static_cast<double>(j);
        inside += std::exp(std::lgamma(nn + 1) - std::lgamma(jj + 1) - std::lgamma(nn - jj + 1) - nn * std::log(2.0));
    }
    return 1.0 - inside;
}

ExperimentConfig experiment(ProcessSpec p, RankSchedule s, std::size_t reps, std::uint64_t seed) {
    ExperimentConfig c;
    c.process = std::move(p);
    c.schedule = s;
    c.n_max = kNMax;
    c.replications = reps;
    c.master_seed = seed;
    return c;
}

void finite_suite() {
    finite::SuiteConfig cfg;
    cfg.spaces = kFiniteSpaces;
    cfg.max_outcomes = kFiniteMaxOutcomes;
    cfg.seed = kSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = finite::run_finite_suite(cfg);
    const double secs = seconds_since(t0);
    report("finite_suite", rep.passed() && rep.instances == kFiniteSpaces && secs < kFiniteMaxSeconds,
           std::to_string(rep.instances) + " spaces, " + std::to_string(rep.checks) + " checks over " +
               std::to_string(rep.checks_by_property.size()) + " properties, " + std::to_string(rep.failed_instances) +
               " failing, " + fmt(std::round(secs * 1000) / 1000) + " s (bound " + fmt(kFiniteMaxSeconds) + " s)");
}

void monotone_limit_counterexample() {
    using namespace finite;
    const FiniteSpace sp(std::vector<double>(kGridPoints, 1.0 / static_cast<double>(kGridPoints)));
    const Partition triv = Partition::trivial(kGridPoints);
    bool ok = true;
    for (std::size_t n = 2; n <= 100; ++n) {
        std::vector<double> v(kGridPoints);
        for (std::size_t i = 0; i < kGridPoints; ++i) {
            v[i] = static_cast<double>(i) / static_cast<double>(kGridPoints) >= 1.0 / static_cast<double>(n) ? 1.0 : 0.0;
        }
        // On the trivial field the endpoint is the minimum over the whole grid.
        const double oracle = *std::min_element(v.begin(), v.end());
        const TableRV g = conditional_left_endpoint(sp, TableRV(v), triv);
        ok = ok && oracle == 0.0 && g == TableRV::constant(kGridPoints, oracle);
    }
    const TableRV one = conditional_left_endpoint(sp, TableRV::constant(kGridPoints, 1.0), triv);
    ok = ok && one == TableRV::constant(kGridPoints, 1.0);
    report("monotone_limit_counterexample", ok,
           "left endpoint of 1{w >= 1/n} given the trivial field is 0 for n = 2..100; of the constant 1 it is 1 (" +
               std::to_string(kGridPoints) + "-point grid)");
}

void iid_uniform_minimum() {
    const double p = std::exp(static_cast<double>(kNMax) * std::log1p(-kUniformMinBound));
    auto c = experiment(ProcessSpec::iid(Distribution::uniform(0, 1)), RankSchedule::bottom_const(1), kReps100,
                        derive_seed(kSeed, "uniform-min"));
    c.assertions.final_value_max = kUniformMinBound;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_ensemble(c, threads());
    const double secs = seconds_since(t0);
    const double worst = *std::max_element(rep.limit_sample.begin(), rep.limit_sample.end());
    report("iid_uniform_extreme", rep.passed() && secs < kUniformMinMaxSeconds,
           "max final of " + std::to_string(kReps100) + " minima " + sci(worst) + " <= " + sci(kUniformMinBound) +
               "; per-rep failure prob " + sci(p) + "; " + fmt(std::round(secs * 10) / 10) + " s (bound " +
               fmt(kUniformMinMaxSeconds) + " s)");
}

void iid_uniform_intermediate() {
    const auto sched = RankSchedule::power_low(0.5);
    const std::uint64_t k = sched.rank_at(kNMax);
    // X_{k:n} > t iff fewer than k of n uniforms fall in [0, t].
    const double p = binomial_lower_tail(kNMax, kIntermediateBound, k);
    const double ens = ensemble_failure(p, kReps100);
    auto c = experiment(ProcessSpec::iid(Distribution::uniform(0, 1)), sched, kReps100,
                        derive_seed(kSeed, "uniform-intermediate"));
    c.assertions.final_value_max = kIntermediateBound;
    const auto rep = run_ensemble(c, threads());
    const double worst = *std::max_element(rep.limit_sample.begin(), rep.limit_sample.end());
    report("iid_uniform_intermediate", rep.passed() && k == 317 && ens < kEnsembleFailureBudget,
           "k_n = " + std::to_string(k) + ", max final " + sci(worst) + " <= " + sci(kIntermediateBound) +
               "; Beta tail per rep " + sci(p) + ", ensemble " + sci(ens));
}

void normal_minimum() {
    const double tail = standard_normal_cdf(kNormalMinBound);
    const double p = std::exp(static_cast<double>(kNMax) * std::log1p(-tail));
    const double ens = ensemble_failure(p, kReps100);
    auto c = experiment(ProcessSpec::iid(Distribution::normal(0, 1)), RankSchedule::bottom_const(1), kReps100,
                        derive_seed(kSeed, "normal-min"));
    c.assertions.final_value_max = kNormalMinBound;
    const auto rep = run_ensemble(c, threads());
    const double worst = *std::max_element(rep.limit_sample.begin(), rep.limit_sample.end());
    bool crossed = true;
    for (const auto& cr : rep.crossings) crossed = crossed && cr && cr->final_crossed;
    report("infinite_endpoint", rep.passed() && crossed && ens < kEnsembleFailureBudget,
           "limit -inf; max final " + fmt(std::round(worst * 1000) / 1000) + " <= " + fmt(kNormalMinBound) +
               "; per-rep P(min > bound) " + sci(p) + ", ensemble " + sci(ens) + " < " + fmt(kEnsembleFailureBudget));
}

void mixture() {
    const auto spec = ProcessSpec::mixture(
        {0.5, 0.5}, {ProcessSpec::iid(Distribution::uniform(0, 1)), ProcessSpec::iid(Distribution::uniform(2, 3))});
    auto c = experiment(spec, RankSchedule::bottom_const(1), kReps200, derive_seed(kSeed, "mixture"));
    c.assertions.max_final_error = kMixtureTolerance;
    c.assertions.regime_fraction = Assertions::RegimeFraction{0, kMixtureFractionLo, kMixtureFractionHi};
    const auto rep = run_ensemble(c, threads());
    bool near_support = true;
    std::size_t near_zero = 0;
    for (double v : rep.limit_sample) {
        const bool z = std::abs(v - 0.0) <= kMixtureTolerance;
        const bool t = std::abs(v - 2.0) <= kMixtureTolerance;
        near_support = near_support && (z || t);
        near_zero += z;
    }
    const double frac = static_cast<double>(near_zero) / static_cast<double>(kReps200);
    const double outside = binomial_half_outside(kReps200, 76, 124);
    report("nonergodic_mixture",
           rep.passed() && near_support && frac >= kMixtureFractionLo && frac <= kMixtureFractionHi,
           "every final within " + sci(kMixtureTolerance) + " of {0, 2}: " + (near_support ? "yes" : "no") +
               "; fraction near 0 = " + fmt(frac) + " in [" + fmt(kMixtureFractionLo) + ", " + fmt(kMixtureFractionHi) +
               "]; P(Binomial(200, 1/2) outside) " + sci(outside));
}

void random_shift() {
    const auto spec = ProcessSpec::shift(ProcessSpec::iid(Distribution::uniform(0, 1)), Distribution::normal(0, 1));
    auto c = experiment(spec, RankSchedule::bottom_const(1), kReps200, derive_seed(kSeed, "shift"));
    c.assertions.ks_max = kShiftKsBound;
    const auto rep = run_ensemble(c, threads());
    const double direct = ks_distance(rep.limit_sample, [](double x) { return standard_normal_cdf(x); });
    report("random_shift", rep.passed() && direct <= kShiftKsBound,
           "KS(final values, N(0,1)) = " + fmt(std::round(direct * 10000) / 10000) + " <= " + fmt(kShiftKsBound) +
               " (1% critical value " + fmt(std::round(1.63 / std::sqrt(200.0) * 1000) / 1000) + ")");
}

void identical_sequence() {
    auto c = experiment(ProcessSpec::identical(Distribution::uniform(0, 1)), RankSchedule::power_low(0.5),
                        kRepsIdentical, derive_seed(kSeed, "identical"));
    c.assertions.exact_checkpoints = true;
    const auto rep = run_ensemble(c, threads());
    std::size_t checked = 0;
    bool exact = true;
    for (const auto& tr : rep.trajectories) {
        for (const auto& p : tr.points) {
            exact = exact && tr.hidden.value && p.value == *tr.hidden.value;
            ++checked;
        }
    }
    report("identical_sequence", rep.passed() && exact && rep.limits_vary,
           std::to_string(checked) + " checkpoint values across " + std::to_string(kRepsIdentical) +
               " replications equal the realized X bit-exactly");
}

void tracker() {
    Rng rng(derive_seed(kSeed, "tracker"));
    std::size_t mismatches = 0;
    std::size_t selects = 0;
    for (std::size_t s = 0; s < kTrackerSequences; ++s) {
        const auto len = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(kTrackerMaxLength)));
        const auto range = rng.uniform_int(1, 40);
        OrderStatTracker t;
        std::vector<double> xs;
        for (std::size_t i = 0; i < len; ++i) {
            const double x = static_cast<double>(rng.uniform_int(-range, range)) * 0.5;
            t.insert(x);
            xs.push_back(x);
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 1; k <= len; ++k) {
            mismatches += t.select(k) != xs[k - 1];
            ++selects;
        }
        mismatches += t.size() != len;
    }
    OrderStatTracker big;
    big.reserve(kTrackerOps / 2);
    double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 1; i <= kTrackerOps / 2; ++i) {
        big.insert(rng.uniform01());
        sink += big.select(1 + (i - 1) / 3);
    }
    const double secs = seconds_since(t0);
    if (secs > kTrackerSoftSeconds) {
        std::printf("  note: tracker throughput above soft bound (%.2f s > %.0f s)\n", secs, kTrackerSoftSeconds);
    }
    report("tracker_oracle", mismatches == 0 && secs < kTrackerHardSeconds && sink > 0.0,
           std::to_string(kTrackerSequences) + " sequences, " + std::to_string(selects) + " selects, " +
               std::to_string(mismatches) + " mismatches; " + std::to_string(kTrackerOps) + " insert+select ops in " +
               fmt(std::round(secs * 100) / 100) + " s (soft " + fmt(kTrackerSoftSeconds) + " s, hard " +
               fmt(kTrackerHardSeconds) + " s)");
}

// A run is flagged when any threshold on the marginal-quantile grid is.
void diagnostics() {
    auto run_flags = [](const ProcessSpec& spec, std::uint64_t base) {
        std::size_t flagged = 0;
        double worst = 0.0;
        for (std::size_t r = 0; r < kDiagRuns; ++r) {
            DiagnoseConfig cfg;
            cfg.process = spec;
            cfg.n = kDiagN;
            cfg.max_lag = kDiagMaxLag;
            cfg.seed = derive_seed(base, r);
            bool any = false;
            for (const auto& rep : diagnose(cfg).reports) {
                any = any || rep.flagged;
                worst = std::max(worst, rep.tail_flatness);
            }
            flagged += any;
        }
        return std::pair{flagged, worst};
    };
    const auto [iid_flagged, iid_worst] =
        run_flags(ProcessSpec::iid(Distribution::uniform(0, 1)), derive_seed(kSeed, "diag-iid"));
    const auto [id_flagged, id_worst] =
        run_flags(ProcessSpec::identical(Distribution::uniform(0, 1)), derive_seed(kSeed, "diag-identical"));
    const std::size_t iid_flat = kDiagRuns - iid_flagged;
    report("diagnostics_calibration", iid_flat >= kDiagIidMinFlat && id_flagged >= kDiagIdenticalMinFlagged,
           "iid flat in " + std::to_string(iid_flat) + "/" + std::to_string(kDiagRuns) + " (max flatness " + sci(iid_worst) +
               "); identical flagged in " + std::to_string(id_flagged) + "/" + std::to_string(kDiagRuns) +
               " at n = " + std::to_string(kDiagN) + ", threshold " + fmt(kTailFlatnessThreshold));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria{finite_suite,         monotone_limit_counterexample,
                                                      iid_uniform_minimum,  iid_uniform_intermediate,
                                                      normal_minimum,       mixture,
                                                      random_shift,         identical_sequence,
                                                      tracker,              diagnostics};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            report("exception", false, e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
