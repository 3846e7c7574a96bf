#ifndef OSTAT_DIAGNOSE_HPP
#define OSTAT_DIAGNOSE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ostat/diagnostics.hpp"
#include "ostat/law.hpp"
#include "ostat/process.hpp"

namespace ostat {

enum class Centering { Reference, Empirical };

struct DiagnoseConfig {
    ProcessSpec process;
    std::size_t n = 100000;
    std::size_t max_lag = 1000;
    std::uint64_t seed = 0;
    std::vector<double> quantiles{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> x_grid;  // overrides quantiles when non-empty
    Centering centering = Centering::Reference;
};

struct DiagnoseResult {
    bool reference_available = false;
    std::vector<AutocovReport> reports;
};

inline void validate(const DiagnoseConfig& cfg) {
    validate(cfg.process);
    if (cfg.max_lag < 1) throw std::invalid_argument("DiagnoseConfig: max_lag must be >= 1");
    if (cfg.max_lag * 10 >= cfg.n) throw std::invalid_argument("DiagnoseConfig: max_lag must be below n/10");
    if (cfg.x_grid.empty() && cfg.quantiles.empty()) throw std::invalid_argument("DiagnoseConfig: empty x grid");
    for (double q : cfg.quantiles) {
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("DiagnoseConfig: quantiles must lie in (0, 1)");
    }
}

/// Simulates one path of length n and runs the summability diagnostic per
/// threshold. With reference centering and a known marginal law, thresholds
/// are marginal quantiles and c_hat is centered on the true F(x); otherwise
/// both come from the sample.
inline DiagnoseResult diagnose(const DiagnoseConfig& cfg) {
    validate(cfg);
    ProcessStream stream = make_stream(cfg.process, cfg.seed);
    std::vector<double> xs(cfg.n);
    for (double& v : xs) v = stream.next();

    const std::optional<Law> marginal =
        cfg.centering == Centering::Reference ? marginal_law(cfg.process) : std::optional<Law>{};
    DiagnoseResult out;
    out.reference_available = marginal.has_value();

    std::vector<double> grid = cfg.x_grid;
    if (grid.empty()) {
        for (double q : cfg.quantiles) grid.push_back(marginal ? marginal->quantile(q) : empirical_quantile(xs, q));
    }
    for (double x : grid) {
        std::optional<double> ref;
        if (marginal) ref = marginal->cdf(x);
        out.reports.push_back(summability_diagnostic(xs, x, cfg.max_lag, ref));
    }
    return out;
}

}  // namespace ostat

#endif  // OSTAT_DIAGNOSE_HPP
