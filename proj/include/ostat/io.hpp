#ifndef OSTAT_IO_HPP
#define OSTAT_IO_HPP

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ostat/diagnose.hpp"
#include "ostat/distribution.hpp"
#include "ostat/experiment.hpp"
#include "ostat/finite/json.hpp"
#include "ostat/format.hpp"
#include "ostat/process.hpp"
#include "ostat/rank_schedule.hpp"

namespace ostat {

/// Malformed or semantically invalid configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io_detail {

using nlohmann::json;

inline void require_object(const json& j, std::string_view where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object, got " + j.dump());
}

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    require_object(j, where);
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

template <class T>
T get(const json& j, std::string_view key, std::string_view where) {
    const std::string k(key);
    if (!j.contains(k)) throw ConfigError(std::string(where) + ": missing \"" + k + "\"");
    try {
        return j.at(k).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + ": bad \"" + k + "\": " + e.what());
    }
}

template <class T>
T get_or(const json& j, std::string_view key, T fallback, std::string_view where) {
    return j.contains(std::string(key)) ? get<T>(j, key, where) : fallback;
}

/// Unsigned integers must be given as non-negative JSON integers.
inline std::uint64_t get_count(const json& j, std::string_view key, std::string_view where) {
    const std::string k(key);
    if (!j.contains(k)) throw ConfigError(std::string(where) + ": missing \"" + k + "\"");
    const auto& v = j.at(k);
    if (!v.is_number_unsigned()) throw ConfigError(std::string(where) + ": \"" + k + "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

template <class F>
auto wrap(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace io_detail

inline Distribution distribution_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    require_object(j, "dist");
    const auto family = get<std::string>(j, "family", "dist");
    return wrap([&] {
        if (family == "uniform") {
            check_keys(j, {"family", "a", "b"}, "uniform");
            return Distribution::uniform(get_or(j, "a", 0.0, "uniform"), get_or(j, "b", 1.0, "uniform"));
        }
        if (family == "exponential") {
            check_keys(j, {"family", "rate"}, "exponential");
            return Distribution::exponential(get_or(j, "rate", 1.0, "exponential"));
        }
        if (family == "normal") {
            check_keys(j, {"family", "mu", "sigma"}, "normal");
            return Distribution::normal(get_or(j, "mu", 0.0, "normal"), get_or(j, "sigma", 1.0, "normal"));
        }
        if (family == "pareto") {
            check_keys(j, {"family", "xm", "alpha"}, "pareto");
            return Distribution::pareto(get_or(j, "xm", 1.0, "pareto"), get<double>(j, "alpha", "pareto"));
        }
        if (family == "two_point") {
            check_keys(j, {"family", "p", "v0", "v1"}, "two_point");
            return Distribution::two_point(get<double>(j, "p", "two_point"), get_or(j, "v0", 0.0, "two_point"),
                                           get_or(j, "v1", 1.0, "two_point"));
        }
        throw ConfigError("dist: unknown family \"" + family + "\"");
    });
}

inline nlohmann::json to_json(const Distribution& d) {
    nlohmann::json j;
    j["family"] = d.family_name();
    std::visit(
        [&](const auto& f) {
            using D = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<D, Uniform>) {
                j["a"] = f.a;
                j["b"] = f.b;
            } else if constexpr (std::is_same_v<D, Exponential>) {
                j["rate"] = f.rate;
            } else if constexpr (std::is_same_v<D, Normal>) {
                j["mu"] = f.mu;
                j["sigma"] = f.sigma;
            } else if constexpr (std::is_same_v<D, Pareto>) {
                j["xm"] = f.xm;
                j["alpha"] = f.alpha;
            } else {
                j["p"] = f.p;
                j["v0"] = f.v0;
                j["v1"] = f.v1;
            }
        },
        d.family());
    return j;
}

inline ProcessSpec process_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    require_object(j, "process");
    const auto kind = get<std::string>(j, "kind", "process");
    ProcessSpec s = wrap([&]() -> ProcessSpec {
        if (kind == "iid") {
            check_keys(j, {"kind", "dist"}, "iid");
            return ProcessSpec::iid(distribution_from_json(get<nlohmann::json>(j, "dist", "iid")));
        }
        if (kind == "ar1") {
            check_keys(j, {"kind", "phi", "dist", "burn_in"}, "ar1");
            std::optional<std::uint64_t> burn;
            if (j.contains("burn_in")) burn = get_count(j, "burn_in", "ar1");
            return ProcessSpec::ar1(get<double>(j, "phi", "ar1"), distribution_from_json(get<nlohmann::json>(j, "dist", "ar1")),
                                    burn);
        }
        if (kind == "ma") {
            check_keys(j, {"kind", "coeffs", "dist"}, "ma");
            return ProcessSpec::moving_average(get<std::vector<double>>(j, "coeffs", "ma"),
                                               distribution_from_json(get<nlohmann::json>(j, "dist", "ma")));
        }
        if (kind == "identical") {
            check_keys(j, {"kind", "dist"}, "identical");
            return ProcessSpec::identical(distribution_from_json(get<nlohmann::json>(j, "dist", "identical")));
        }
        if (kind == "mixture") {
            check_keys(j, {"kind", "weights", "components"}, "mixture");
            std::vector<ProcessSpec> comps;
            const auto arr = get<nlohmann::json>(j, "components", "mixture");
            if (!arr.is_array()) throw ConfigError("mixture: \"components\" must be an array");
            for (const auto& c : arr) comps.push_back(process_from_json(c));
            return ProcessSpec::mixture(get<std::vector<double>>(j, "weights", "mixture"), std::move(comps));
        }
        if (kind == "shift") {
            check_keys(j, {"kind", "base", "shift"}, "shift");
            return ProcessSpec::shift(process_from_json(get<nlohmann::json>(j, "base", "shift")),
                                      distribution_from_json(get<nlohmann::json>(j, "shift", "shift")));
        }
        if (kind == "scale") {
            check_keys(j, {"kind", "base", "scale"}, "scale");
            return ProcessSpec::scale(process_from_json(get<nlohmann::json>(j, "base", "scale")),
                                      distribution_from_json(get<nlohmann::json>(j, "scale", "scale")));
        }
        throw ConfigError("process: unknown kind \"" + kind + "\"");
    });
    wrap([&] {
        validate(s);
        return 0;
    });
    return s;
}

inline nlohmann::json to_json(const ProcessSpec& s) {
    nlohmann::json j;
    j["kind"] = s.kind();
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, spec::Iid> || std::is_same_v<N, spec::Identical>) {
                j["dist"] = to_json(n.dist);
            } else if constexpr (std::is_same_v<N, spec::Ar1>) {
                j["phi"] = n.phi;
                j["dist"] = to_json(n.innovation);
                if (n.burn_in) j["burn_in"] = *n.burn_in;
            } else if constexpr (std::is_same_v<N, spec::MovingAverage>) {
                j["coeffs"] = n.coeffs;
                j["dist"] = to_json(n.innovation);
            } else if constexpr (std::is_same_v<N, spec::Mixture>) {
                j["weights"] = n.weights;
                j["components"] = nlohmann::json::array();
                for (const auto& c : n.components) j["components"].push_back(to_json(c));
            } else if constexpr (std::is_same_v<N, spec::Shift>) {
                j["base"] = to_json(*n.base);
                j["shift"] = to_json(n.shift);
            } else {
                j["base"] = to_json(*n.base);
                j["scale"] = to_json(n.scale);
            }
        },
        s.node);
    return j;
}

inline RankSchedule schedule_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    require_object(j, "schedule");
    const auto kind = get<std::string>(j, "kind", "schedule");
    return wrap([&] {
        if (kind == "bottom_const") {
            check_keys(j, {"kind", "k"}, "bottom_const");
            return RankSchedule::bottom_const(j.contains("k") ? get_count(j, "k", "bottom_const") : 1);
        }
        if (kind == "top_const") {
            check_keys(j, {"kind", "j"}, "top_const");
            return RankSchedule::top_const(j.contains("j") ? get_count(j, "j", "top_const") : 1);
        }
        if (kind == "power_low") {
            check_keys(j, {"kind", "beta"}, "power_low");
            return RankSchedule::power_low(get<double>(j, "beta", "power_low"));
        }
        if (kind == "power_high") {
            check_keys(j, {"kind", "beta"}, "power_high");
            return RankSchedule::power_high(get<double>(j, "beta", "power_high"));
        }
        throw ConfigError("schedule: unknown kind \"" + kind + "\"");
    });
}

inline nlohmann::json to_json(const RankSchedule& r) {
    nlohmann::json j;
    switch (r.kind()) {
        case RankSchedule::Kind::BottomConst: j = {{"kind", "bottom_const"}, {"k", r.offset()}}; break;
        case RankSchedule::Kind::TopConst: j = {{"kind", "top_const"}, {"j", r.offset()}}; break;
        case RankSchedule::Kind::PowerLow: j = {{"kind", "power_low"}, {"beta", r.beta()}}; break;
        case RankSchedule::Kind::PowerHigh: j = {{"kind", "power_high"}, {"beta", r.beta()}}; break;
    }
    return j;
}

inline Assertions assertions_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    check_keys(j,
               {"max_final_error", "final_value_max", "final_value_min", "ks_max", "regime_fraction",
                "exact_checkpoints", "sandwich"},
               "assertions");
    Assertions a;
    auto opt = [&](const char* key, std::optional<double>& dst) {
        if (j.contains(key)) dst = get<double>(j, key, "assertions");
    };
    opt("max_final_error", a.max_final_error);
    opt("final_value_max", a.final_value_max);
    opt("final_value_min", a.final_value_min);
    opt("ks_max", a.ks_max);
    if (j.contains("regime_fraction")) {
        const auto& r = j.at("regime_fraction");
        check_keys(r, {"regime", "min", "max"}, "regime_fraction");
        a.regime_fraction = Assertions::RegimeFraction{static_cast<std::size_t>(get_count(r, "regime", "regime_fraction")),
                                                       get_or(r, "min", 0.0, "regime_fraction"),
                                                       get_or(r, "max", 1.0, "regime_fraction")};
    }
    a.exact_checkpoints = get_or(j, "exact_checkpoints", false, "assertions");
    a.sandwich = get_or(j, "sandwich", false, "assertions");
    return a;
}

/// {"process":..., "schedule":..., "n_max":N, "checkpoints":[...],
///  "replications":R, "master_seed":S, "assertions":{...}}
inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    check_keys(j, {"process", "schedule", "n_max", "checkpoints", "replications", "master_seed", "assertions"},
               "experiment");
    ExperimentConfig c;
    c.process = process_from_json(get<nlohmann::json>(j, "process", "experiment"));
    if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));
    c.n_max = get_count(j, "n_max", "experiment");
    if (j.contains("checkpoints")) c.checkpoints = get<std::vector<std::uint64_t>>(j, "checkpoints", "experiment");
    c.replications = j.contains("replications") ? get_count(j, "replications", "experiment") : 1;
    c.master_seed = j.contains("master_seed") ? get_count(j, "master_seed", "experiment") : 0;
    if (j.contains("assertions")) c.assertions = assertions_from_json(j.at("assertions"));
    wrap([&] {
        validate(c);
        return 0;
    });
    return c;
}

/// {"process":..., "n":N, "max_lag":L, "seed":S, "quantiles":[...] | "x_grid":[...],
///  "centering":"reference"|"empirical"}
inline DiagnoseConfig diagnose_from_json(const nlohmann::json& j) {
    using namespace io_detail;
    check_keys(j, {"process", "n", "max_lag", "seed", "quantiles", "x_grid", "centering"}, "diagnose");
    DiagnoseConfig c;
    c.process = process_from_json(get<nlohmann::json>(j, "process", "diagnose"));
    if (j.contains("n")) c.n = get_count(j, "n", "diagnose");
    if (j.contains("max_lag")) c.max_lag = get_count(j, "max_lag", "diagnose");
    if (j.contains("seed")) c.seed = get_count(j, "seed", "diagnose");
    if (j.contains("quantiles")) c.quantiles = get<std::vector<double>>(j, "quantiles", "diagnose");
    if (j.contains("x_grid")) c.x_grid = get<std::vector<double>>(j, "x_grid", "diagnose");
    const auto centering = get_or<std::string>(j, "centering", "reference", "diagnose");
    if (centering == "reference") c.centering = Centering::Reference;
    else if (centering == "empirical") c.centering = Centering::Empirical;
    else throw ConfigError("diagnose: centering must be \"reference\" or \"empirical\"");
    wrap([&] {
        validate(c);
        return 0;
    });
    return c;
}

inline constexpr std::string_view kTrajectoryCsvHeader = "rep,n,k_n,value,limit,regime";

/// One row per (replication, checkpoint); regime is empty for single-regime
/// processes.
inline void write_trajectories_csv(std::ostream& os, const ConvergenceReport& rep) {
    os << kTrajectoryCsvHeader << '\n';
    for (const auto& tr : rep.trajectories) {
        const std::string limit = tr.limit.to_string();
        const std::string regime = tr.hidden.regime ? std::to_string(*tr.hidden.regime) : "";
        for (const auto& p : tr.points) {
            os << tr.replication << ',' << p.n << ',' << p.k << ',' << format_double(p.value) << ',' << limit << ','
               << regime << '\n';
        }
    }
}

inline nlohmann::json summary_json(const ExperimentConfig& cfg, const ConvergenceReport& rep) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["process"] = to_json(cfg.process);
    j["schedule"] = to_json(cfg.schedule);
    j["lambda"] = rep.lambda;
    j["n_max"] = cfg.n_max;
    j["replications"] = cfg.replications;
    j["master_seed"] = cfg.master_seed;
    j["max_final_error"] = opt(rep.max_final_error);
    j["median_final_error"] = opt(rep.median_final_error);
    j["limits_vary"] = rep.limits_vary;
    j["ks_distance"] = opt(rep.ks_distance);
    json counts = json::object();
    for (const auto& [r, c] : rep.regime_counts) counts[std::to_string(r)] = c;
    j["regime_counts"] = counts;
    json runs = json::array();
    for (std::size_t i = 0; i < rep.trajectories.size(); ++i) {
        const auto& tr = rep.trajectories[i];
        json r;
        r["rep"] = tr.replication;
        r["seed"] = tr.seed;
        r["limit"] = to_json_value(tr.limit);
        r["final_value"] = tr.final_value();
        r["final_error"] = opt(rep.final_errors[i]);
        if (rep.crossings[i]) {
            const auto& c = *rep.crossings[i];
            r["crossing"] = {{"threshold", c.threshold},
                             {"first_n", c.first_n ? json(*c.first_n) : json(nullptr)},
                             {"final_crossed", c.final_crossed}};
        }
        json h = json::object();
        if (tr.hidden.regime) h["regime"] = *tr.hidden.regime;
        if (tr.hidden.shift) h["shift"] = *tr.hidden.shift;
        if (tr.hidden.scale) h["scale"] = *tr.hidden.scale;
        if (tr.hidden.value) h["value"] = *tr.hidden.value;
        r["hidden"] = h;
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    json as = json::array();
    for (const auto& a : rep.assertions) as.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    j["assertions"] = std::move(as);
    j["passed"] = rep.passed();
    return j;
}

inline void write_autocov_csv(std::ostream& os, const DiagnoseResult& res) {
    os << "x,i,c_hat,S_m\n";
    for (const auto& r : res.reports) {
        const std::string x = format_double(r.x);
        for (const auto& l : r.lags) {
            os << x << ',' << l.lag << ',' << format_double(l.c_hat) << ',' << format_double(l.partial_sum) << '\n';
        }
    }
}

inline nlohmann::json diagnose_json(const DiagnoseConfig& cfg, const DiagnoseResult& res) {
    using nlohmann::json;
    json j;
    j["label"] = "DIAGNOSTIC";
    j["note"] =
        "bounded partial sums do not prove summability; tail movement above the threshold only flags divergence-like growth";
    j["process"] = to_json(cfg.process);
    j["n"] = cfg.n;
    j["max_lag"] = cfg.max_lag;
    j["seed"] = cfg.seed;
    j["centering"] = res.reference_available ? "reference" : "empirical";
    j["threshold"] = kTailFlatnessThreshold;
    json reports = json::array();
    for (const auto& r : res.reports) {
        json lags = json::array();
        for (const auto& l : r.lags) lags.push_back({{"i", l.lag}, {"c_hat", l.c_hat}, {"S_m", l.partial_sum}});
        reports.push_back({{"x", r.x},
                           {"reference_cdf", r.reference_cdf ? json(*r.reference_cdf) : json(nullptr)},
                           {"tail_flatness", r.tail_flatness},
                           {"flagged", r.flagged},
                           {"lags", std::move(lags)}});
    }
    j["reports"] = std::move(reports);
    return j;
}

}  // namespace ostat

#endif  // OSTAT_IO_HPP
