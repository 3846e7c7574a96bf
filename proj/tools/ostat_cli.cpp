// Command-line front end: verify-finite, simulate, diagnose.
// Exit codes: 0 pass, 1 assertion failure, 2 usage or configuration error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ostat/diagnose.hpp"
#include "ostat/experiment.hpp"
#include "ostat/finite/json.hpp"
#include "ostat/finite/suite.hpp"
#include "ostat/io.hpp"
#include "ostat/rng.hpp"
#include "ostat/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config;
    std::string out = ".";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
};

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ostat::ConfigError("cannot open config " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ostat::ConfigError("cannot parse " + path + ": " + e.what());
    }
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Writes to a sibling temporary and renames it into place.
void write_atomic(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << contents;
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Run {
public:
    Run(std::string subcommand, const Options& opt, const json& config)
        : subcommand_(std::move(subcommand)), opt_(opt), config_(config), start_(std::chrono::steady_clock::now()) {
        fs::create_directories(opt_.out);
    }

    void output(const std::string& name, const std::string& contents) {
        const fs::path p = fs::path(opt_.out) / name;
        write_atomic(p, contents);
        outputs_.push_back(p.string());
    }

    void finish(std::uint64_t seed) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json m;
        m["tool"] = "ostat";
        m["version"] = ostat::kVersion;
        m["subcommand"] = subcommand_;
        m["config_path"] = opt_.config;
        // nlohmann objects keep keys sorted, so this dump ignores key order in the file.
        m["config_hash"] = hex64(ostat::role_id(config_.dump()));
        m["seed"] = seed;
        m["started_at"] = utc_now();
        m["wall_clock_seconds"] = secs;
        m["outputs"] = outputs_;
        write_atomic(fs::path(opt_.out) / "manifest.json", m.dump(2) + "\n");
    }

private:
    std::string subcommand_;
    Options opt_;
    json config_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> outputs_;
};

unsigned thread_count(const Options& opt) {
    if (opt.threads > 0) return opt.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

int verify_finite(const Options& opt) {
    using namespace ostat::finite;
    json cfg = read_config(opt.config);
    if (!cfg.is_object()) throw ostat::ConfigError("verify-finite: config must be an object");
    ostat::io_detail::check_keys(cfg,
                                 {"spaces", "max_outcomes", "seed", "value_range", "zero_mass_rate", "independent_rate",
                                  "mutant", "instances"},
                                 "verify-finite");
    SuiteConfig sc;
    if (cfg.contains("spaces")) sc.spaces = ostat::io_detail::get_count(cfg, "spaces", "verify-finite");
    if (cfg.contains("max_outcomes")) sc.max_outcomes = ostat::io_detail::get_count(cfg, "max_outcomes", "verify-finite");
    if (cfg.contains("seed")) sc.seed = ostat::io_detail::get_count(cfg, "seed", "verify-finite");
    if (opt.seed) {
        sc.seed = *opt.seed;
        cfg["seed"] = *opt.seed;
    }
    sc.value_range = ostat::io_detail::get_or(cfg, "value_range", sc.value_range, "verify-finite");
    sc.zero_mass_rate = ostat::io_detail::get_or(cfg, "zero_mass_rate", sc.zero_mass_rate, "verify-finite");
    sc.independent_rate = ostat::io_detail::get_or(cfg, "independent_rate", sc.independent_rate, "verify-finite");
    if (sc.max_outcomes < 1 || sc.max_outcomes > kBruteForceMaxOutcomes) {
        throw ostat::ConfigError("verify-finite: max_outcomes must lie in [1, " + std::to_string(kBruteForceMaxOutcomes) + "]");
    }
    if (sc.value_range < 0) throw ostat::ConfigError("verify-finite: value_range must be >= 0");

    LeftEndpointFn left(conditional_left_endpoint);
    const auto mutant = ostat::io_detail::get_or<std::string>(cfg, "mutant", "", "verify-finite");
    if (mutant == "max_per_atom") {
        left = LeftEndpointFn(mutant_max_per_atom);
    } else if (!mutant.empty()) {
        throw ostat::ConfigError("verify-finite: unknown mutant \"" + mutant + "\"");
    }

    std::vector<FiniteInstance> user;
    if (cfg.contains("instances")) {
        if (!cfg.at("instances").is_array()) throw ostat::ConfigError("verify-finite: \"instances\" must be an array");
        for (const auto& ij : cfg.at("instances")) {
            try {
                user.push_back(instance_from_json(ij));
            } catch (const std::exception& e) {
                throw ostat::ConfigError(std::string("verify-finite: bad instance: ") + e.what());
            }
        }
    }
    if (sc.spaces == 0 && user.empty()) throw ostat::ConfigError("empty suite");

    Run run("verify-finite", opt, cfg);
    SuiteReport rep = run_finite_suite(sc, left);
    std::size_t user_failed = 0;
    std::optional<FiniteInstance> user_cex;
    std::vector<Violation> user_violations;
    for (const auto& inst : user) {
        auto v = check_instance(inst, left, &rep.checks_by_property);
        if (!v.empty()) {
            ++user_failed;
            if (!user_cex) {
                user_cex = inst;
                user_violations = std::move(v);
            }
        }
    }
    rep.checks = 0;
    for (const auto& [_, k] : rep.checks_by_property) rep.checks += k;
    if (!rep.counterexample && user_cex) {
        rep.counterexample = user_cex;
        rep.violations = user_violations;
    }
    const bool passed = rep.failed_instances == 0 && user_failed == 0;

    json out;
    out["random_instances"] = rep.instances;
    out["user_instances"] = user.size();
    out["checks"] = rep.checks;
    out["checks_by_property"] = rep.checks_by_property;
    out["failed_instances"] = rep.failed_instances + user_failed;
    out["passed"] = passed;
    if (rep.counterexample) {
        out["counterexample"] = to_json(*rep.counterexample);
        json vs = json::array();
        for (const auto& v : rep.violations) vs.push_back({{"property", v.property}, {"detail", v.detail}});
        out["violations"] = vs;
    }
    run.output("finite_report.json", out.dump(2) + "\n");
    run.finish(sc.seed);

    std::cout << "verify-finite: " << (rep.instances + user.size()) << " instances, " << rep.checks << " checks, "
              << (rep.failed_instances + user_failed) << " failing\n";
    if (!passed) {
        std::cout << "counterexample: " << to_json(*rep.counterexample).dump() << '\n';
        for (const auto& v : rep.violations) std::cout << "  " << v.property << ": " << v.detail << '\n';
    }
    return passed ? kExitPass : kExitFail;
}

int simulate(const Options& opt) {
    json cfg = read_config(opt.config);
    if (opt.seed && cfg.is_object()) cfg["master_seed"] = *opt.seed;
    const ostat::ExperimentConfig ec = ostat::experiment_from_json(cfg);
    Run run("simulate", opt, cfg);
    const ostat::ConvergenceReport rep = ostat::run_ensemble(ec, thread_count(opt));

    std::ostringstream csv;
    ostat::write_trajectories_csv(csv, rep);
    run.output("trajectories.csv", csv.str());
    run.output("summary.json", ostat::summary_json(ec, rep).dump(2) + "\n");
    run.finish(ec.master_seed);

    std::cout << "simulate: " << rep.trajectories.size() << " replications, " << ec.schedule.name() << ", n_max "
              << ec.n_max << '\n';
    for (const auto& a : rep.assertions) std::cout << (a.passed ? "  PASS " : "  FAIL ") << a.name << ": " << a.detail << '\n';
    return rep.passed() ? kExitPass : kExitFail;
}

int diagnose(const Options& opt) {
    json cfg = read_config(opt.config);
    if (opt.seed && cfg.is_object()) cfg["seed"] = *opt.seed;
    const ostat::DiagnoseConfig dc = ostat::diagnose_from_json(cfg);
    Run run("diagnose", opt, cfg);
    const ostat::DiagnoseResult res = ostat::diagnose(dc);

    std::ostringstream csv;
    ostat::write_autocov_csv(csv, res);
    run.output("autocov.json", ostat::diagnose_json(dc, res).dump(2) + "\n");
    run.output("autocov.csv", csv.str());
    run.finish(dc.seed);

    std::cout << "diagnose (DIAGNOSTIC, not a test): n " << dc.n << ", max_lag " << dc.max_lag << '\n';
    for (const auto& r : res.reports) {
        std::cout << "  x " << ostat::format_double(r.x) << "  tail_flatness " << ostat::format_double(r.tail_flatness)
                  << (r.flagged ? "  flagged" : "") << '\n';
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order statistic limits and conditional support endpoints"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ostat::kVersion));

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON configuration file")->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--threads", opt.threads, "worker thread cap (0 = hardware)");
        sub->add_option("--seed", opt.seed, "seed override");
    };
    CLI::App* vf = app.add_subcommand("verify-finite", "randomized exact suite for conditional endpoints");
    CLI::App* sim = app.add_subcommand("simulate", "order statistic trajectories and ensemble checks");
    CLI::App* dia = app.add_subcommand("diagnose", "indicator autocovariance summability diagnostic");
    for (auto* s : {vf, sim, dia}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (vf->parsed()) return verify_finite(opt);
        if (sim->parsed()) return simulate(opt);
        return diagnose(opt);
    } catch (const ostat::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return kExitUsage;
    }
}
