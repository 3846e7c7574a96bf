#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "ostat/io.hpp"

using namespace ostat;
using nlohmann::json;

TEST(ProcessJson, MixtureSchema) {
    const auto j = json::parse(R"({"kind":"mixture","weights":[0.5,0.5],"components":[
        {"kind":"iid","dist":{"family":"uniform","a":0,"b":1}},
        {"kind":"iid","dist":{"family":"uniform","a":2,"b":3}}]})");
    const ProcessSpec s = process_from_json(j);
    EXPECT_EQ(s.kind(), "mixture");
    EXPECT_EQ(to_json(s), j);
}

TEST(ProcessJson, EveryKindRoundTrips) {
    const char* docs[] = {
        R"({"kind":"ar1","phi":0.9,"dist":{"family":"normal","mu":0,"sigma":1}})",
        R"({"kind":"ar1","phi":-0.3,"dist":{"family":"exponential","rate":2},"burn_in":50})",
        R"({"kind":"ma","coeffs":[0.5,0.5],"dist":{"family":"pareto","xm":1,"alpha":3}})",
        R"({"kind":"identical","dist":{"family":"two_point","p":0.25,"v0":0,"v1":1}})",
        R"({"kind":"shift","base":{"kind":"iid","dist":{"family":"uniform","a":0,"b":1}},"shift":{"family":"normal","mu":0,"sigma":1}})",
        R"({"kind":"scale","base":{"kind":"iid","dist":{"family":"uniform","a":1,"b":2}},"scale":{"family":"uniform","a":0,"b":1}})",
    };
    for (const char* d : docs) {
        const auto j = json::parse(d);
        EXPECT_EQ(to_json(process_from_json(j)), j) << d;
    }
}

TEST(ProcessJson, Errors) {
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"walk"})")), ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"iid"})")), ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"iid","dist":{"family":"cauchy"}})")), ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"iid","dist":{"family":"uniform","a":1,"b":0}})")),
                 ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"ar1","phi":1.2,"dist":{"family":"normal"}})")), ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"iid","dist":{"family":"normal"},"extra":1})")), ConfigError);
    EXPECT_THROW(process_from_json(json::parse(R"({"kind":"iid","dist":{"family":"normal","mu":"x"}})")), ConfigError);
}

TEST(ScheduleJson, Kinds) {
    EXPECT_EQ(schedule_from_json(json::parse(R"({"kind":"bottom_const","k":3})")), RankSchedule::bottom_const(3));
    EXPECT_EQ(schedule_from_json(json::parse(R"({"kind":"top_const"})")), RankSchedule::top_const(1));
    EXPECT_EQ(schedule_from_json(json::parse(R"({"kind":"power_low","beta":0.5})")), RankSchedule::power_low(0.5));
    EXPECT_EQ(schedule_from_json(json::parse(R"({"kind":"power_high","beta":0.25})")), RankSchedule::power_high(0.25));
    EXPECT_THROW(schedule_from_json(json::parse(R"({"kind":"power_low","beta":1.5})")), ConfigError);
    EXPECT_THROW(schedule_from_json(json::parse(R"({"kind":"bottom_const","k":-1})")), ConfigError);
    EXPECT_EQ(to_json(RankSchedule::power_high(0.25)), json::parse(R"({"kind":"power_high","beta":0.25})"));
}

TEST(ExperimentJson, ParsesAndValidates) {
    const auto j = json::parse(R"({
        "process":{"kind":"iid","dist":{"family":"uniform","a":0,"b":1}},
        "schedule":{"kind":"power_low","beta":0.5},
        "n_max":1000,"checkpoints":[10,100,1000],"replications":3,"master_seed":9,
        "assertions":{"max_final_error":0.5,"regime_fraction":{"regime":1,"min":0.1,"max":0.9},"sandwich":true}})");
    const auto c = experiment_from_json(j);
    EXPECT_EQ(c.n_max, 1000u);
    EXPECT_EQ(c.checkpoints.size(), 3u);
    EXPECT_EQ(c.replications, 3u);
    EXPECT_EQ(c.master_seed, 9u);
    EXPECT_EQ(*c.assertions.max_final_error, 0.5);
    EXPECT_EQ(c.assertions.regime_fraction->regime, 1u);
    EXPECT_TRUE(c.assertions.sandwich);

    auto bad = j;
    bad["n_max"] = 0;
    EXPECT_THROW(experiment_from_json(bad), ConfigError);
    bad = j;
    bad["n_max"] = -5;
    EXPECT_THROW(experiment_from_json(bad), ConfigError);
    bad = j;
    bad["checkpoints"] = {10, 5000};
    EXPECT_THROW(experiment_from_json(bad), ConfigError);
    bad = j;
    bad["assertions"]["typo"] = 1;
    EXPECT_THROW(experiment_from_json(bad), ConfigError);
}

TEST(DiagnoseJson, DefaultsAndPrecondition) {
    const auto c = diagnose_from_json(json::parse(
        R"({"process":{"kind":"iid","dist":{"family":"uniform","a":0,"b":1}},"n":20000,"max_lag":100})"));
    EXPECT_EQ(c.quantiles.size(), 9u);
    EXPECT_EQ(c.centering, Centering::Reference);
    EXPECT_THROW(diagnose_from_json(json::parse(
                     R"({"process":{"kind":"iid","dist":{"family":"uniform","a":0,"b":1}},"n":1000,"max_lag":100})")),
                 ConfigError);
    EXPECT_THROW(diagnose_from_json(json::parse(
                     R"({"process":{"kind":"iid","dist":{"family":"uniform"}},"centering":"median"})")),
                 ConfigError);
}

TEST(TrajectoryCsv, ColumnsAndInfiniteLiterals) {
    ExperimentConfig c;
    c.process = ProcessSpec::iid(Distribution::normal(0, 1));
    c.n_max = 1000;
    c.checkpoints = {10, 1000};
    c.replications = 2;
    const auto rep = run_ensemble(c);
    std::ostringstream os;
    write_trajectories_csv(os, rep);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "rep,n,k_n,value,limit,regime");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        EXPECT_NE(line.find(",-inf,"), std::string::npos) << line;
        EXPECT_EQ(line.back(), ',') << "empty regime column";
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    }
    EXPECT_EQ(rows, 4);
}

TEST(TrajectoryCsv, RegimeColumnAndPositiveInfinity) {
    ExperimentConfig c;
    c.process = ProcessSpec::mixture(
        {0.5, 0.5}, {ProcessSpec::iid(Distribution::exponential(1)), ProcessSpec::iid(Distribution::uniform(2, 3))});
    c.schedule = RankSchedule::top_const(1);
    c.n_max = 100;
    c.replications = 16;
    const auto rep = run_ensemble(c);
    std::ostringstream os;
    write_trajectories_csv(os, rep);
    const std::string csv = os.str();
    EXPECT_NE(csv.find(",+inf,0\n"), std::string::npos);
    EXPECT_NE(csv.find(",3,1\n"), std::string::npos);
}

TEST(SummaryJson, Contents) {
    ExperimentConfig c;
    c.process = ProcessSpec::iid(Distribution::normal(0, 1));
    c.n_max = 1000;
    c.replications = 2;
    c.assertions.final_value_max = -1.0;
    const auto rep = run_ensemble(c);
    const auto j = summary_json(c, rep);
    EXPECT_EQ(j.at("replications"), 2);
    EXPECT_EQ(j.at("runs").size(), 2u);
    EXPECT_EQ(j.at("runs")[0].at("limit"), "-inf");
    EXPECT_TRUE(j.at("runs")[0].contains("crossing"));
    EXPECT_TRUE(j.at("max_final_error").is_null());
    EXPECT_EQ(j.at("passed"), rep.passed());
    EXPECT_EQ(j.at("assertions").size(), 1u);
}

TEST(AutocovCsv, Columns) {
    DiagnoseConfig c;
    c.process = ProcessSpec::iid(Distribution::uniform(0, 1));
    c.n = 1000;
    c.max_lag = 5;
    c.quantiles = {0.5};
    const auto res = diagnose(c);
    std::ostringstream os;
    write_autocov_csv(os, res);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "x,i,c_hat,S_m");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 5);
    const auto j = diagnose_json(c, res);
    EXPECT_EQ(j.at("label"), "DIAGNOSTIC");
    EXPECT_EQ(j.at("reports")[0].at("lags").size(), 5u);
}
