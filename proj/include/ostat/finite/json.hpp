#ifndef OSTAT_FINITE_JSON_HPP
#define OSTAT_FINITE_JSON_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ostat/extended_real.hpp"
#include "ostat/finite/suite.hpp"

namespace ostat {

inline nlohmann::json to_json_value(ExtendedReal x) {
    if (x.is_neg_inf()) return "-inf";
    if (x.is_pos_inf()) return "+inf";
    return x.value();
}

inline ExtendedReal extended_real_from_json(const nlohmann::json& j) {
    if (j.is_number()) return ExtendedReal(j.get<double>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "-inf") return ExtendedReal::neg_inf();
        if (s == "+inf" || s == "inf") return ExtendedReal::pos_inf();
    }
    throw std::invalid_argument("expected a number or \"-inf\"/\"+inf\", got " + j.dump());
}

namespace finite {

/// {"probs":[...], "atoms":[[...],...], "rvs":{"name":[...]}} with
/// zero-based outcome indices in "atoms".
inline nlohmann::json to_json(const FiniteInstance& inst) {
    nlohmann::json j;
    j["probs"] = inst.space.probs();
    j["atoms"] = inst.part.atoms();
    nlohmann::json rvs = nlohmann::json::object();
    for (const auto& [name, rv] : inst.rvs) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto v : rv) arr.push_back(to_json_value(v));
        rvs[name] = std::move(arr);
    }
    j["rvs"] = std::move(rvs);
    return j;
}

inline nlohmann::json to_json(const TableRV& rv) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto v : rv) arr.push_back(to_json_value(v));
    return arr;
}

inline FiniteInstance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("probs")) throw std::invalid_argument("finite instance: missing \"probs\"");
    FiniteInstance inst;
    inst.space = FiniteSpace(j.at("probs").get<std::vector<double>>());
    const auto n = inst.space.size();
    if (j.contains("atoms")) {
        inst.part = Partition(j.at("atoms").get<std::vector<std::vector<std::size_t>>>(), n);
    } else {
        inst.part = Partition::trivial(n);
    }
    if (j.contains("rvs")) {
        for (const auto& [name, arr] : j.at("rvs").items()) {
            std::vector<ExtendedReal> vals;
            for (const auto& v : arr) vals.push_back(extended_real_from_json(v));
            if (vals.size() != n) {
                throw std::invalid_argument("finite instance: rv \"" + name + "\" has " + std::to_string(vals.size()) +
                                            " values for " + std::to_string(n) + " outcomes");
            }
            inst.rvs.emplace(name, TableRV(std::move(vals)));
        }
    }
    return inst;
}

}  // namespace finite
}  // namespace ostat

#endif  // OSTAT_FINITE_JSON_HPP
