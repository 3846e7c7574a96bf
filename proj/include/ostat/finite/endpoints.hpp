#ifndef OSTAT_FINITE_ENDPOINTS_HPP
#define OSTAT_FINITE_ENDPOINTS_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ostat/extended_real.hpp"
#include "ostat/finite/space.hpp"

namespace ostat::finite {

struct Endpoints {
    ExtendedReal left;
    ExtendedReal right;

    friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

namespace detail {

inline void require_finite_on_support(const FiniteSpace& space, const TableRV& rv, const char* what) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space.is_null(i) && !rv[i].is_finite()) {
            throw std::invalid_argument(std::string(what) + ": random variable takes a non-finite value on outcome " +
                                        std::to_string(i + 1));
        }
    }
}

}  // namespace detail

/// Left and right endpoints of the support: min and max over positive-mass outcomes.
inline Endpoints unconditional_endpoints(const FiniteSpace& space, const TableRV& rv) {
    detail::require_same_length(space, rv, "unconditional_endpoints");
    detail::require_finite_on_support(space, rv, "unconditional_endpoints");
    bool any = false;
    Endpoints e{ExtendedReal::pos_inf(), ExtendedReal::neg_inf()};
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (space.is_null(i)) continue;
        any = true;
        e.left = min(e.left, rv[i]);
        e.right = max(e.right, rv[i]);
    }
    if (!any) throw std::domain_error("unconditional_endpoints: every outcome has zero probability");
    return e;
}

/// Conditional left endpoint of the support of rv given the atoms of part:
/// on each positive-mass atom the minimum of rv over its positive-mass
/// outcomes. Zero-mass atoms carry the placeholder -inf.
inline TableRV conditional_left_endpoint(const FiniteSpace& space, const TableRV& rv, const Partition& part) {
    detail::require_same_length(space, rv, "conditional_left_endpoint");
    detail::require_same_length(space, part, "conditional_left_endpoint");
    detail::require_finite_on_support(space, rv, "conditional_left_endpoint");
    std::vector<ExtendedReal> out(space.size(), ExtendedReal::neg_inf());
    for (const auto& atom : part.atoms()) {
        ExtendedReal lo = ExtendedReal::pos_inf();
        bool any = false;
        for (std::size_t w : atom) {
            if (space.is_null(w)) continue;
            any = true;
            lo = min(lo, rv[w]);
        }
        if (!any) continue;
        for (std::size_t w : atom) out[w] = lo;
    }
    return TableRV(std::move(out));
}

/// Conditional right endpoint, by reflection: right(X) = -left(-X).
/// Zero-mass atoms therefore carry the placeholder +inf.
inline TableRV conditional_right_endpoint(const FiniteSpace& space, const TableRV& rv, const Partition& part) {
    return -conditional_left_endpoint(space, -rv, part);
}

/// Essential supremum of a finite family: the pointwise maximum.
inline TableRV essential_supremum(const FiniteSpace& space, std::span<const TableRV> family) {
    if (family.empty()) throw std::invalid_argument("essential_supremum: empty family");
    for (const auto& x : family) detail::require_same_length(space, x, "essential_supremum");
    TableRV out = family.front();
    for (const auto& x : family.subspan(1)) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = max(out[i], x[i]);
    }
    return out;
}

inline constexpr std::size_t kBruteForceMaxOutcomes = 12;

namespace detail {

// Candidate values for a dominated Q: the value set of rv plus -inf.
inline std::vector<ExtendedReal> candidate_values(const TableRV& rv) {
    std::vector<ExtendedReal> vals(rv.begin(), rv.end());
    vals.push_back(ExtendedReal::neg_inf());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

}  // namespace detail

/// Oracle for conditional_left_endpoint built from the definition.
///
/// Enumerates G-measurable extended rvs Q with values in the value set of rv
/// plus -inf, keeps every Q with P(X >= Q | G) = 1 a.s. and returns the
/// essential supremum of the kept family. The family is closed under
/// pointwise max and each member is the max of its restrictions to single
/// atoms (with -inf elsewhere), so enumerating those single-atom members
/// yields the same essential supremum as the full product; the exhaustive
/// variant below checks that on tiny instances.
inline TableRV brute_force_conditional_left_endpoint(const FiniteSpace& space, const TableRV& rv,
                                                     const Partition& part) {
    detail::require_same_length(space, rv, "brute_force_conditional_left_endpoint");
    detail::require_same_length(space, part, "brute_force_conditional_left_endpoint");
    if (space.size() > kBruteForceMaxOutcomes) {
        throw std::length_error("brute_force_conditional_left_endpoint: " + std::to_string(space.size()) +
                                " outcomes exceeds the oracle limit of " +
                                std::to_string(kBruteForceMaxOutcomes));
    }
    detail::require_finite_on_support(space, rv, "brute_force_conditional_left_endpoint");

    const auto values = detail::candidate_values(rv);
    std::vector<TableRV> dominated;
    dominated.push_back(TableRV::constant(space.size(), ExtendedReal::neg_inf()));
    for (const auto& atom : part.atoms()) {
        for (auto v : values) {
            TableRV q = TableRV::constant(space.size(), ExtendedReal::neg_inf());
            for (std::size_t w : atom) q[w] = v;
            if (conditionally_certain(space, event_geq(rv, q), part)) dominated.push_back(std::move(q));
        }
    }
    return essential_supremum(space, dominated);
}

inline constexpr std::size_t kExhaustiveMaxCandidates = std::size_t{1} << 20;

/// Same oracle over the full product of per-atom candidate values.
/// Exponential in the atom count; refuses more than kExhaustiveMaxCandidates.
inline TableRV brute_force_conditional_left_endpoint_exhaustive(const FiniteSpace& space, const TableRV& rv,
                                                                const Partition& part) {
    detail::require_same_length(space, rv, "brute_force_conditional_left_endpoint_exhaustive");
    detail::require_same_length(space, part, "brute_force_conditional_left_endpoint_exhaustive");
    detail::require_finite_on_support(space, rv, "brute_force_conditional_left_endpoint_exhaustive");
    const auto values = detail::candidate_values(rv);
    const std::size_t atoms = part.atom_count();
    std::size_t total = 1;
    for (std::size_t a = 0; a < atoms; ++a) {
        if (total > kExhaustiveMaxCandidates / values.size()) {
            throw std::length_error("brute_force_conditional_left_endpoint_exhaustive: candidate family too large");
        }
        total *= values.size();
    }

    std::vector<std::size_t> digit(atoms, 0);
    std::vector<TableRV> dominated;
    for (std::size_t c = 0; c < total; ++c) {
        TableRV q(std::vector<ExtendedReal>(space.size()));
        for (std::size_t a = 0; a < atoms; ++a) {
            for (std::size_t w : part.atom(a)) q[w] = values[digit[a]];
        }
        if (conditionally_certain(space, event_geq(rv, q), part)) dominated.push_back(std::move(q));
        for (std::size_t a = 0; a < atoms; ++a) {
            if (++digit[a] < values.size()) break;
            digit[a] = 0;
        }
    }
    return essential_supremum(space, dominated);
}

}  // namespace ostat::finite

#endif  // OSTAT_FINITE_ENDPOINTS_HPP
