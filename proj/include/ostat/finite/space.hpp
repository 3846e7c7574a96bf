#ifndef OSTAT_FINITE_SPACE_HPP
#define OSTAT_FINITE_SPACE_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ostat/extended_real.hpp"
#include "ostat/format.hpp"

namespace ostat::finite {

inline constexpr double kMassTolerance = 1e-12;

/// Finite model of a probability space: one probability per outcome.
///
/// Construction does not validate; use validate_space(). Outcomes of zero
/// probability are allowed and every almost-sure statement in this module
/// quantifies over positive-probability outcomes only.
class FiniteSpace {
public:
    FiniteSpace() = default;
    explicit FiniteSpace(std::vector<double> probs, std::vector<std::string> labels = {})
        : probs_(std::move(probs)), labels_(std::move(labels)) {
        if (!labels_.empty() && labels_.size() != probs_.size()) {
            throw std::invalid_argument("FiniteSpace: label count differs from outcome count");
        }
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double prob(std::size_t i) const { return probs_.at(i); }
    const std::vector<double>& probs() const noexcept { return probs_; }
    bool is_null(std::size_t i) const { return !(probs_.at(i) > 0.0); }

    std::string label(std::size_t i) const {
        return labels_.empty() ? "w" + std::to_string(i + 1) : labels_.at(i);
    }

private:
    std::vector<double> probs_;
    std::vector<std::string> labels_;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    /// Outcome indices carrying zero probability (permitted, but flagged).
    std::vector<std::size_t> zero_mass;
};

inline ValidationReport validate_space(const FiniteSpace& space) {
    ValidationReport rep;
    if (space.size() == 0) {
        rep.ok = false;
        rep.violations.emplace_back("no outcomes");
        return rep;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double p = space.prob(i);
        if (!std::isfinite(p) || p < 0.0) {
            rep.ok = false;
            rep.violations.push_back("outcome " + std::to_string(i + 1) + " has invalid probability " +
                                     format_double(p));
            continue;
        }
        if (p == 0.0) rep.zero_mass.push_back(i);
        sum += p;
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
        rep.ok = false;
        rep.violations.push_back("sum = " + format_double(sum));
    }
    return rep;
}

/// A sigma-field on a finite space, given by its atoms.
class Partition {
public:
    Partition() = default;

    Partition(std::vector<std::vector<std::size_t>> atoms, std::size_t outcome_count)
        : atoms_(std::move(atoms)), atom_of_(outcome_count, kUnassigned) {
        for (std::size_t a = 0; a < atoms_.size(); ++a) {
            if (atoms_[a].empty()) throw std::invalid_argument("Partition: atom " + std::to_string(a) + " is empty");
            for (std::size_t w : atoms_[a]) {
                if (w >= outcome_count) {
                    throw std::invalid_argument("Partition: outcome index " + std::to_string(w) + " out of range");
                }
                if (atom_of_[w] != kUnassigned) {
                    throw std::invalid_argument("Partition: outcome " + std::to_string(w) + " lies in two atoms");
                }
                atom_of_[w] = a;
            }
        }
        for (std::size_t w = 0; w < outcome_count; ++w) {
            if (atom_of_[w] == kUnassigned) {
                throw std::invalid_argument("Partition: outcome " + std::to_string(w) + " is not covered");
            }
        }
    }

    /// The trivial sigma-field {empty, Omega}.
    static Partition trivial(std::size_t n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return Partition({std::move(all)}, n);
    }

    /// The power set: every outcome is its own atom.
    static Partition discrete(std::size_t n) {
        std::vector<std::vector<std::size_t>> atoms(n);
        for (std::size_t i = 0; i < n; ++i) atoms[i] = {i};
        return Partition(std::move(atoms), n);
    }

    /// Outcomes sharing a label share an atom; atoms ordered by first occurrence.
    template <class Label>
    static Partition from_labels(std::span<const Label> labels) {
        std::vector<std::vector<std::size_t>> atoms;
        std::unordered_map<Label, std::size_t> index;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto [it, fresh] = index.try_emplace(labels[i], atoms.size());
            if (fresh) atoms.emplace_back();
            atoms[it->second].push_back(i);
        }
        return Partition(std::move(atoms), labels.size());
    }

    std::size_t atom_count() const noexcept { return atoms_.size(); }
    std::size_t outcome_count() const noexcept { return atom_of_.size(); }
    const std::vector<std::vector<std::size_t>>& atoms() const noexcept { return atoms_; }
    const std::vector<std::size_t>& atom(std::size_t a) const { return atoms_.at(a); }
    std::size_t atom_of(std::size_t outcome) const { return atom_of_.at(outcome); }

private:
    static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> atoms_;
    std::vector<std::size_t> atom_of_;
};

/// A random variable on a finite space, tabulated per outcome.
class TableRV {
public:
    TableRV() = default;
    explicit TableRV(std::vector<ExtendedReal> values) : values_(std::move(values)) {}
    TableRV(std::initializer_list<double> values) : values_(values.begin(), values.end()) {}
    explicit TableRV(const std::vector<double>& values) : values_(values.begin(), values.end()) {}

    static TableRV constant(std::size_t n, ExtendedReal c) { return TableRV(std::vector<ExtendedReal>(n, c)); }

    std::size_t size() const noexcept { return values_.size(); }
    ExtendedReal operator[](std::size_t i) const { return values_[i]; }
    ExtendedReal& operator[](std::size_t i) { return values_[i]; }
    const std::vector<ExtendedReal>& values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const TableRV&, const TableRV&) = default;

    friend TableRV operator-(TableRV x) {
        for (auto& v : x.values_) v = -v;
        return x;
    }
    friend TableRV operator+(TableRV x, const TableRV& y) {
        check_same_size(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) x.values_[i] += y.values_[i];
        return x;
    }
    friend TableRV operator-(TableRV x, const TableRV& y) { return std::move(x) + (-y); }
    friend TableRV operator*(TableRV x, const TableRV& y) {
        check_same_size(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) x.values_[i] *= y.values_[i];
        return x;
    }
    friend TableRV operator*(ExtendedReal a, TableRV x) {
        for (auto& v : x.values_) v *= a;
        return x;
    }
    friend TableRV operator+(TableRV x, ExtendedReal a) {
        for (auto& v : x.values_) v += a;
        return x;
    }

private:
    static void check_same_size(const TableRV& x, const TableRV& y) {
        if (x.size() != y.size()) throw std::invalid_argument("TableRV: size mismatch");
    }

    std::vector<ExtendedReal> values_;
};

namespace detail {

inline void require_same_length(const FiniteSpace& space, const TableRV& rv, const char* what) {
    if (rv.size() != space.size()) {
        throw std::invalid_argument(std::string(what) + ": random variable has " + std::to_string(rv.size()) +
                                    " values for " + std::to_string(space.size()) + " outcomes");
    }
}

inline void require_same_length(const FiniteSpace& space, const Partition& part, const char* what) {
    if (part.outcome_count() != space.size()) {
        throw std::invalid_argument(std::string(what) + ": partition covers " + std::to_string(part.outcome_count()) +
                                    " outcomes, space has " + std::to_string(space.size()));
    }
}

}  // namespace detail

inline double atom_mass(const FiniteSpace& space, const Partition& part, std::size_t a) {
    double m = 0.0;
    for (std::size_t w : part.atom(a)) m += space.prob(w);
    return m;
}

/// Atoms of zero mass. Conditional quantities on them are placeholders.
inline std::vector<std::size_t> null_atoms(const FiniteSpace& space, const Partition& part) {
    detail::require_same_length(space, part, "null_atoms");
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < part.atom_count(); ++a) {
        if (!(atom_mass(space, part, a) > 0.0)) out.push_back(a);
    }
    return out;
}

/// x == y on every positive-probability outcome.
inline bool almost_surely_equal(const FiniteSpace& space, const TableRV& x, const TableRV& y) {
    detail::require_same_length(space, x, "almost_surely_equal");
    detail::require_same_length(space, y, "almost_surely_equal");
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space.is_null(i) && x[i] != y[i]) return false;
    }
    return true;
}

/// x <= y on every positive-probability outcome.
inline bool almost_surely_leq(const FiniteSpace& space, const TableRV& x, const TableRV& y) {
    detail::require_same_length(space, x, "almost_surely_leq");
    detail::require_same_length(space, y, "almost_surely_leq");
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space.is_null(i) && y[i] < x[i]) return false;
    }
    return true;
}

inline bool is_measurable(const FiniteSpace& space, const TableRV& rv, const Partition& part) {
    detail::require_same_length(space, rv, "is_measurable");
    detail::require_same_length(space, part, "is_measurable");
    for (const auto& atom : part.atoms()) {
        bool seen = false;
        ExtendedReal first;
        for (std::size_t w : atom) {
            if (space.is_null(w)) continue;
            if (!seen) {
                first = rv[w];
                seen = true;
            } else if (rv[w] != first) {
                return false;
            }
        }
    }
    return true;
}

/// P(event | G) as a G-measurable table. Zero-mass atoms get the placeholder 0
/// (listed by null_atoms()).
inline TableRV conditional_probability(const FiniteSpace& space, const std::vector<bool>& membership,
                                       const Partition& part) {
    if (membership.size() != space.size()) throw std::invalid_argument("conditional_probability: mask size mismatch");
    detail::require_same_length(space, part, "conditional_probability");
    std::vector<ExtendedReal> out(space.size(), 0.0);
    for (const auto& atom : part.atoms()) {
        double total = 0.0;
        double hit = 0.0;
        for (std::size_t w : atom) {
            total += space.prob(w);
            if (membership[w]) hit += space.prob(w);
        }
        const double value = total > 0.0 ? hit / total : 0.0;
        for (std::size_t w : atom) out[w] = value;
    }
    return TableRV(std::move(out));
}

inline TableRV conditional_probability(const FiniteSpace& space, std::span<const std::size_t> event,
                                       const Partition& part) {
    std::vector<bool> membership(space.size(), false);
    for (std::size_t w : event) {
        if (w >= space.size()) {
            throw std::out_of_range("conditional_probability: event index " + std::to_string(w) + " out of range");
        }
        membership[w] = true;
    }
    return conditional_probability(space, membership, part);
}

/// True iff every value of the conditional probability on positive-mass
/// outcomes is exactly one. Exact equality holds whenever the event contains
/// all positive-mass outcomes of the atom, since the two sums then differ only
/// by zero terms.
inline bool conditionally_certain(const FiniteSpace& space, const std::vector<bool>& membership,
                                  const Partition& part) {
    const TableRV cp = conditional_probability(space, membership, part);
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space.is_null(i) && cp[i] != ExtendedReal(1.0)) return false;
    }
    return true;
}

/// Event {x >= q} as a membership mask.
inline std::vector<bool> event_geq(const TableRV& x, const TableRV& q) {
    if (x.size() != q.size()) throw std::invalid_argument("event_geq: size mismatch");
    std::vector<bool> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = x[i] >= q[i];
    return m;
}

/// Independence of rv and the sigma-field, via factorization of joint masses
/// P(A and {X = x}) = P(A) P(X = x) for every atom A and value x.
inline bool is_independent(const FiniteSpace& space, const TableRV& rv, const Partition& part,
                           double tol = kMassTolerance) {
    detail::require_same_length(space, rv, "is_independent");
    detail::require_same_length(space, part, "is_independent");
    std::vector<ExtendedReal> values;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (space.is_null(i)) continue;
        bool known = false;
        for (auto v : values) known = known || v == rv[i];
        if (!known) values.push_back(rv[i]);
    }
    for (auto v : values) {
        double pv = 0.0;
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (rv[i] == v) pv += space.prob(i);
        }
        for (std::size_t a = 0; a < part.atom_count(); ++a) {
            double joint = 0.0;
            for (std::size_t w : part.atom(a)) {
                if (rv[w] == v) joint += space.prob(w);
            }
            if (std::abs(joint - atom_mass(space, part, a) * pv) > tol) return false;
        }
    }
    return true;
}

}  // namespace ostat::finite

#endif  // OSTAT_FINITE_SPACE_HPP
