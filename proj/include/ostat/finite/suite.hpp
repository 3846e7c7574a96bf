#ifndef OSTAT_FINITE_SUITE_HPP
#define OSTAT_FINITE_SUITE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ostat/finite/endpoints.hpp"
#include "ostat/finite/space.hpp"
#include "ostat/rng.hpp"

namespace ostat::finite {

/// A space, a sigma-field and named random variables on it.
///
/// check_instance() runs the single-variable properties on every rv. The
/// rv named "X" is the subject of the multi-variable properties, which use
/// these optional helpers when present:
///   "Ym"  a G-measurable rv            "Vm"  a non-negative G-measurable rv
///   "D1", "D2"  non-negative rvs       "F1"  an arbitrary family member
struct FiniteInstance {
    FiniteSpace space;
    Partition part;
    std::map<std::string, TableRV> rvs;
};

struct Violation {
    std::string property;
    std::string detail;
};

using LeftEndpointFn = std::function<TableRV(const FiniteSpace&, const TableRV&, const Partition&)>;

/// Deliberately wrong fast path (per-atom max instead of min) for mutation checks.
inline TableRV mutant_max_per_atom(const FiniteSpace& space, const TableRV& rv, const Partition& part) {
    return conditional_right_endpoint(space, rv, part);
}

namespace detail {

inline TableRV per_atom_max_direct(const FiniteSpace& space, const TableRV& rv, const Partition& part) {
    TableRV out = TableRV::constant(space.size(), ExtendedReal::pos_inf());
    for (const auto& atom : part.atoms()) {
        bool any = false;
        ExtendedReal hi = ExtendedReal::neg_inf();
        for (std::size_t w : atom) {
            if (space.is_null(w)) continue;
            any = true;
            if (hi < rv[w]) hi = rv[w];
        }
        if (any) {
            for (std::size_t w : atom) out[w] = hi;
        }
    }
    return out;
}

inline std::optional<ExtendedReal> as_constant(const FiniteSpace& space, const TableRV& x) {
    std::optional<ExtendedReal> c;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (space.is_null(i)) continue;
        if (!c) {
            c = x[i];
        } else if (*c != x[i]) {
            return std::nullopt;
        }
    }
    return c;
}

inline bool nonneg_as(const FiniteSpace& space, const TableRV& x) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space.is_null(i) && x[i] < ExtendedReal(0.0)) return false;
    }
    return true;
}

class Checker {
public:
    Checker(const FiniteInstance& inst, const LeftEndpointFn& left, std::vector<Violation>& out,
            std::map<std::string, std::size_t>& counts)
        : inst_(inst), left_(left), out_(out), counts_(counts) {}

    void expect(bool ok, const std::string& property, const std::string& detail) {
        ++counts_[property];
        if (!ok) out_.push_back({property, detail});
    }

    const FiniteSpace& space() const { return inst_.space; }
    const Partition& part() const { return inst_.part; }
    TableRV left(const TableRV& x) const { return left_(inst_.space, x, inst_.part); }
    TableRV left(const TableRV& x, const Partition& p) const { return left_(inst_.space, x, p); }
    const TableRV* rv(const std::string& name) const {
        auto it = inst_.rvs.find(name);
        return it == inst_.rvs.end() ? nullptr : &it->second;
    }

private:
    const FiniteInstance& inst_;
    const LeftEndpointFn& left_;
    std::vector<Violation>& out_;
    std::map<std::string, std::size_t>& counts_;
};

inline void check_single(Checker& c, const std::string& name, const TableRV& x) {
    const auto& sp = c.space();
    const auto& part = c.part();
    const std::string tag = " [" + name + "]";
    const TableRV g0 = c.left(x);
    const TableRV constant_unc = TableRV::constant(sp.size(), unconditional_endpoints(sp, x).left);

    c.expect(is_measurable(sp, g0, part), "measurable_attained", "left endpoint not G-measurable" + tag);
    c.expect(conditionally_certain(sp, event_geq(x, g0), part), "measurable_attained", "P(X >= left | G) != 1" + tag);
    c.expect(almost_surely_equal(sp, g0, brute_force_conditional_left_endpoint(sp, x, part)), "fast_vs_oracle",
             "fast path differs from brute-force oracle" + tag);

    const TableRV g1 = conditional_right_endpoint(sp, x, part);
    c.expect(almost_surely_equal(sp, g1, -c.left(-x)), "reflection", "right != -left(-X)" + tag);
    c.expect(almost_surely_equal(sp, g1, per_atom_max_direct(sp, x, part)), "reflection",
             "right endpoint differs from per-atom max" + tag);
    c.expect(almost_surely_equal(sp, g1, -brute_force_conditional_left_endpoint(sp, -x, part)), "reflection",
             "right endpoint differs from reflected oracle" + tag);
    c.expect(conditionally_certain(sp, event_geq(g1, x), part), "reflection", "P(X <= right | G) != 1" + tag);

    if (auto k = as_constant(sp, g0)) {
        c.expect(*k == constant_unc[0], "constant_endpoint",
                 "a.s. constant left endpoint " + k->to_string() + " != " + constant_unc[0].to_string() + tag);
    }
    c.expect(almost_surely_equal(sp, c.left(x, Partition::trivial(sp.size())), constant_unc), "trivial_or_independent",
             "left endpoint given the trivial field != unconditional endpoint" + tag);
    if (is_independent(sp, x, part)) {
        c.expect(almost_surely_equal(sp, g0, constant_unc), "trivial_or_independent",
                 "X independent of G but left endpoint not the unconditional constant" + tag);
    }
    if (is_measurable(sp, x, part)) {
        c.expect(almost_surely_equal(sp, g0, x), "measurable_fixed_point", "measurable rv not fixed by left" + tag);
    }
}

inline void check_subject(Checker& c, const TableRV& x) {
    const auto& sp = c.space();
    const auto& part = c.part();
    const std::size_t n = sp.size();
    const TableRV g0 = c.left(x);
    const ExtendedReal lower = unconditional_endpoints(sp, x).left;

    for (double a : {-2.0, 0.0, 3.0}) {
        const TableRV ca = TableRV::constant(n, a);
        c.expect(almost_surely_equal(sp, c.left(ca), ca), "constants_fixed", "left(a) != a for a = " + format_double(a));
    }
    for (double a : {0.0, 1.0, 2.5}) {
        c.expect(almost_surely_equal(sp, c.left(a * x), a * g0), "positive_homogeneity",
                 "left(aX) != a left(X) for a = " + format_double(a));
    }
    for (double d : {0.0, 1.0}) {
        const ExtendedReal a = lower - d;
        c.expect(almost_surely_leq(sp, TableRV::constant(n, a), g0), "lower_bound",
                 "X >= " + a.to_string() + " but left(X) is not");
    }

    if (const TableRV* y = c.rv("Ym"); y && is_measurable(sp, *y, part)) {
        c.expect(almost_surely_equal(sp, c.left(*y), *y), "measurable_fixed_point", "left(Ym) != Ym");
        c.expect(almost_surely_equal(sp, c.left(x + *y), g0 + *y), "measurable_translation", "left(X + Ym) != left(X) + Ym");
    }
    if (const TableRV* v = c.rv("Vm"); v && is_measurable(sp, *v, part) && nonneg_as(sp, *v)) {
        c.expect(almost_surely_equal(sp, c.left(x * *v), *v * g0), "measurable_scaling", "left(X Vm) != Vm left(X)");
    }

    const TableRV* d1 = c.rv("D1");
    const TableRV* d2 = c.rv("D2");
    if (d1 && nonneg_as(sp, *d1)) {
        const TableRV below = x - *d1;
        c.expect(almost_surely_leq(sp, c.left(below), g0), "monotonicity", "X >= X - D1 but left order reversed");
    }
    if (d1 && d2 && nonneg_as(sp, *d1) && nonneg_as(sp, *d2)) {
        // Decreasing chain X + D1 + D2 >= X + D2 >= X.
        const std::vector<TableRV> chain{x + *d1 + *d2, x + *d2, x};
        TableRV prev = c.left(chain[0]);
        bool monotone = true;
        for (std::size_t k = 1; k < chain.size(); ++k) {
            const TableRV cur = c.left(chain[k]);
            monotone = monotone && almost_surely_leq(sp, cur, prev);
            prev = cur;
        }
        c.expect(monotone, "monotone_continuity", "left endpoints along a decreasing chain are not non-increasing");
        c.expect(almost_surely_equal(sp, prev, g0), "monotone_continuity", "chain limit endpoint != left(X)");

        // Pairs (X_n, Q_n) with P(X_n >= Q_n | G) = 1 that stabilize at (X, left(X) - Vm) or (X, left(X)).
        const TableRV* v = c.rv("Vm");
        const TableRV slack = (v && is_measurable(sp, *v, part) && nonneg_as(sp, *v)) ? *v : TableRV::constant(n, 0.0);
        const std::vector<std::pair<TableRV, TableRV>> seq{
            {chain[0], c.left(chain[0]) - slack}, {chain[1], c.left(chain[1])}, {x, g0 - slack}, {x, g0 - slack}};
        bool hyp = true;
        for (const auto& [xn, qn] : seq) hyp = hyp && conditionally_certain(sp, event_geq(xn, qn), part);
        if (hyp) {
            const auto& [xl, ql] = seq.back();
            c.expect(is_measurable(sp, ql, part) && conditionally_certain(sp, event_geq(xl, ql), part), "stable_pairs",
                     "stabilized pair violates P(X >= Q | G) = 1");
        }
    }

    // Essential supremum of an arbitrary family: dominates each member and is attained.
    std::vector<TableRV> family{x};
    for (const char* name : {"F1", "Ym", "D1"}) {
        if (const TableRV* f = c.rv(name)) family.push_back(*f);
    }
    const TableRV es = essential_supremum(sp, family);
    bool dominates = true;
    for (const auto& f : family) dominates = dominates && almost_surely_leq(sp, f, es);
    bool attained = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (sp.is_null(i)) continue;
        bool hit = false;
        for (const auto& f : family) hit = hit || f[i] == es[i];
        attained = attained && hit;
    }
    c.expect(dominates, "essential_supremum", "essential supremum fails to dominate a member");
    c.expect(attained, "essential_supremum", "essential supremum not minimal (some outcome not attained)");

    // Measurable family: the supremum is measurable and every measurable
    // dominating Q built from candidate values is a.s. >= it.
    std::vector<TableRV> mfam{g0};
    if (const TableRV* y = c.rv("Ym"); y && is_measurable(sp, *y, part)) mfam.push_back(*y);
    if (const TableRV* v = c.rv("Vm"); v && is_measurable(sp, *v, part)) mfam.push_back(*v);
    const TableRV mes = essential_supremum(sp, mfam);
    c.expect(is_measurable(sp, mes, part), "essential_supremum", "supremum of measurable family not measurable");
    for (std::size_t a = 0; a < part.atom_count(); ++a) {
        if (!(atom_mass(sp, part, a) > 0.0)) continue;
        std::size_t w = part.atom(a).front();
        for (std::size_t u : part.atom(a)) {
            if (!sp.is_null(u)) {
                w = u;
                break;
            }
        }
        // Lowering the supremum on one positive-mass atom must break domination.
        TableRV lowered = mes;
        ExtendedReal next = ExtendedReal::neg_inf();
        for (const auto& f : mfam) {
            for (std::size_t u : part.atom(a)) {
                if (!sp.is_null(u) && f[u] < mes[w] && next < f[u]) next = f[u];
            }
        }
        for (std::size_t u : part.atom(a)) lowered[u] = next;
        bool still = true;
        for (const auto& f : mfam) still = still && almost_surely_leq(sp, f, lowered);
        c.expect(!still, "essential_supremum", "a smaller measurable rv still dominates the family");
    }
}

}  // namespace detail

/// Every property on one instance; empty result means it passed.
inline std::vector<Violation> check_instance(const FiniteInstance& inst, const LeftEndpointFn& left,
                                             std::map<std::string, std::size_t>* counts = nullptr) {
    std::vector<Violation> out;
    std::map<std::string, std::size_t> local;
    detail::Checker c(inst, left, out, counts ? *counts : local);
    for (const auto& [name, rv] : inst.rvs) detail::check_single(c, name, rv);
    if (const TableRV* x = c.rv("X")) detail::check_subject(c, *x);
    return out;
}

inline std::vector<Violation> check_instance(const FiniteInstance& inst) {
    return check_instance(inst, LeftEndpointFn(conditional_left_endpoint));
}

struct SuiteConfig {
    std::size_t spaces = 1000;
    std::size_t max_outcomes = 12;
    std::uint64_t seed = 1;
    int value_range = 4;             // integer rv values in [-value_range, value_range]
    double zero_mass_rate = 0.15;    // chance an outcome gets probability 0
    double independent_rate = 0.25;  // chance of a product-structured instance with X independent of G
};

inline FiniteInstance random_instance(Rng& rng, const SuiteConfig& cfg) {
    const auto R = cfg.value_range;
    auto draw = [&](std::int64_t lo, std::int64_t hi) { return static_cast<double>(rng.uniform_int(lo, hi)); };
    const auto max_n = static_cast<std::int64_t>(cfg.max_outcomes);

    FiniteInstance inst;
    std::vector<double> weights;
    std::vector<std::size_t> labels;
    std::vector<double> xs;
    if (max_n >= 2 && rng.bernoulli(cfg.independent_rate)) {
        // Omega = rows x cols, G = rows, X a function of the column only.
        const auto rows = rng.uniform_int(1, std::max<std::int64_t>(1, max_n / 2));
        const auto cols = rng.uniform_int(1, max_n / rows);
        std::vector<double> pr(rows), pc(cols), xc(cols);
        for (auto& p : pr) p = draw(1, 6);
        for (auto& p : pc) p = draw(1, 6);
        for (auto& v : xc) v = draw(-R, R);
        for (std::int64_t r = 0; r < rows; ++r) {
            for (std::int64_t k = 0; k < cols; ++k) {
                weights.push_back(pr[r] * pc[k]);
                labels.push_back(static_cast<std::size_t>(r));
                xs.push_back(xc[k]);
            }
        }
    } else {
        const auto n = rng.uniform_int(1, max_n);
        const auto nlabels = rng.uniform_int(1, n);
        for (std::int64_t i = 0; i < n; ++i) {
            weights.push_back(rng.bernoulli(cfg.zero_mass_rate) ? 0.0 : draw(1, 9));
            labels.push_back(static_cast<std::size_t>(rng.uniform_int(0, nlabels - 1)));
            xs.push_back(draw(-R, R));
        }
        bool any = false;
        for (double w : weights) any = any || w > 0.0;
        if (!any) weights[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = draw(1, 9);
    }
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    for (auto& w : weights) w /= total;
    inst.space = FiniteSpace(std::move(weights));
    inst.part = Partition::from_labels(std::span<const std::size_t>(labels));

    std::vector<double> ym(n), vm(n), d1(n), d2(n), f1(n);
    for (const auto& atom : inst.part.atoms()) {
        const double y = draw(-R, R);
        const double v = draw(0, R);
        for (std::size_t w : atom) {
            // Zero-mass outcomes may break measurability; a.s. checks must ignore them.
            ym[w] = inst.space.is_null(w) ? draw(-R, R) : y;
            vm[w] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        d1[i] = draw(0, R);
        d2[i] = draw(0, R);
        f1[i] = draw(-R, R);
    }
    inst.rvs.emplace("X", TableRV(xs));
    inst.rvs.emplace("Ym", TableRV(ym));
    inst.rvs.emplace("Vm", TableRV(vm));
    inst.rvs.emplace("D1", TableRV(d1));
    inst.rvs.emplace("D2", TableRV(d2));
    inst.rvs.emplace("F1", TableRV(f1));
    return inst;
}

/// Drop one outcome, renormalizing probabilities; nullopt if nothing would remain.
inline std::optional<FiniteInstance> remove_outcome(const FiniteInstance& inst, std::size_t drop) {
    const std::size_t n = inst.space.size();
    if (n < 2) return std::nullopt;
    std::vector<double> probs;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == drop) continue;
        probs.push_back(inst.space.prob(i));
        labels.push_back(inst.part.atom_of(i));
    }
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(total > 0.0)) return std::nullopt;
    for (auto& p : probs) p /= total;
    FiniteInstance out;
    out.space = FiniteSpace(std::move(probs));
    out.part = Partition::from_labels(std::span<const std::size_t>(labels));
    for (const auto& [name, rv] : inst.rvs) {
        std::vector<ExtendedReal> v;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != drop) v.push_back(rv[i]);
        }
        out.rvs.emplace(name, TableRV(std::move(v)));
    }
    return out;
}

/// Greedy one-outcome-at-a-time shrink while the instance keeps failing.
inline FiniteInstance shrink_counterexample(FiniteInstance inst, const LeftEndpointFn& left) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < inst.space.size(); ++i) {
            auto smaller = remove_outcome(inst, i);
            if (smaller && !check_instance(*smaller, left).empty()) {
                inst = std::move(*smaller);
                progress = true;
                break;
            }
        }
    }
    return inst;
}

struct SuiteReport {
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::size_t failed_instances = 0;
    std::map<std::string, std::size_t> checks_by_property;
    std::vector<Violation> violations;  // of the shrunk counterexample
    std::optional<FiniteInstance> counterexample;

    bool passed() const { return failed_instances == 0; }
};

inline SuiteReport run_finite_suite(const SuiteConfig& cfg, const LeftEndpointFn& left) {
    SuiteReport rep;
    Rng rng(derive_seed(cfg.seed, "finite-suite"));
    std::optional<FiniteInstance> first_failure;
    for (std::size_t s = 0; s < cfg.spaces; ++s) {
        FiniteInstance inst = random_instance(rng, cfg);
        auto v = check_instance(inst, left, &rep.checks_by_property);
        ++rep.instances;
        if (!v.empty()) {
            ++rep.failed_instances;
            if (!first_failure || inst.space.size() < first_failure->space.size()) first_failure = std::move(inst);
        }
    }
    for (const auto& [_, k] : rep.checks_by_property) rep.checks += k;
    if (first_failure) {
        rep.counterexample = shrink_counterexample(std::move(*first_failure), left);
        rep.violations = check_instance(*rep.counterexample, left);
    }
    return rep;
}

inline SuiteReport run_finite_suite(const SuiteConfig& cfg) {
    return run_finite_suite(cfg, LeftEndpointFn(conditional_left_endpoint));
}

}  // namespace ostat::finite

#endif  // OSTAT_FINITE_SUITE_HPP
