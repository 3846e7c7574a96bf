#include <gtest/gtest.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ostat/finite/space.hpp"
#include "ostat/rng.hpp"

using namespace ostat;
using namespace ostat::finite;

TEST(ValidateSpace, UniformIsOk) {
    const auto rep = validate_space(FiniteSpace({0.5, 0.5}));
    EXPECT_TRUE(rep.ok);
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_TRUE(rep.zero_mass.empty());
}

TEST(ValidateSpace, MassDeficitReportsSum) {
    const auto rep = validate_space(FiniteSpace({0.5, 0.4}));
    EXPECT_FALSE(rep.ok);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0], "sum = 0.9");
}

TEST(ValidateSpace, ZeroMassOutcomeIsFlaggedNotRejected) {
    const auto rep = validate_space(FiniteSpace({1.0, 0.0}));
    EXPECT_TRUE(rep.ok);
    ASSERT_EQ(rep.zero_mass.size(), 1u);
    EXPECT_EQ(rep.zero_mass[0], 1u);
}

TEST(ValidateSpace, NegativeAndEmpty) {
    EXPECT_FALSE(validate_space(FiniteSpace({1.5, -0.5})).ok);
    EXPECT_FALSE(validate_space(FiniteSpace(std::vector<double>{})).ok);
    EXPECT_TRUE(validate_space(FiniteSpace({0.1, 0.2, 0.3, 0.4})).ok);
}

TEST(Partition, RejectsMalformedAtoms) {
    EXPECT_THROW(Partition({{0}, {}}, 1), std::invalid_argument);
    EXPECT_THROW(Partition({{0, 1}, {1}}, 2), std::invalid_argument);
    EXPECT_THROW(Partition({{0}}, 2), std::invalid_argument);
    EXPECT_THROW(Partition({{0, 5}}, 2), std::invalid_argument);
    const Partition p({{2, 0}, {1}}, 3);
    EXPECT_EQ(p.atom_count(), 2u);
    EXPECT_EQ(p.atom_of(0), 0u);
    EXPECT_EQ(p.atom_of(1), 1u);
}

TEST(Partition, FromLabels) {
    const std::vector<int> labels{7, 3, 7, 3, 1};
    const auto p = Partition::from_labels<int>(labels);
    EXPECT_EQ(p.atom_count(), 3u);
    EXPECT_EQ(p.atom_of(0), p.atom_of(2));
    EXPECT_EQ(p.atom_of(1), p.atom_of(3));
    EXPECT_NE(p.atom_of(0), p.atom_of(4));
}

TEST(IsMeasurable, ConstantPerAtom) {
    const FiniteSpace sp({0.25, 0.25, 0.25, 0.25});
    const Partition p({{0, 1}, {2, 3}}, 4);
    EXPECT_TRUE(is_measurable(sp, TableRV{1, 1, 5, 5}, p));
}

TEST(IsMeasurable, NonConstantOnPositiveAtom) {
    const FiniteSpace sp({0.5, 0.5});
    EXPECT_FALSE(is_measurable(sp, TableRV{1, 2}, Partition::trivial(2)));
}

TEST(IsMeasurable, DifferenceOnNullOutcomeIgnored) {
    const FiniteSpace sp({0.5, 0.0, 0.5});
    const Partition p({{0, 1}, {2}}, 3);
    EXPECT_TRUE(is_measurable(sp, TableRV{4, 9, 1}, p));
    EXPECT_THROW(is_measurable(sp, TableRV{1, 2}, p), std::invalid_argument);
}

// Enumeration oracle: constant on the positive-mass outcomes of every atom.
TEST(IsMeasurable, MatchesEnumerationOracle) {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 8));
        std::vector<double> w(n);
        double tot = 0.0;
        for (auto& x : w) tot += (x = rng.bernoulli(0.2) ? 0.0 : static_cast<double>(rng.uniform_int(1, 5)));
        if (tot == 0.0) continue;
        for (auto& x : w) x /= tot;
        std::vector<int> labels(n);
        for (auto& l : labels) l = static_cast<int>(rng.uniform_int(0, 2));
        const auto part = Partition::from_labels<int>(labels);
        std::vector<double> vals(n);
        for (auto& v : vals) v = static_cast<double>(rng.uniform_int(0, 1));
        const FiniteSpace sp(w);
        const TableRV rv(vals);
        bool expect = true;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[i] == labels[j] && w[i] > 0 && w[j] > 0 && vals[i] != vals[j]) expect = false;
            }
        }
        ASSERT_EQ(is_measurable(sp, rv, part), expect);
    }
}

TEST(ConditionalProbability, DirectRatio) {
    const FiniteSpace sp({0.25, 0.25, 0.25, 0.25});
    const Partition p({{0, 1}, {2, 3}}, 4);
    const std::vector<std::size_t> ev{0};
    const TableRV cp = conditional_probability(sp, ev, p);
    EXPECT_EQ(cp, (TableRV{0.5, 0.5, 0, 0}));
    const std::vector<std::size_t> all{0, 1, 2, 3};
    EXPECT_EQ(conditional_probability(sp, all, p), (TableRV{1, 1, 1, 1}));
}

TEST(ConditionalProbability, NullAtomGetsZeroAndEventRangeChecked) {
    const FiniteSpace sp({0.5, 0.5, 0.0});
    const Partition p({{0, 1}, {2}}, 3);
    const std::vector<std::size_t> ev{2};
    const TableRV cp = conditional_probability(sp, ev, p);
    EXPECT_EQ(cp[2], ExtendedReal(0.0));
    EXPECT_EQ(null_atoms(sp, p), std::vector<std::size_t>{1});
    const std::vector<std::size_t> bad{3};
    EXPECT_THROW(conditional_probability(sp, bad, p), std::out_of_range);
}

TEST(ConditionalProbability, MatchesSumOracleAndIsMeasurable) {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 8;
        std::vector<double> w(n);
        double tot = 0.0;
        for (auto& x : w) tot += (x = static_cast<double>(rng.uniform_int(0, 6)));
        if (tot == 0.0) continue;
        for (auto& x : w) x /= tot;
        std::vector<int> labels(n);
        for (auto& l : labels) l = static_cast<int>(rng.uniform_int(0, 3));
        std::vector<bool> mask(n);
        for (std::size_t i = 0; i < n; ++i) mask[i] = rng.bernoulli(0.5);
        const FiniteSpace sp(w);
        const auto part = Partition::from_labels<int>(labels);
        const TableRV cp = conditional_probability(sp, mask, part);
        EXPECT_TRUE(is_measurable(sp, cp, part));
        for (std::size_t i = 0; i < n; ++i) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] != labels[i]) continue;
                den += w[j];
                if (mask[j]) num += w[j];
            }
            const double expect = den > 0.0 ? num / den : 0.0;
            ASSERT_NEAR(cp[i].value(), expect, 1e-12);
        }
    }
}

TEST(Independence, ProductStructureDetected) {
    // Outcomes (a, b) with a in {0,1} labels the atom, b carries X.
    const FiniteSpace sp({0.1 * 0.3, 0.1 * 0.7, 0.9 * 0.3, 0.9 * 0.7});
    const Partition p({{0, 1}, {2, 3}}, 4);
    EXPECT_TRUE(is_independent(sp, TableRV{5, 8, 5, 8}, p));
    EXPECT_FALSE(is_independent(sp, TableRV{5, 8, 8, 5}, p));
    EXPECT_TRUE(is_independent(sp, TableRV{2, 2, 2, 2}, p));
}

TEST(TableRV, PointwiseAlgebra) {
    const TableRV x{1, 2, 3};
    const TableRV y{4, 5, 6};
    EXPECT_EQ(x + y, (TableRV{5, 7, 9}));
    EXPECT_EQ(y - x, (TableRV{3, 3, 3}));
    EXPECT_EQ(x * y, (TableRV{4, 10, 18}));
    EXPECT_EQ(ExtendedReal(2.0) * x, (TableRV{2, 4, 6}));
    EXPECT_EQ(-x, (TableRV{-1, -2, -3}));
    EXPECT_THROW(x + (TableRV{1, 2}), std::invalid_argument);
}
