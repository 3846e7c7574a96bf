#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "ostat/rng.hpp"

using ostat::Rng;

TEST(Rng, SameSeedSameStream) {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
    Rng c(43);
    Rng d(42);
    int equal = 0;
    for (int i = 0; i < 100; ++i) equal += c.next_u64() == d.next_u64();
    EXPECT_LT(equal, 2);
}

TEST(Rng, DerivedSeedsDifferByRole) {
    const std::uint64_t parent = 7;
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(ostat::derive_seed(parent, r));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(ostat::derive_seed(parent, "innovations"), ostat::derive_seed(parent, "hidden"));
    EXPECT_EQ(ostat::derive_seed(parent, "hidden"), ostat::derive_seed(parent, ostat::role_id("hidden")));
    EXPECT_NE(ostat::derive_seed(1, 0), ostat::derive_seed(2, 0));
}

TEST(Rng, UniformRangeAndMoments) {
    Rng rng(1);
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
        const double v = rng.uniform_open01();
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
    }
    // sd of the mean is sqrt(1/12/n) ~ 6.5e-4.
    EXPECT_NEAR(s / n, 0.5, 0.004);
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.002);
}

TEST(Rng, UniformIntIsUnbiasedAndInRange) {
    Rng rng(9);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = rng.uniform_int(-3, 3);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 3);
        ++counts[static_cast<std::size_t>(v + 3)];
    }
    // Each cell ~ Binomial(70000, 1/7): sd ~ 92.6; 5 sd bound.
    for (int c : counts) EXPECT_NEAR(c, 10000, 463);
    EXPECT_EQ(rng.uniform_int(5, 5), 5);
}

TEST(Rng, StandardNormalMoments) {
    Rng rng(3);
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.standard_normal();
        s += z;
        s2 += z * z;
        below += z <= -1.0;
    }
    EXPECT_NEAR(s / n, 0.0, 0.012);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
    // P(Z <= -1) = 0.158655; binomial sd ~ 8.2e-4.
    EXPECT_NEAR(static_cast<double>(below) / n, 0.158655, 0.0041);
}
