// Copyright 2026 The bosonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "bosonlab/rng.hpp"
#include "bosonlab/stats.hpp"

namespace bosonlab {
namespace {

TEST(Stats, BoxSummaryOrderingAndValues) {
    const auto b = box_summary({5.0, 1.0, 3.0, 2.0, 4.0});
    EXPECT_EQ(b.count, 5U);
    EXPECT_EQ(b.min, 1.0);
    EXPECT_EQ(b.q1, 2.0);
    EXPECT_EQ(b.median, 3.0);
    EXPECT_EQ(b.q3, 4.0);
    EXPECT_EQ(b.max, 5.0);
    const auto e = box_summary({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(e.median, 2.5);
    EXPECT_DOUBLE_EQ(e.q1, 1.75);
    EXPECT_TRUE(std::isnan(box_summary({}).median));
}

TEST(Stats, ChiSquareMatchesReferenceDistribution) {
    const auto r = chi_square_test({30, 20, 50}, {0.3, 0.3, 0.4});
    // (30-30)^2/30 + (20-30)^2/30 + (50-40)^2/40
    EXPECT_NEAR(r.statistic, 100.0 / 30 + 100.0 / 40, 1e-12);
    EXPECT_EQ(r.dof, 2);
    const boost::math::chi_squared_distribution<double> ref(2);
    EXPECT_NEAR(r.p_value, boost::math::cdf(boost::math::complement(ref, r.statistic)), 1e-12);
}

TEST(Stats, ChiSquareHitOnImpossibleCell) {
    const auto r = chi_square_test({10, 1}, {1.0, 0.0});
    EXPECT_EQ(r.p_value, 0.0);
}

TEST(Stats, KolmogorovSmirnovUniform) {
    Rng rng = make_stream(31, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(20000);
    for (auto &x : xs) {
        x = u(rng);
    }
    auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    const double d = ks_statistic(xs, cdf);
    EXPECT_GT(ks_p_value(d, xs.size()), 0.001);
    for (auto &x : xs) {
        x = x * x;
    }
    EXPECT_LT(ks_p_value(ks_statistic(xs, cdf), xs.size()), 1e-6);
}

TEST(Stats, KolmogorovPValueKnownPoints) {
    // Asymptotic Kolmogorov law: Q(1.358) ~ 0.05, Q(1.628) ~ 0.01.
    EXPECT_NEAR(ks_p_value(1.358 / std::sqrt(1e6), 1000000), 0.05, 1e-3);
    EXPECT_NEAR(ks_p_value(1.628 / std::sqrt(1e6), 1000000), 0.01, 1e-3);
}

}  // namespace
}  // namespace bosonlab
