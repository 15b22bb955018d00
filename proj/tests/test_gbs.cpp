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

#include "bosonlab/gbs.hpp"
#include "bosonlab/randmat.hpp"

namespace bosonlab {
namespace {

OutcomePattern pat(std::vector<int> v) { return OutcomePattern(std::move(v)); }

TEST(PhotonNumber, VacuumAtZeroSqueezing) {
    EXPECT_EQ(photon_number_pmf(4, 0.0, 0), 1.0);
    EXPECT_EQ(photon_number_pmf(4, 0.0, 3), 0.0);
    EXPECT_EQ(photon_number_mode(4, 0.0), 0);
    EXPECT_THROW(photon_number_pmf(4, -0.1, 0), ContractViolation);
    EXPECT_THROW(photon_number_pmf(4, 0.1, -1), ContractViolation);
}

TEST(PhotonNumber, NormalizationAndMean) {
    for (int m : {1, 5, 40}) {
        for (double r : {0.1, 0.65, 1.2}) {
            const auto s = photon_stats(m, r);
            EXPECT_NEAR(s.mass, 1.0, 1e-11) << m << " " << r;
            EXPECT_NEAR(s.mean, m * std::pow(std::sinh(r), 2), 1e-10 * std::max(1.0, s.mean)) << m << " " << r;
            double tail = 0.0;
            for (int n = s.truncation + 1; n < s.truncation + 5000; ++n) {
                tail += photon_number_pmf(m, r, n);
            }
            EXPECT_LT(tail, 1e-12);
        }
    }
}

TEST(PhotonNumber, VarianceIsNegativeBinomial) {
    const auto s = photon_stats(10, 0.8);
    EXPECT_NEAR(s.variance / s.variance_formula, 1.0, 1e-9);
    EXPECT_GT(std::abs(s.variance / s.variance_alternative - 1.0), 0.1);
}

TEST(PhotonNumber, ModeMatchesClosedForm) {
    for (int m = 1; m <= 60; m += 3) {
        for (double r = 0.05; r < 1.5; r += 0.07) {
            const double x = (m - 1) * std::pow(std::sinh(r), 2);
            if (std::abs(x - std::round(x)) < 1e-9) {
                continue;  // tie between two modes
            }
            EXPECT_EQ(photon_number_mode(m, r), static_cast<int>(std::floor(x))) << m << " " << r;
        }
    }
}

TEST(PhotonNumber, ModeMassScalesAsInverseSqrtM) {
    double lo = 1e9, hi = 0.0;
    for (int m : {16, 64, 256, 1024, 4096}) {
        const auto s = photon_stats(m, 0.65);
        lo = std::min(lo, s.p_mode_sqrt_m);
        hi = std::max(hi, s.p_mode_sqrt_m);
    }
    EXPECT_GT(lo, 0.1);
    EXPECT_LT(hi / lo, 1.5);
}

TEST(PhotonNumber, SumOfGeometricsChiSquare) {
    const int m = 6;
    const double r = 0.7;
    const double p = 1.0 / std::pow(std::cosh(r), 2);  // geometric success probability, mean sinh^2 r
    Rng rng = make_stream(301, 0);
    std::geometric_distribution<int> geo(p);
    const int trials = 50000;
    const int bins = 15;  // last bin collects n >= bins - 1
    std::vector<double> observed(bins, 0.0);
    for (int k = 0; k < trials; ++k) {
        int n = 0;
        for (int i = 0; i < m; ++i) {
            n += geo(rng);
        }
        observed[static_cast<std::size_t>(std::min(n, bins - 1))] += 1;
    }
    double chi2 = 0.0, below = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double prob = b < bins - 1 ? photon_number_pmf(m, r, b) : 1.0 - below;
        below += prob;
        const double expected = prob * trials;
        ASSERT_GT(expected, 5.0);
        chi2 += std::pow(observed[static_cast<std::size_t>(b)] - expected, 2) / expected;
    }
    const boost::math::chi_squared dist(bins - 1);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(PhotonNumber, SqueezingRegime) {
    // r = 0.65 puts the mean photon number at about m / 2.1.
    EXPECT_NEAR(std::pow(std::sinh(0.65), 2) * 2.1, 1.0, 0.03);
}

TEST(SubmatrixRowsCols, Examples) {
    ComplexMatrix u(2, 2);
    u << 1.0, 2.0, 3.0, 4.0;
    const auto a = submatrix_rows_cols(u, pat({2, 0}), pat({1, 1}));
    ComplexMatrix expected(2, 2);
    expected << 1.0, 1.0, 3.0, 3.0;
    EXPECT_EQ(a, expected);
    const auto b = submatrix_rows_cols(u, pat({1, 1}), pat({1, 1}));
    EXPECT_EQ(b, u);
    EXPECT_THROW(submatrix_rows_cols(u, pat({1, 0}), pat({1, 1})), ContractViolation);
}

TEST(SubmatrixRowsCols, RankBoundedByClicks) {
    const auto u = haar_unitary(5, 302, 0).unitary;
    const std::vector<OutcomePattern> pats = enumerate_outcomes(5, 4);
    for (std::size_t i = 0; i < pats.size(); i += 7) {
        for (std::size_t j = 0; j < pats.size(); j += 11) {
            const auto a = submatrix_rows_cols(u, pats[i], pats[j]);
            const int bound = std::min(click_stats(pats[i]).clicks, click_stats(pats[j]).clicks);
            EXPECT_LE(numerical_rank(a), bound);
        }
    }
}

TEST(Postselected, IdentityInterferometer) {
    const ComplexMatrix eye = ComplexMatrix::Identity(4, 4);
    const auto s0 = pat({1, 0, 1, 0});
    EXPECT_NEAR(postselected_probability(eye, s0, s0), 1.0 / 10.0, 1e-15);
    EXPECT_EQ(postselected_probability(eye, s0, pat({0, 1, 1, 0})), 0.0);
    // Collision pattern: |Per|^2 = (2!)^2 cancels the factorials.
    EXPECT_NEAR(postselected_probability(eye, pat({2, 0, 0, 0}), pat({2, 0, 0, 0})), 1.0 / 10.0, 1e-15);
}

TEST(Postselected, DoubleSumNormalizes) {
    for (int m = 1; m <= 4; ++m) {
        for (int n = 0; n <= 2; ++n) {
            const auto u = haar_unitary(m, 303, static_cast<uint64_t>(10 * m + n)).unitary;
            EXPECT_NEAR(postselected_total(u, n), 1.0, 1e-8) << m << " " << n;
        }
    }
}

TEST(Postselected, PerInputNormalization) {
    const auto u = haar_unitary(4, 304, 0).unitary;
    for (const auto &t : enumerate_outcomes(4, 3)) {
        double total = 0.0;
        for (const auto &s : enumerate_outcomes(4, 3)) {
            total += pair_weight(u, s, t);
        }
        EXPECT_NEAR(total, 1.0, 1e-8) << t.to_string();
    }
}

TEST(Unpostselected, VacuumAtZeroSqueezing) {
    const auto cfg = make_gbs_config(3, 0.0, haar_unitary(3, 305, 0).unitary);
    EXPECT_DOUBLE_EQ(gbs_unpostselected_probability(cfg, pat({0, 0, 0}), pat({0, 0, 0})), 1.0);
    EXPECT_EQ(gbs_unpostselected_probability(cfg, pat({1, 0, 0}), pat({1, 0, 0})), 0.0);
    EXPECT_THROW(make_gbs_config(3, 0.1, ComplexMatrix::Identity(2, 2)), ContractViolation);
}

TEST(Unpostselected, FactorsThroughPhotonNumber) {
    const int m = 3;
    const double r = 0.5;
    const auto cfg = make_gbs_config(m, r, haar_unitary(m, 306, 0).unitary);
    for (int n = 0; n <= 2; ++n) {
        const auto outcomes = enumerate_outcomes(m, n);
        const double dim = static_cast<double>(outcomes.size());
        const double binom = dim_fock(m, n).convert_to<double>();  // C(n + m - 1, n)
        for (const auto &s : outcomes) {
            for (const auto &t : outcomes) {
                const double q = gbs_unpostselected_probability(cfg, s, t);
                const double rhs = photon_number_pmf(m, r, n) * postselected_probability(cfg.u, s, t) * dim / binom;
                EXPECT_NEAR(q, rhs, 1e-14);
            }
        }
    }
}

TEST(Unpostselected, TruncatedTotalApproachesOne) {
    const auto cfg = make_gbs_config(2, 0.3, haar_unitary(2, 307, 0).unitary);
    const int cut = photon_number_truncation(2, 0.3, 1e-7);
    const double total = gbs_total_probability(cfg, cut);
    EXPECT_LE(total, 1.0 + 1e-12);
    EXPECT_GT(total, 1.0 - 1e-6);
    EXPECT_LT(gbs_total_probability(cfg, 1), total);
}

}  // namespace
}  // namespace bosonlab
