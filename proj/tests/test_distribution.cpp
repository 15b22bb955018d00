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

#include <map>
#include <numeric>

#include "bosonlab/distribution.hpp"

namespace bosonlab {
namespace {

ComplexMatrix hom_unitary() {
    ComplexMatrix u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return u;
}

TEST(OutcomeProbability, IdentityInterferometer) {
    const ComplexMatrix id = ComplexMatrix::Identity(5, 5);
    const auto s0 = OutcomePattern::collision_free(5, 3);
    EXPECT_NEAR(outcome_probability(id, s0), 1.0, 1e-15);
    EXPECT_EQ(outcome_probability(id, OutcomePattern({1, 0, 1, 1, 0})), 0.0);
    EXPECT_EQ(outcome_probability(id, OutcomePattern({2, 1, 0, 0, 0})), 0.0);
}

TEST(OutcomeProbability, HongOuMandel) {
    const ComplexMatrix u = hom_unitary();
    EXPECT_NEAR(outcome_probability(u, OutcomePattern({1, 1})), 0.0, 1e-15);
    EXPECT_NEAR(outcome_probability(u, OutcomePattern({2, 0})), 0.5, 1e-15);
    EXPECT_NEAR(outcome_probability(u, OutcomePattern({0, 2})), 0.5, 1e-15);
    EXPECT_EQ(log_outcome_probability(ComplexMatrix::Identity(2, 2), OutcomePattern({0, 2})),
              -std::numeric_limits<double>::infinity());
}

TEST(FullDistribution, HongOuMandel) {
    const auto d = full_distribution(hom_unitary(), 2);
    ASSERT_EQ(d.outcomes.size(), 3U);
    EXPECT_EQ(d.outcomes[0], OutcomePattern({2, 0}));
    EXPECT_NEAR(d.probabilities[0], 0.5, 1e-15);
    EXPECT_NEAR(d.probabilities[1], 0.0, 1e-15);
    EXPECT_NEAR(d.probabilities[2], 0.5, 1e-15);
}

TEST(FullDistribution, NormalizedForHaarDraws) {
    for (int m = 2; m <= 8; ++m) {
        for (int n = 1; n <= std::min(m, 4); ++n) {
            for (uint64_t s = 0; s < 3; ++s) {
                const auto d = full_distribution(haar_unitary(m, 70, s).unitary, n);
                EXPECT_NEAR(d.total(), 1.0, 1e-9) << m << "," << n;
                for (double p : d.probabilities) {
                    EXPECT_GE(p, -1e-12);
                    EXPECT_LE(p, 1.0 + 1e-9);
                }
            }
        }
    }
}

TEST(FullDistribution, Guards) {
    const ComplexMatrix u = haar_unitary(14, 71, 0).unitary;
    EXPECT_THROW(full_distribution(u, 13), CapacityError);
    EXPECT_THROW(full_distribution(haar_unitary(30, 71, 1).unitary, 8), CapacityError);  // C(37, 8) > 1e5
    EXPECT_THROW(full_distribution(ComplexMatrix::Identity(2, 2), 3), ContractViolation);
}

TEST(FullDistribution, AverageOverHaarIsUniform) {
    // E_U p_U(S) = 1 / |S_{m,n}| for every S.
    const int m = 4;
    const int n = 2;
    const int draws = 200;
    std::vector<std::vector<double>> per_outcome(10);
    for (int s = 0; s < draws; ++s) {
        const auto d = full_distribution(haar_unitary(m, 72, static_cast<uint64_t>(s)).unitary, n);
        for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
            per_outcome[i].push_back(d.probabilities[i]);
        }
    }
    for (const auto &xs : per_outcome) {
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / draws;
        double var = 0.0;
        for (double x : xs) {
            var += (x - mean) * (x - mean);
        }
        const double se = std::sqrt(var / (draws - 1) / draws);
        EXPECT_LE(std::abs(mean - 0.1), 4 * se);
    }
}

TEST(FullDistribution, RowPermutationCovariance) {
    Rng rng = make_stream(73, 0);
    const int m = 5;
    const int n = 3;
    const ComplexMatrix u = haar_unitary(m, 73, 1).unitary;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix pu(m, m);
    for (int r = 0; r < m; ++r) {
        pu.row(r) = u.row(perm[static_cast<std::size_t>(r)]);
    }
    for_each_outcome(m, n, [&](const OutcomePattern &s) {
        // Row r of PU is row perm[r] of U, so S under PU matches S' with s'_{perm[r]} = s_r under U.
        std::vector<int> moved(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) {
            moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] = s[static_cast<std::size_t>(r)];
        }
        EXPECT_NEAR(outcome_probability(pu, s), outcome_probability(u, OutcomePattern(moved)), 1e-13);
    });
}

TEST(ExactSampler, HongOuMandelNeverCoincident) {
    const auto sampler = exact_sampler(hom_unitary(), 2);
    Rng rng = make_stream(74, 0);
    for (int i = 0; i < 10000; ++i) {
        EXPECT_NE(sampler(rng), OutcomePattern({1, 1}));
    }
}

TEST(ExactSampler, IdentityIsDeterministic) {
    const auto sampler = exact_sampler(ComplexMatrix::Identity(4, 4), 2);
    Rng rng = make_stream(75, 0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sampler(rng), OutcomePattern::collision_free(4, 2));
    }
}

TEST(ExactSampler, ChiSquareAgainstExactDistribution) {
    for (auto [m, n] : {std::pair{4, 2}, std::pair{5, 3}, std::pair{3, 3}}) {
        const auto sampler = exact_sampler(haar_unitary(m, 76, static_cast<uint64_t>(m)).unitary, n);
        Rng rng = make_stream(76, static_cast<uint64_t>(n));
        std::vector<long> counts(sampler.distribution().outcomes.size(), 0);
        for (int i = 0; i < 100000; ++i) {
            ++counts[sampler.sample_index(rng)];
        }
        EXPECT_GT(chi_square_test(counts, sampler.distribution().probabilities).p_value, 0.001) << m << "," << n;
    }
}

TEST(Anticoncentration, StructureAndOrdering) {
    AnticoncentrationConfig cfg;
    cfg.n_values = {2, 3, 5};
    cfg.units = 4;
    cfg.outcomes_per_unit = 5;
    cfg.seed = 77;
    const auto r = anticoncentration_experiment(cfg);
    ASSERT_EQ(r.levels.size(), 3U);
    EXPECT_EQ(r.samples.size(), 3U * 20U);
    for (const auto &lvl : r.levels) {
        EXPECT_EQ(lvl.m, 2 * lvl.n);
        EXPECT_EQ(lvl.samples, 20U);
        EXPECT_NEAR(lvl.log_dim, std::log(dim_fock(lvl.m, lvl.n).convert_to<double>()), 1e-12);
        for (const auto *b : {&lvl.raw, &lvl.shifted}) {
            EXPECT_LE(b->min, b->q1);
            EXPECT_LE(b->q1, b->median);
            EXPECT_LE(b->median, b->q3);
            EXPECT_LE(b->q3, b->max);
        }
        EXPECT_NEAR(lvl.shifted.median, lvl.raw.median + lvl.log_dim, 1e-12);
    }
    // Outcomes are shared across units.
    EXPECT_EQ(r.samples[0].outcome_rank, r.samples[5].outcome_rank);
    EXPECT_EQ(r.samples[0].unit_index, 0);
    EXPECT_EQ(r.samples[5].unit_index, 1);
}

TEST(Anticoncentration, Reproducible) {
    AnticoncentrationConfig cfg;
    cfg.n_values = {4};
    cfg.units = 3;
    cfg.outcomes_per_unit = 3;
    cfg.seed = 78;
    const auto a = anticoncentration_experiment(cfg);
    cfg.partitions = 3;
    const auto b = anticoncentration_experiment(cfg);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].outcome_rank, b.samples[i].outcome_rank);
        EXPECT_NEAR(a.samples[i].log_prob, b.samples[i].log_prob, 1e-10);
    }
}

TEST(Anticoncentration, Guards) {
    AnticoncentrationConfig cfg;
    cfg.n_values = {17};
    EXPECT_THROW(anticoncentration_experiment(cfg), CapacityError);
    cfg.n_values = {35};
    cfg.long_run = true;
    EXPECT_THROW(anticoncentration_experiment(cfg), CapacityError);
    cfg.n_values = {0};
    EXPECT_THROW(anticoncentration_experiment(cfg), ContractViolation);
}

}  // namespace
}  // namespace bosonlab
