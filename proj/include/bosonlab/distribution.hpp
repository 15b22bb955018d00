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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/permanent.hpp"
#include "bosonlab/randmat.hpp"
#include "bosonlab/rng.hpp"
#include "bosonlab/stats.hpp"

namespace bosonlab {

inline constexpr uint64_t kMaxFullDistributionSize = 100'000;
inline constexpr int kMaxFullDistributionPhotons = 12;
inline constexpr int kMaxStandardRunPhotons = 16;

/// p_U(S) = |Per(U_S)|^2 / prod_i s_i!.
inline double outcome_probability(const ComplexMatrix &u, const OutcomePattern &s, PermanentOptions options = {}) {
    const Complex per = per_exact(submatrix_with_repetitions(u, s), options);
    return std::norm(per) / s.factorial_product().convert_to<double>();
}

/// ln p_U(S); -inf when the permanent vanishes exactly.
inline double log_outcome_probability(const ComplexMatrix &u, const OutcomePattern &s, PermanentOptions options = {}) {
    const double abs2 = std::norm(per_exact(submatrix_with_repetitions(u, s), options));
    if (abs2 == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(abs2) - s.log_factorial_product();
}

struct FullDistribution {
    int m = 0;
    int n = 0;
    std::vector<OutcomePattern> outcomes;  // colex order, index == rank
    std::vector<double> probabilities;

    double total() const {
        double t = 0.0;
        for (double p : probabilities) {
            t += p;
        }
        return t;
    }
};

inline void require_full_distribution_size(int m, int n) {
    if (n > kMaxFullDistributionPhotons) {
        throw CapacityError(
            "full distribution: n = " + std::to_string(n) + " exceeds " + std::to_string(kMaxFullDistributionPhotons));
    }
    const BigInt dim = dim_fock(m, n);
    if (dim > kMaxFullDistributionSize) {
        throw CapacityError("full distribution: |S_{m,n}| = " + dim.str() + " exceeds 100000");
    }
}

/// p_U over every outcome of n photons in m = rows(U) modes.
inline FullDistribution full_distribution(const ComplexMatrix &u, int n) {
    require_square(u, "full_distribution");
    const auto m = static_cast<int>(u.rows());
    if (n > m) {
        throw ContractViolation("full_distribution: n must not exceed m");
    }
    require_full_distribution_size(m, n);
    FullDistribution d;
    d.m = m;
    d.n = n;
    // Columns beyond the first n never enter U_S.
    const ComplexMatrix block = u.leftCols(n);
    for_each_outcome(m, n, [&](const OutcomePattern &s) {
        d.probabilities.push_back(outcome_probability(block, s));
        d.outcomes.push_back(s);
    });
    return d;
}

/// Inverse-CDF sampler over a precomputed distribution.
class ExactSampler {
   public:
    explicit ExactSampler(FullDistribution dist) : dist_(std::move(dist)) {
        double acc = 0.0;
        cumulative_.reserve(dist_.probabilities.size());
        for (double p : dist_.probabilities) {
            acc += std::max(p, 0.0);
            cumulative_.push_back(acc);
        }
        if (!(acc > 0.0)) {
            throw ContractViolation("ExactSampler: distribution has no mass");
        }
    }

    std::size_t sample_index(Rng &rng) const {
        std::uniform_real_distribution<double> unif(0.0, cumulative_.back());
        const double x = unif(rng);
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        idx = std::min(idx, cumulative_.size() - 1);
        // Never land on a zero-probability outcome through rounding at a boundary.
        while (dist_.probabilities[idx] <= 0.0 && idx > 0) {
            --idx;
        }
        return idx;
    }

    const OutcomePattern &operator()(Rng &rng) const { return dist_.outcomes[sample_index(rng)]; }

    const FullDistribution &distribution() const { return dist_; }

   private:
    FullDistribution dist_;
    std::vector<double> cumulative_;
};

inline ExactSampler exact_sampler(const ComplexMatrix &u, int n) { return ExactSampler(full_distribution(u, n)); }

// ---------------------------------------------------------------------------
// Anticoncentration of outcome probabilities in the m = alpha n regime.

struct AnticoncentrationConfig {
    std::vector<int> n_values;
    double alpha = 2.0;
    int units = 20;
    int outcomes_per_unit = 20;
    uint64_t seed = 0;
    bool long_run = false;
    unsigned partitions = 1;
};

struct AnticoncentrationSample {
    int n = 0;
    int m = 0;
    int unit_index = 0;
    int outcome_index = 0;
    BigInt outcome_rank;
    int clicks = 0;
    double log_prob = 0.0;  // -inf for an exact zero
    double log_dim = 0.0;   // ln |S_{m,n}|
};

struct AnticoncentrationLevel {
    int n = 0;
    int m = 0;
    double log_dim = 0.0;
    std::size_t samples = 0;
    std::size_t zero_count = 0;
    BoxSummary raw;      // ln p over finite samples
    BoxSummary shifted;  // ln p + ln |S_{m,n}|
    double fraction_far_below = 0.0;  // share of samples with ln p < -ln |S_{m,n}| - 10
};

struct AnticoncentrationResult {
    AnticoncentrationConfig config;
    std::vector<AnticoncentrationSample> samples;
    std::vector<AnticoncentrationLevel> levels;
};

inline int modes_for(double alpha, int n) {
    // The small epsilon keeps ceil(2.0 * 4) == 8 despite binary rounding of alpha.
    return static_cast<int>(std::ceil(alpha * n - 1e-9));
}

inline constexpr uint64_t kOutcomeStreamFamily = 0x5A;
inline constexpr uint64_t kUnitaryStreamFamily = 0x55;

inline AnticoncentrationResult anticoncentration_experiment(const AnticoncentrationConfig &cfg) {
    if (cfg.alpha < 1.0) {
        throw ContractViolation("anticoncentration_experiment: alpha must be >= 1");
    }
    if (cfg.units < 1 || cfg.outcomes_per_unit < 1) {
        throw ContractViolation("anticoncentration_experiment: units and outcomes_per_unit must be >= 1");
    }
    for (int n : cfg.n_values) {
        if (n < 1) {
            throw ContractViolation("anticoncentration_experiment: n must be >= 1");
        }
        if (static_cast<std::size_t>(n) > kMaxExactPermanentOrder) {
            throw CapacityError("anticoncentration_experiment: n = " + std::to_string(n) + " exceeds permanent cap");
        }
        if (n > kMaxStandardRunPhotons && !cfg.long_run) {
            throw CapacityError(
                "anticoncentration_experiment: n = " + std::to_string(n) + " > 16 requires the long-run flag");
        }
    }

    AnticoncentrationResult res;
    res.config = cfg;
    const PermanentOptions popts{cfg.partitions};
    for (int n : cfg.n_values) {
        const int m = modes_for(cfg.alpha, n);
        const double log_dim = std::log(dim_fock(m, n).convert_to<double>());

        Rng outcome_rng = make_stream(cfg.seed, stream_key(kOutcomeStreamFamily, static_cast<uint64_t>(n)));
        const UniformOutcomeSampler sampler(m, n);
        std::vector<OutcomePattern> outcomes;
        for (int k = 0; k < cfg.outcomes_per_unit; ++k) {
            outcomes.push_back(sampler(outcome_rng));
        }

        AnticoncentrationLevel level;
        level.n = n;
        level.m = m;
        level.log_dim = log_dim;
        std::vector<double> raw;
        std::vector<double> shifted;
        std::size_t far_below = 0;
        for (int u = 0; u < cfg.units; ++u) {
            const auto draw = haar_unitary(
                m, cfg.seed, stream_key(kUnitaryStreamFamily, static_cast<uint64_t>(n), static_cast<uint64_t>(u)));
            const ComplexMatrix block = draw.unitary.leftCols(n);
            for (int k = 0; k < cfg.outcomes_per_unit; ++k) {
                const auto &s = outcomes[static_cast<std::size_t>(k)];
                AnticoncentrationSample rec;
                rec.n = n;
                rec.m = m;
                rec.unit_index = u;
                rec.outcome_index = k;
                rec.outcome_rank = rank_outcome(s);
                rec.clicks = click_stats(s).clicks;
                rec.log_prob = log_outcome_probability(block, s, popts);
                rec.log_dim = log_dim;
                ++level.samples;
                if (std::isinf(rec.log_prob)) {
                    ++level.zero_count;
                    ++far_below;
                } else {
                    raw.push_back(rec.log_prob);
                    shifted.push_back(rec.log_prob + log_dim);
                    far_below += rec.log_prob < -log_dim - 10.0;
                }
                res.samples.push_back(std::move(rec));
            }
        }
        level.raw = box_summary(std::move(raw));
        level.shifted = box_summary(std::move(shifted));
        level.fraction_far_below = static_cast<double>(far_below) / static_cast<double>(level.samples);
        res.levels.push_back(level);
    }
    return res;
}

}  // namespace bosonlab
