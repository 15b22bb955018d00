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

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "bosonlab/errors.hpp"

namespace bosonlab {

/// Five-number summary. Quartiles use linear interpolation between order
/// statistics (position q (N - 1) in the sorted sample).
struct BoxSummary {
    std::size_t count = 0;
    double min = std::numeric_limits<double>::quiet_NaN();
    double q1 = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double q3 = std::numeric_limits<double>::quiet_NaN();
    double max = std::numeric_limits<double>::quiet_NaN();
};

inline double quantile_sorted(const std::vector<double> &sorted, double q) {
    if (sorted.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline BoxSummary box_summary(std::vector<double> values) {
    BoxSummary b;
    std::sort(values.begin(), values.end());
    b.count = values.size();
    if (values.empty()) {
        return b;
    }
    b.min = values.front();
    b.q1 = quantile_sorted(values, 0.25);
    b.median = quantile_sorted(values, 0.5);
    b.q3 = quantile_sorted(values, 0.75);
    b.max = values.back();
    return b;
}

/// Standard deviation of a binomial proportion estimate.
inline double binomial_sigma(double p, long trials) {
    p = std::clamp(p, 0.0, 1.0);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against cell probabilities.
/// Cells with expected count below 5 are pooled; cells with zero probability
/// must have zero counts (any hit makes the p-value 0).
inline ChiSquareResult chi_square_test(const std::vector<long> &observed, const std::vector<double> &probabilities) {
    if (observed.size() != probabilities.size()) {
        throw ContractViolation("chi_square_test: size mismatch");
    }
    long total = 0;
    for (long o : observed) {
        total += o;
    }
    ChiSquareResult r;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probabilities[i] * static_cast<double>(total);
        if (probabilities[i] <= 0.0) {
            if (observed[i] > 0) {
                r.statistic = std::numeric_limits<double>::infinity();
                r.p_value = 0.0;
                return r;
            }
            continue;
        }
        if (expected < 5.0) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += expected;
            continue;
        }
        const double d = static_cast<double>(observed[i]) - expected;
        r.statistic += d * d / expected;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double d = pooled_obs - pooled_exp;
        r.statistic += d * d / pooled_exp;
        ++cells;
    }
    r.dof = std::max(cells - 1, 1);
    r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
    return r;
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic p-value of the KS statistic (Kolmogorov distribution with the
/// Stephens small-sample correction).
inline double ks_p_value(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace bosonlab
