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

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/rng.hpp"
#include "bosonlab/stats.hpp"

namespace bosonlab {

/// An m x m Haar-random unitary together with the stream that produced it.
struct HaarDraw {
    ComplexMatrix unitary;
    uint64_t seed = 0;
    uint64_t stream_id = 0;

    int modes() const { return static_cast<int>(unitary.rows()); }
};

/// Haar unitary from the QR factorization of a complex Ginibre matrix, with the
/// columns of Q rephased by the phases of diag(R) so the law is exactly Haar.
inline HaarDraw haar_unitary(int m, uint64_t seed, uint64_t stream_id) {
    if (m < 1) {
        throw ContractViolation("haar_unitary: m must be >= 1");
    }
    Rng rng = make_stream(seed, stream_id);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix g(m, m);
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r < m; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix &r = qr.matrixQR();
    for (int j = 0; j < m; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return HaarDraw{std::move(q), seed, stream_id};
}

/// Top-left n x n block of U.
inline ComplexMatrix truncation(const ComplexMatrix &u, int n) {
    if (n < 0 || n > u.rows() || n > u.cols()) {
        throw ContractViolation("truncation: n = " + std::to_string(n) + " exceeds matrix size");
    }
    return u.topLeftCorner(n, n);
}

/// sqrt(m) times the top-left n x n block, so entries have unit second moment.
inline ComplexMatrix scaled_truncation(const ComplexMatrix &u, int n) {
    return std::sqrt(static_cast<double>(u.rows())) * truncation(u, n);
}

/// U_S: the leftmost n columns of U with row i repeated s_i times, rows kept in
/// ascending mode order.
inline ComplexMatrix submatrix_with_repetitions(const ComplexMatrix &u, const OutcomePattern &s) {
    if (s.modes() != u.rows()) {
        throw ContractViolation(
            "submatrix_with_repetitions: pattern has " + std::to_string(s.modes()) + " modes but U has " +
            std::to_string(u.rows()) + " rows");
    }
    const int n = s.photons();
    if (n > u.cols()) {
        throw ContractViolation("submatrix_with_repetitions: more photons than columns");
    }
    ComplexMatrix out(n, n);
    int row = 0;
    for (int i = 0; i < s.modes(); ++i) {
        for (int rep = 0; rep < s[static_cast<std::size_t>(i)]; ++rep) {
            out.row(row++) = u.row(i).head(n);
        }
    }
    return out;
}

struct SingularSpectrum {
    std::vector<double> values;  // non-increasing

    double max() const { return values.empty() ? 0.0 : values.front(); }
};

inline SingularSpectrum singular_spectrum(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return {};
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto &sv = svd.singularValues();
    SingularSpectrum s;
    s.values.assign(sv.data(), sv.data() + sv.size());
    return s;
}

inline double max_singular_value(const ComplexMatrix &m) { return singular_spectrum(m).max(); }

inline int numerical_rank(const ComplexMatrix &m, double relative_tol = 1e-10) {
    const auto s = singular_spectrum(m);
    int rank = 0;
    for (double v : s.values) {
        rank += v > relative_tol * std::max(1.0, s.max());
    }
    return rank;
}

/// Log of the truncated-unitary density without its normalization constant:
/// sum_i (m - 2n) log(1 - sigma_i^2 / m) for the sqrt(m)-scaled n x n matrix Z,
/// and -inf outside the support sigma_i^2 <= m. Defined only for m > 2n.
inline double log_density_unnormalized(const ComplexMatrix &z, int m) {
    require_square(z, "log_density_unnormalized");
    const auto n = static_cast<int>(z.rows());
    if (m <= 2 * n) {
        throw DomainError(
            "log_density_unnormalized: density formula requires m > 2n (m = " + std::to_string(m) +
            ", n = " + std::to_string(n) + ")");
    }
    double acc = 0.0;
    for (double s : singular_spectrum(z).values) {
        const double x = 1.0 - s * s / m;
        if (x <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        acc += (m - 2 * n) * std::log(x);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Monte Carlo experiments on truncated Haar unitaries.

struct SvTailRow {
    double delta = 0.0;
    long hits = 0;
    double empirical = 0.0;
    double sigma = 0.0;         // binomial standard error (closed form p when n = 1, else empirical)
    double log10_bound = 0.0;   // log10 of 2^{5m+n+1} delta^{2m-4n}
    double bound = 0.0;         // same, capped at +inf when not representable
    double closed_form = std::numeric_limits<double>::quiet_NaN();  // (2 delta - delta^2)^{m-1}, n = 1 only
};

struct SvTailResult {
    int m = 0;
    int n = 0;
    long trials = 0;
    uint64_t seed = 0;
    std::vector<SvTailRow> rows;
    bool monotone = true;     // tail non-increasing as delta decreases
    bool consistent = true;   // empirical <= min(1, bound) + 4 sigma at every delta
};

inline double sv_tail_log10_bound(int m, int n, double delta) {
    return (5.0 * m + n + 1.0) * std::log10(2.0) + (2.0 * m - 4.0 * n) * std::log10(delta);
}

inline SvTailResult max_sv_tail_experiment(int m, int n, std::vector<double> deltas, long trials, uint64_t seed) {
    if (m <= 2 * n) {
        throw DomainError("max_sv_tail_experiment: requires m > 2n");
    }
    if (n < 1 || trials < 1) {
        throw ContractViolation("max_sv_tail_experiment: need n >= 1 and trials >= 1");
    }
    for (double d : deltas) {
        if (!(d > 0.0 && d < 0.5)) {
            throw ContractViolation("max_sv_tail_experiment: delta must lie in (0, 1/2)");
        }
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<>());

    SvTailResult res;
    res.m = m;
    res.n = n;
    res.trials = trials;
    res.seed = seed;
    std::vector<long> hits(deltas.size(), 0);
    for (long t = 0; t < trials; ++t) {
        const auto u = haar_unitary(m, seed, static_cast<uint64_t>(t));
        const double smax = max_singular_value(truncation(u.unitary, n));
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            hits[i] += smax >= 1.0 - deltas[i];
        }
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        SvTailRow row;
        row.delta = deltas[i];
        row.hits = hits[i];
        row.empirical = static_cast<double>(hits[i]) / static_cast<double>(trials);
        row.log10_bound = sv_tail_log10_bound(m, n, deltas[i]);
        row.bound = row.log10_bound > 300 ? std::numeric_limits<double>::infinity() : std::pow(10.0, row.log10_bound);
        double p = row.empirical;
        if (n == 1) {
            row.closed_form = std::pow(2.0 * deltas[i] - deltas[i] * deltas[i], m - 1);
            p = row.closed_form;
        }
        row.sigma = std::max(binomial_sigma(p, trials), 1.0 / static_cast<double>(trials));
        if (row.empirical > std::min(1.0, row.bound) + 4.0 * row.sigma) {
            res.consistent = false;
        }
        if (i > 0 && row.empirical > res.rows.back().empirical) {
            res.monotone = false;
        }
        res.rows.push_back(row);
    }
    return res;
}

/// E (1 - |U_11|)^{-2} for an m x m Haar unitary, by quadrature of the
/// Beta(1, m-1) law of |U_11|^2. Infinite for m <= 3.
inline double inverse_gap_moment_n1(int m) {
    if (m <= 3) {
        return std::numeric_limits<double>::infinity();
    }
    // x = u^2: integrand 2u (m-1) (1-u^2)^{m-2} / (1-u)^2 = 2u (m-1) (1+u)^{m-2} (1-u)^{m-4}
    auto f = [m](double u) { return 2.0 * u * (m - 1) * std::pow(1.0 + u, m - 2) * std::pow(1.0 - u, m - 4); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 10, 1e-13);
}

struct InverseGapResult {
    int m = 0;
    int n = 0;
    long trials = 0;
    uint64_t seed = 0;
    double epsilon = 0.0;          // m / n - 2
    bool precondition_met = false; // m == ceil((2 + eps) n) and n >= 2 / eps
    double estimate = 0.0;         // mean of (1 - sigma_max)^{-2}
    double half_estimate = 0.0;    // same over the first half of the trials
    double relative_change = 0.0;  // |estimate - half_estimate| / estimate
    double max_share = 0.0;        // largest single sample / sum of samples
    double log10_bound = 0.0;      // 3 / eps
    double quadrature = std::numeric_limits<double>::quiet_NaN();  // n = 1 reference
    bool finite = false;
    bool stable = false;           // relative_change <= 0.2 and max_share <= 0.5
    bool within_bound = false;     // log10(estimate) <= log10_bound
};

inline InverseGapResult inverse_gap_moment_experiment(int m, int n, long trials, uint64_t seed) {
    if (m <= 2 * n) {
        throw DomainError("inverse_gap_moment_experiment: requires m > 2n");
    }
    if (n < 1 || trials < 2) {
        throw ContractViolation("inverse_gap_moment_experiment: need n >= 1 and trials >= 2");
    }
    InverseGapResult res;
    res.m = m;
    res.n = n;
    res.trials = trials;
    res.seed = seed;
    res.epsilon = static_cast<double>(m) / n - 2.0;
    res.precondition_met = n >= 2.0 / res.epsilon - 1e-12;
    res.log10_bound = 3.0 / res.epsilon;
    if (n == 1) {
        res.quadrature = inverse_gap_moment_n1(m);
    }

    const long half = trials / 2;
    double sum = 0.0;
    double half_sum = 0.0;
    double largest = 0.0;
    for (long t = 0; t < trials; ++t) {
        const auto u = haar_unitary(m, seed, static_cast<uint64_t>(t));
        const double smax = max_singular_value(truncation(u.unitary, n));
        const double gap = 1.0 - smax;
        const double y = 1.0 / (gap * gap);
        sum += y;
        largest = std::max(largest, y);
        if (t + 1 == half) {
            half_sum = sum;
        }
    }
    res.estimate = sum / static_cast<double>(trials);
    res.half_estimate = half_sum / static_cast<double>(half);
    res.finite = std::isfinite(res.estimate);
    res.relative_change = std::abs(res.estimate - res.half_estimate) / res.estimate;
    res.max_share = largest / sum;
    res.stable = res.finite && res.relative_change <= 0.2 && res.max_share <= 0.5;
    res.within_bound = res.finite && std::log10(res.estimate) <= res.log10_bound;
    return res;
}

// ---------------------------------------------------------------------------
// Sphere geometry.

/// Volume of the unit ball in d real dimensions.
inline double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

/// Surface area of the unit sphere S^{d-1} in R^d.
inline double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

struct SphereResult {
    int dim = 0;
    int k = 0;
    double delta = 0.0;
    long trials = 0;
    uint64_t seed = 0;

    // Pr(x_1^2 + ... + x_k^2 <= delta^2), i.e. the first k coordinates lie in a
    // ball of radius delta, against 2^{dim/2} delta^k.
    double coord_empirical = 0.0;
    double coord_exact = 0.0;
    double coord_sigma = 0.0;
    double coord_bound = 0.0;
    // The same sum compared against delta instead of delta^2.
    double coord_literal_empirical = 0.0;
    double coord_literal_exact = 0.0;

    // Spherical cap {w : |w - e_1| <= delta} on S^{dim-1}.
    double cap_fraction_empirical = 0.0;
    double cap_fraction_exact = 0.0;
    double cap_fraction_sigma = 0.0;
    double cap_area_empirical = 0.0;
    double cap_area_sigma = 0.0;
    double cap_area_lower_bound = 0.0;  // omega_{dim-1} 2^{-dim/2 - 1/2} delta^{dim-1}
};

/// Pr(x_1^2 + ... + x_k^2 <= a) for x uniform on S^{dim-1}: the regularized
/// incomplete beta I_a(k/2, (dim-k)/2).
inline double sphere_coordinate_cdf(int dim, int k, double a) {
    if (a <= 0.0) {
        return 0.0;
    }
    if (k >= dim) {
        return a >= 1.0 ? 1.0 : 0.0;
    }
    return boost::math::ibeta(k / 2.0, (dim - k) / 2.0, std::min(a, 1.0));
}

/// Fraction of S^{dim-1} within chordal distance delta of a pole.
inline double sphere_cap_fraction(int dim, double delta) {
    // |w - e_1|^2 = 2 - 2 w_1, so the cap is w_1 >= 1 - delta^2 / 2.
    const double h = 1.0 - delta * delta / 2.0;
    if (h <= 0.0) {
        return 1.0 - 0.5 * (1.0 - sphere_coordinate_cdf(dim, 1, h * h));
    }
    return 0.5 * (1.0 - sphere_coordinate_cdf(dim, 1, h * h));
}

inline SphereResult sphere_lemma_experiments(int dim, int k, double delta, long trials, uint64_t seed) {
    if (k < 1 || k > dim) {
        throw ContractViolation("sphere_lemma_experiments: need 1 <= k <= dim");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ContractViolation("sphere_lemma_experiments: delta must lie in (0, 1)");
    }
    SphereResult r;
    r.dim = dim;
    r.k = k;
    r.delta = delta;
    r.trials = trials;
    r.seed = seed;
    r.coord_bound = std::pow(2.0, dim / 2.0) * std::pow(delta, k);
    r.coord_exact = sphere_coordinate_cdf(dim, k, delta * delta);
    r.coord_literal_exact = sphere_coordinate_cdf(dim, k, delta);
    r.cap_fraction_exact = sphere_cap_fraction(dim, delta);
    r.cap_area_lower_bound =
        unit_ball_volume(dim - 1) * std::pow(2.0, -dim / 2.0 - 0.5) * std::pow(delta, dim - 1);

    Rng rng = make_stream(seed, stream_key(static_cast<uint64_t>(dim), static_cast<uint64_t>(k)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(dim));
    long coord_hits = 0;
    long literal_hits = 0;
    long cap_hits = 0;
    for (long t = 0; t < trials; ++t) {
        double norm2 = 0.0;
        for (auto &v : x) {
            v = normal(rng);
            norm2 += v * v;
        }
        double head = 0.0;
        for (int j = 0; j < k; ++j) {
            head += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        }
        head /= norm2;
        coord_hits += head <= delta * delta;
        literal_hits += head <= delta;
        const double w1 = x[0] / std::sqrt(norm2);
        cap_hits += 2.0 - 2.0 * w1 <= delta * delta;
    }
    const auto n = static_cast<double>(trials);
    r.coord_empirical = coord_hits / n;
    r.coord_literal_empirical = literal_hits / n;
    r.coord_sigma = std::max(binomial_sigma(r.coord_exact, trials), 1.0 / n);
    r.cap_fraction_empirical = cap_hits / n;
    r.cap_fraction_sigma = std::max(binomial_sigma(r.cap_fraction_exact, trials), 1.0 / n);
    const double area = unit_sphere_area(dim);
    r.cap_area_empirical = r.cap_fraction_empirical * area;
    r.cap_area_sigma = r.cap_fraction_sigma * area;
    return r;
}

}  // namespace bosonlab
