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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "bosonlab/embedding.hpp"
#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/permanent.hpp"
#include "bosonlab/randmat.hpp"
#include "bosonlab/rng.hpp"

namespace bosonlab {

// Extrapolation from [0, delta] to 1 multiplies data and rounding errors by up
// to (4 / delta)^d, so path values and fits use 50 significant digits.
using PathReal = boost::multiprecision::cpp_bin_float_50;
using PathComplex = boost::multiprecision::cpp_complex_50;
using PathMatrix = Eigen::Matrix<PathComplex, Eigen::Dynamic, Eigen::Dynamic>;

inline PathReal abs2(const PathComplex &z) {
    const PathReal re = z.real();
    const PathReal im = z.imag();
    return re * re + im * im;
}

inline constexpr int kMaxSmugglePhotons = 6;

// ---------------------------------------------------------------------------
// B_t = (1 - t) B_0 + t A_S. Both endpoints share the row repetition pattern S,
// so every B_t does too, and |Per(B_t)|^2 is a real polynomial of degree 2n.

struct SmugglePathSpec {
    OutcomePattern pattern{std::vector<int>{0}};
    ComplexMatrix b0;      // sqrt(m) U_S
    IntegerMatrix a;       // c x n embedding
    IntegerMatrix a_s;     // n x n, rows repeated per S
};

inline SmugglePathSpec make_smuggle_path(const ComplexMatrix &u, const EmbeddingSpec &embedding) {
    SmugglePathSpec spec;
    spec.pattern = embedding.pattern;
    spec.b0 = std::sqrt(static_cast<double>(u.rows())) * submatrix_with_repetitions(u, embedding.pattern);
    spec.a = embedding.a;
    spec.a_s = embedding.a_s;
    if (spec.b0.rows() != static_cast<Eigen::Index>(spec.a_s.rows())) {
        throw ContractViolation("make_smuggle_path: B_0 and A_S differ in size");
    }
    return spec;
}

inline PathMatrix path_matrix(const SmugglePathSpec &spec, PathReal t) {
    const auto n = spec.b0.rows();
    PathMatrix b(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const PathComplex z(spec.b0(r, c).real(), spec.b0(r, c).imag());
            const PathReal a(spec.a_s(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
            b(r, c) = (1.0 - t) * z + t * a;
        }
    }
    return b;
}

/// |Per(B_t)|^2.
inline PathReal path_value(const SmugglePathSpec &spec, PathReal t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ContractViolation("path_value: t must lie in [0, 1]");
    }
    return abs2(per_exact(path_matrix(spec, t)));
}

// ---------------------------------------------------------------------------
// Least-squares polynomial fitting on nodes in [0, delta] with extrapolation
// to t = 1. Nodes are mapped to x = 2 t / delta - 1 in [-1, 1] and the basis is
// the family of polynomials orthogonal on the kept nodes (three-term recurrence).

struct PolySamplePath {
    int degree = 0;
    PathReal delta = 0.0;
    std::vector<PathReal> t;
    std::vector<PathReal> y;
    double eta = 0.0;            // fraction of points the fit may discard
    std::string noise = "none";  // description of injected noise
};

inline std::vector<PathReal> equispaced_nodes(PathReal delta, std::size_t count) {
    if (count < 2) {
        throw ContractViolation("equispaced_nodes: need at least two nodes");
    }
    std::vector<PathReal> t(count);
    for (std::size_t i = 0; i < count; ++i) {
        t[i] = delta * static_cast<PathReal>(i) / static_cast<PathReal>(count - 1);
    }
    return t;
}

/// Polynomials p_0..p_d orthogonal under the counting measure on the given
/// points: p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x).
class DiscreteOrthogonalBasis {
   public:
    DiscreteOrthogonalBasis(const std::vector<PathReal> &x, int degree) : degree_(degree) {
        const std::size_t n = x.size();
        values_.assign(static_cast<std::size_t>(degree + 1), std::vector<PathReal>(n, 0.0));
        std::fill(values_[0].begin(), values_[0].end(), 1.0);
        norms_.push_back(static_cast<PathReal>(n));
        for (int k = 0; k < degree; ++k) {
            const auto &pk = values_[static_cast<std::size_t>(k)];
            PathReal xpp = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                xpp += x[i] * pk[i] * pk[i];
            }
            const PathReal a = xpp / norms_[static_cast<std::size_t>(k)];
            const PathReal b = k == 0 ? 0.0 : norms_[static_cast<std::size_t>(k)] / norms_[static_cast<std::size_t>(k - 1)];
            auto &next = values_[static_cast<std::size_t>(k + 1)];
            PathReal nn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = (x[i] - a) * pk[i] - (k == 0 ? 0.0 : b * values_[static_cast<std::size_t>(k - 1)][i]);
                nn += next[i] * next[i];
            }
            alpha_.push_back(a);
            beta_.push_back(b);
            norms_.push_back(nn);
        }
    }

    int degree() const { return degree_; }
    PathReal norm2(int k) const { return norms_[static_cast<std::size_t>(k)]; }
    const std::vector<PathReal> &values(int k) const { return values_[static_cast<std::size_t>(k)]; }

    /// p_0(x), ..., p_d(x) at an arbitrary point.
    std::vector<PathReal> evaluate(PathReal x) const {
        std::vector<PathReal> p(static_cast<std::size_t>(degree_ + 1));
        p[0] = 1.0;
        for (int k = 0; k < degree_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            p[ku + 1] = (x - alpha_[ku]) * p[ku] - (k == 0 ? 0.0 : beta_[ku] * p[ku - 1]);
        }
        return p;
    }

   private:
    int degree_;
    std::vector<std::vector<PathReal>> values_;
    std::vector<PathReal> norms_;
    std::vector<PathReal> alpha_;
    std::vector<PathReal> beta_;
};

struct LeastSquaresFit {
    std::vector<PathReal> x;       // mapped nodes used in the fit
    std::vector<PathReal> coeffs;  // coefficients in the orthogonal basis
    DiscreteOrthogonalBasis basis;

    PathReal operator()(PathReal xv) const {
        const auto p = basis.evaluate(xv);
        PathReal acc = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            acc += coeffs[k] * p[k];
        }
        return acc;
    }
};

inline LeastSquaresFit least_squares_fit(std::vector<PathReal> x, const std::vector<PathReal> &y, int degree) {
    DiscreteOrthogonalBasis basis(x, degree);
    std::vector<PathReal> coeffs(static_cast<std::size_t>(degree + 1));
    for (int k = 0; k <= degree; ++k) {
        const auto &pk = basis.values(k);
        PathReal acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += y[i] * pk[i];
        }
        coeffs[static_cast<std::size_t>(k)] = acc / basis.norm2(k);
    }
    return LeastSquaresFit{std::move(x), std::move(coeffs), std::move(basis)};
}

struct ExtrapolationResult {
    PathReal estimate = 0.0;
    double residual_rms = 0.0;       // over kept points
    double amplification_l1 = 0.0;  // worst-case gain for bounded per-point noise
    double amplification_l2 = 0.0;  // gain for independent unit-variance noise
    std::size_t kept = 0;
    std::size_t discarded = 0;
    int iterations = 0;
    std::vector<std::size_t> kept_indices;
};

/// Weights w with estimate = sum_i w_i y_i for a least-squares fit on x
/// evaluated at x0.
inline std::vector<PathReal> extrapolation_weights(const DiscreteOrthogonalBasis &basis, std::size_t points, PathReal x0) {
    const auto p0 = basis.evaluate(x0);
    std::vector<PathReal> w(points, 0.0);
    for (int k = 0; k <= basis.degree(); ++k) {
        const PathReal f = p0[static_cast<std::size_t>(k)] / basis.norm2(k);
        const auto &pk = basis.values(k);
        for (std::size_t i = 0; i < points; ++i) {
            w[i] += f * pk[i];
        }
    }
    return w;
}

/// Trimmed least squares: keep the N - floor(eta N) points with the smallest
/// residuals, refit, and repeat until the kept set stops changing.
inline ExtrapolationResult fit_and_extrapolate(const PolySamplePath &path, PathReal target = 1.0) {
    const std::size_t n = path.t.size();
    if (path.y.size() != n) {
        throw ContractViolation("fit_and_extrapolate: t and y differ in length");
    }
    if (path.degree < 0) {
        throw ContractViolation("fit_and_extrapolate: negative degree");
    }
    if (!(path.eta >= 0.0 && path.eta < 0.25)) {
        throw ContractViolation("fit_and_extrapolate: eta must lie in [0, 1/4)");
    }
    if (!(path.delta > 0.0)) {
        throw ContractViolation("fit_and_extrapolate: delta must be positive");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(path.t[i] > path.t[i - 1])) {
            throw ContractViolation("fit_and_extrapolate: nodes must be strictly increasing");
        }
    }
    const auto drop = static_cast<std::size_t>(std::floor(path.eta * static_cast<double>(n)));
    const std::size_t keep = n - drop;
    if (keep < static_cast<std::size_t>(path.degree) + 1) {
        throw ContractViolation(
            "fit_and_extrapolate: " + std::to_string(keep) + " usable points for degree " +
            std::to_string(path.degree));
    }

    std::vector<PathReal> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 2.0 * path.t[i] / path.delta - 1.0;
    }
    const PathReal x0 = 2.0 * target / path.delta - 1.0;

    std::vector<std::size_t> kept(n);
    std::iota(kept.begin(), kept.end(), 0);
    auto fit_subset = [&](const std::vector<std::size_t> &idx) {
        std::vector<PathReal> xs;
        std::vector<PathReal> ys;
        for (std::size_t i : idx) {
            xs.push_back(x[i]);
            ys.push_back(path.y[i]);
        }
        return least_squares_fit(std::move(xs), ys, path.degree);
    };

    LeastSquaresFit fit = fit_subset(kept);
    ExtrapolationResult res;
    if (drop > 0) {
        constexpr int kMaxIterations = 100;
        std::vector<std::size_t> order(n);
        std::vector<PathReal> resid(n);
        for (int it = 0; it < kMaxIterations; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                resid[i] = abs(path.y[i] - fit(x[i]));
            }
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return resid[a] < resid[b]; });
            std::vector<std::size_t> next(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
            std::sort(next.begin(), next.end());
            ++res.iterations;
            if (next == kept) {
                break;
            }
            kept = std::move(next);
            fit = fit_subset(kept);
        }
    }

    res.estimate = fit(x0);
    PathReal ss = 0.0;
    for (std::size_t i : kept) {
        const PathReal r = path.y[i] - fit(x[i]);
        ss += r * r;
    }
    res.residual_rms = static_cast<double>(sqrt(ss / static_cast<PathReal>(kept.size())));
    const auto w = extrapolation_weights(fit.basis, kept.size(), x0);
    PathReal l1 = 0.0;
    PathReal l2 = 0.0;
    for (PathReal v : w) {
        l1 += abs(v);
        l2 += v * v;
    }
    res.amplification_l1 = static_cast<double>(l1);
    res.amplification_l2 = static_cast<double>(sqrt(l2));
    res.kept = kept.size();
    res.discarded = n - kept.size();
    res.kept_indices = std::move(kept);
    return res;
}

/// |T_d(x)| for |x| >= 1: the least possible worst-case gain of any linear
/// extrapolation to x that is exact on polynomials of degree d and uses data on
/// [-1, 1].
inline double chebyshev_magnitude(int d, double x) {
    return std::cosh(d * std::acosh(std::abs(x)));
}

// ---------------------------------------------------------------------------
// Synthetic polynomials.

struct SyntheticPolynomial {
    std::vector<PathReal> coeffs;  // in powers of t, for data generation only

    PathReal operator()(PathReal t) const {
        PathReal acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }
};

inline SyntheticPolynomial random_polynomial(int degree, Rng &rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    SyntheticPolynomial p;
    for (int k = 0; k <= degree; ++k) {
        p.coeffs.push_back(unif(rng));
    }
    return p;
}

struct SyntheticPathOptions {
    std::size_t points = 0;    // 0 selects 100 d^2 (at least d + 1)
    double noise = 0.0;        // per-point noise, uniform on [-noise, noise]
    double corrupt_fraction = 0.0;  // share of points shifted by +-corrupt_size
    double corrupt_size = 1.0;
    double eta = 0.0;
};

inline std::size_t default_point_count(int degree) {
    return std::max<std::size_t>(100 * static_cast<std::size_t>(degree) * static_cast<std::size_t>(degree),
                                 static_cast<std::size_t>(degree) + 2);
}

inline PolySamplePath sample_polynomial_path(
    const SyntheticPolynomial &p, int degree, PathReal delta, const SyntheticPathOptions &opts, Rng &rng) {
    PolySamplePath path;
    path.degree = degree;
    path.delta = delta;
    path.eta = opts.eta;
    path.t = equispaced_nodes(delta, opts.points ? opts.points : default_point_count(degree));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (PathReal t : path.t) {
        path.y.push_back(p(t) + static_cast<PathReal>(opts.noise * unif(rng)));
    }
    const auto bad = static_cast<std::size_t>(std::floor(opts.corrupt_fraction * static_cast<double>(path.t.size())));
    if (bad > 0) {
        std::vector<std::size_t> idx(path.t.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::bernoulli_distribution sign(0.5);
        for (std::size_t k = 0; k < bad; ++k) {
            path.y[idx[k]] += sign(rng) ? opts.corrupt_size : -opts.corrupt_size;
        }
    }
    path.noise = "uniform(" + std::to_string(opts.noise) + ")";
    if (bad > 0) {
        path.noise += "+" + std::to_string(bad) + " corrupted";
    }
    return path;
}

// ---------------------------------------------------------------------------
// Error amplification sweep.

struct BlowupRow {
    int degree = 0;
    double delta = 0.0;
    std::size_t points = 0;
    double amplification = 0.0;      // worst case, l1 norm of the weights
    double amplification_l2 = 0.0;
    double empirical = 0.0;          // |error| / noise, mean over repetitions
    double reference = 0.0;          // (1 / delta)^d
    double ratio = 0.0;              // amplification / reference
    double chebyshev = 0.0;          // |T_d(2 / delta - 1)|
    double calibrated = 0.0;         // reference * exp(C d + c0) from the sweep fit
};

struct BlowupResult {
    uint64_t seed = 0;
    double noise = 0.0;
    std::vector<BlowupRow> rows;
    double c_per_degree = 0.0;  // C in ln A = d ln(1/delta) + C d + c0
    double c0 = 0.0;
    double max_log_residual = 0.0;  // max |ln A - fitted| over the sweep
    // slope of ln A against d at each delta, paired with ln(1/delta)
    std::vector<std::pair<double, double>> slopes;
};

inline BlowupResult blowup_scaling_experiment(
    const std::vector<int> &degrees, const std::vector<double> &deltas, uint64_t seed, double noise = 1e-6,
    int repetitions = 8, std::size_t points = 0) {
    BlowupResult res;
    res.seed = seed;
    res.noise = noise;
    for (int d : degrees) {
        if (d < 1) {
            throw ContractViolation("blowup_scaling_experiment: degrees must be >= 1");
        }
        for (double delta : deltas) {
            if (!(delta > 0.0 && delta <= 1.0)) {
                throw ContractViolation("blowup_scaling_experiment: delta must lie in (0, 1]");
            }
            BlowupRow row;
            row.degree = d;
            row.delta = delta;
            row.reference = std::pow(1.0 / delta, d);
            row.chebyshev = chebyshev_magnitude(d, 2.0 / delta - 1.0);
            double err = 0.0;
            for (int rep = 0; rep < repetitions; ++rep) {
                Rng rng = make_stream(seed, stream_key(static_cast<uint64_t>(d), std::bit_cast<uint64_t>(delta),
                                                       static_cast<uint64_t>(rep)));
                const auto p = random_polynomial(d, rng);
                SyntheticPathOptions opts;
                opts.points = points;
                opts.noise = noise;
                const auto path = sample_polynomial_path(p, d, delta, opts, rng);
                const auto fit = fit_and_extrapolate(path);
                row.points = path.t.size();
                row.amplification = fit.amplification_l1;
                row.amplification_l2 = fit.amplification_l2;
                err += static_cast<double>(abs(fit.estimate - p(1.0)));
            }
            row.empirical = noise > 0.0 ? err / repetitions / noise : 0.0;
            row.ratio = row.amplification / row.reference;
            res.rows.push_back(row);
        }
    }

    // ln A - d ln(1/delta) = C d + c0 by ordinary least squares.
    const auto k = static_cast<double>(res.rows.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto &r : res.rows) {
        const double xv = r.degree;
        const double yv = std::log(r.amplification) - r.degree * std::log(1.0 / r.delta);
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
    }
    const double den = k * sxx - sx * sx;
    res.c_per_degree = den != 0.0 ? (k * sxy - sx * sy) / den : 0.0;
    res.c0 = (sy - res.c_per_degree * sx) / k;
    for (auto &r : res.rows) {
        const double fitted = r.degree * std::log(1.0 / r.delta) + res.c_per_degree * r.degree + res.c0;
        r.calibrated = std::exp(fitted);
        res.max_log_residual = std::max(res.max_log_residual, std::abs(std::log(r.amplification) - fitted));
    }

    for (double delta : deltas) {
        double n = 0.0, ax = 0.0, ay = 0.0, axx = 0.0, axy = 0.0;
        for (const auto &r : res.rows) {
            if (r.delta == delta) {
                const double yv = std::log(r.amplification);
                n += 1.0;
                ax += r.degree;
                ay += yv;
                axx += r.degree * static_cast<double>(r.degree);
                axy += r.degree * yv;
            }
        }
        if (n >= 2.0) {
            res.slopes.emplace_back((n * axy - ax * ay) / (n * axx - ax * ax), std::log(1.0 / delta));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// End to end: embed a {0,1} matrix into a Haar draw and recover the squared
// permanent of the embedding from path values near t = 0.

struct SmuggleDemoOptions {
    double delta = 0.0;          // 0 selects 1 / (4 n^2)
    std::size_t points = 0;      // 0 selects 400 n^2
    double noise = 0.0;          // per-node noise, uniform on [-noise, noise]
    unsigned partitions = 1;
};

struct SmuggleDemoResult {
    int n = 0;
    int m = 0;
    uint64_t seed = 0;
    OutcomePattern pattern{std::vector<int>{0}};
    IntegerMatrix base;
    int base_redraws = 0;
    double delta = 0.0;
    std::size_t points = 0;
    double noise = 0.0;
    BigInt per_a_s;
    PathReal truth = 0.0;       // Per(A_S)^2
    PathReal estimate = 0.0;
    double relative_error = 0.0;
    double amplification = 0.0;     // l1 weights
    double envelope = 0.0;          // noise * amplification
    bool exact_recovery = false;    // rounding the estimate gives Per(A_S)^2
    std::vector<PathReal> t;
    std::vector<PathReal> y;
    double b0_mean_abs2 = 0.0;
};

inline SmuggleDemoResult end_to_end_smuggle_demo(int n, int m, uint64_t seed, const SmuggleDemoOptions &opts = {}) {
    if (n < 1 || n > kMaxSmugglePhotons) {
        throw CapacityError("end_to_end_smuggle_demo: n must lie in [1, 6]");
    }
    if (m < n) {
        throw ContractViolation("end_to_end_smuggle_demo: need m >= n");
    }
    SmuggleDemoResult res;
    res.n = n;
    res.m = m;
    res.seed = seed;
    res.noise = opts.noise;
    res.delta = opts.delta > 0.0 ? opts.delta : 1.0 / (4.0 * n * n);
    res.points = opts.points ? opts.points : static_cast<std::size_t>(400 * n * n);

    Rng rng = make_stream(seed, stream_key(0x5E, static_cast<uint64_t>(n), static_cast<uint64_t>(m)));
    res.pattern = sample_uniform_outcome(m, n, rng);
    const auto c = static_cast<std::size_t>(click_stats(res.pattern).clicks);
    do {
        res.base = random_binary_matrix(c, c, rng);
        ++res.base_redraws;
    } while (per_exact_int(res.base) == 0);
    --res.base_redraws;
    const EmbeddingSpec emb = build_embedding(res.base, res.pattern);
    const auto u = haar_unitary(m, seed, stream_key(0x5F, static_cast<uint64_t>(n), static_cast<uint64_t>(m)));
    const SmugglePathSpec spec = make_smuggle_path(u.unitary, emb);
    res.b0_mean_abs2 = spec.b0.cwiseAbs2().mean();

    res.per_a_s = per_exact_int(emb.a_s);
    res.truth = PathReal(res.per_a_s * res.per_a_s);

    PolySamplePath path;
    path.degree = 2 * n;
    path.delta = res.delta;
    path.t = equispaced_nodes(res.delta, res.points);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (PathReal t : path.t) {
        PathReal v = abs2(per_exact(path_matrix(spec, t), PermanentOptions{opts.partitions}));
        if (opts.noise > 0.0) {
            v += static_cast<PathReal>(opts.noise * unif(rng));
        }
        path.y.push_back(v);
    }
    path.noise = opts.noise > 0.0 ? "uniform(" + std::to_string(opts.noise) + ")" : "none";

    const auto fit = fit_and_extrapolate(path);
    res.estimate = fit.estimate;
    res.relative_error = static_cast<double>(abs(res.estimate - res.truth) / res.truth);
    res.amplification = fit.amplification_l1;
    res.envelope = opts.noise * fit.amplification_l1;
    res.exact_recovery = static_cast<BigInt>(round(res.estimate)) == res.per_a_s * res.per_a_s;
    res.t = std::move(path.t);
    res.y = std::move(path.y);
    return res;
}

}  // namespace bosonlab
