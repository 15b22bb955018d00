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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/permanent.hpp"
#include "bosonlab/randmat.hpp"

namespace bosonlab {

// ---------------------------------------------------------------------------
// Total photon number of m two-mode squeezed vacua with squeezing r is negative
// binomial: P(n) = C(n + m - 1, n) tanh(r)^{2n} / cosh(r)^{2m}.

inline void require_squeezing(int m, double r, const char *what) {
    if (m < 1) {
        throw ContractViolation(std::string(what) + ": m must be >= 1");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw ContractViolation(std::string(what) + ": r must be finite and >= 0");
    }
}

inline double photon_number_log_pmf(int m, double r, int n) {
    require_squeezing(m, r, "photon_number_pmf");
    if (n < 0) {
        throw ContractViolation("photon_number_pmf: n must be >= 0");
    }
    if (r == 0.0) {
        return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    const double log_binom = std::lgamma(n + m) - std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(m));
    return log_binom + 2.0 * n * std::log(std::tanh(r)) - 2.0 * m * std::log(std::cosh(r));
}

inline double photon_number_pmf(int m, double r, int n) { return std::exp(photon_number_log_pmf(m, r, n)); }

/// Smallest N with Pr(n > N) < tail. Past the mode the pmf ratio
/// rho(n) = (n + m) / (n + 1) tanh^2 r decreases, so the tail beyond N is at
/// most P(N + 1) / (1 - rho(N + 1)).
inline int photon_number_truncation(int m, double r, double tail = 1e-12) {
    require_squeezing(m, r, "photon_number_truncation");
    if (r == 0.0) {
        return 0;
    }
    const double t2 = std::tanh(r) * std::tanh(r);
    for (int n = 0;; ++n) {
        const double rho = (n + 1.0 + m) / (n + 2.0) * t2;
        if (rho < 1.0 && photon_number_pmf(m, r, n + 1) / (1.0 - rho) < tail) {
            return n;
        }
    }
}

/// argmax_n P(n) by scanning; the pmf is unimodal.
inline int photon_number_mode(int m, double r) {
    require_squeezing(m, r, "photon_number_mode");
    int n = 0;
    while (photon_number_log_pmf(m, r, n + 1) > photon_number_log_pmf(m, r, n)) {
        ++n;
    }
    return n;
}

struct PhotonStats {
    int m = 0;
    double r = 0.0;
    int truncation = 0;
    double mass = 0.0;                 // sum of P(n) up to truncation
    double mean = 0.0;                 // by summation
    double variance = 0.0;             // by summation
    double mean_formula = 0.0;         // m sinh^2 r
    double variance_formula = 0.0;     // m sinh^2 r cosh^2 r
    double variance_alternative = 0.0; // m cosh^2 r / sinh^4 r
    int mode = 0;                      // by scan
    int mode_formula = 0;              // floor((m - 1) sinh^2 r)
    int mode_alternative = 0;          // floor(m sinh^2 r)
    double p_mode = 0.0;
    double p_mode_sqrt_m = 0.0;
};

inline PhotonStats photon_stats(int m, double r) {
    PhotonStats s;
    s.m = m;
    s.r = r;
    s.truncation = photon_number_truncation(m, r);
    double mass = 0.0, mean = 0.0, second = 0.0;
    for (int n = 0; n <= s.truncation; ++n) {
        const double p = photon_number_pmf(m, r, n);
        mass += p;
        mean += n * p;
        second += static_cast<double>(n) * n * p;
    }
    s.mass = mass;
    s.mean = mean;
    s.variance = second - mean * mean;
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double ch2 = std::cosh(r) * std::cosh(r);
    s.mean_formula = m * sh2;
    s.variance_formula = m * sh2 * ch2;
    s.variance_alternative = sh2 > 0.0 ? m * ch2 / (sh2 * sh2) : std::numeric_limits<double>::infinity();
    s.mode = photon_number_mode(m, r);
    s.mode_formula = static_cast<int>(std::floor((m - 1) * sh2));
    s.mode_alternative = static_cast<int>(std::floor(m * sh2));
    s.p_mode = photon_number_pmf(m, r, s.mode);
    s.p_mode_sqrt_m = s.p_mode * std::sqrt(static_cast<double>(m));
    return s;
}

// ---------------------------------------------------------------------------
// Postselected probabilities.

/// U_{S,T}: row i of U repeated t_i times and column j repeated s_j times.
inline ComplexMatrix submatrix_rows_cols(const ComplexMatrix &u, const OutcomePattern &s, const OutcomePattern &t) {
    if (s.photons() != t.photons()) {
        throw ContractViolation(
            "submatrix_rows_cols: S carries " + std::to_string(s.photons()) + " photons, T carries " +
            std::to_string(t.photons()));
    }
    if (t.modes() > u.rows() || s.modes() > u.cols()) {
        throw ContractViolation("submatrix_rows_cols: pattern has more modes than U");
    }
    const auto rows = t.photon_modes();
    const auto cols = s.photon_modes();
    ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = u(rows[r], cols[c]);
        }
    }
    return out;
}

/// |Per(U_{S,T})|^2 / (prod s_i! prod t_j!), no dimension factor.
inline double pair_weight(const ComplexMatrix &u, const OutcomePattern &s, const OutcomePattern &t) {
    const double abs2 = std::norm(per_exact(submatrix_rows_cols(u, s, t)));
    return abs2 / (s.factorial_product() * t.factorial_product()).convert_to<double>();
}

/// p_U(S, T) = |Per(U_{S,T})|^2 / (|S_{m,n}| prod s_i! prod t_j!).
inline double postselected_probability(const ComplexMatrix &u, const OutcomePattern &s, const OutcomePattern &t) {
    require_square(u, "postselected_probability");
    const double dim = dim_fock(static_cast<int>(u.rows()), s.photons()).convert_to<double>();
    return pair_weight(u, s, t) / dim;
}

/// Sum of p_U(S, T) over every pair of n-photon patterns.
inline double postselected_total(const ComplexMatrix &u, int n) {
    const auto outcomes = enumerate_outcomes(static_cast<int>(u.rows()), n);
    double total = 0.0;
    for (const auto &s : outcomes) {
        for (const auto &t : outcomes) {
            total += postselected_probability(u, s, t);
        }
    }
    return total;
}

struct GbsConfig {
    int m = 0;
    double r = 0.0;
    ComplexMatrix u;
    std::optional<ComplexMatrix> w;  // second interferometer; identity when absent

    ComplexMatrix transition() const {
        ComplexMatrix c = std::tanh(r) * u;
        if (w) {
            c = c * w->adjoint();
        }
        return c;
    }

    double log_normalization() const { return 2.0 * m * std::log(std::cosh(r)); }
};

inline GbsConfig make_gbs_config(int m, double r, const ComplexMatrix &u) {
    require_squeezing(m, r, "make_gbs_config");
    if (u.rows() != m || u.cols() != m) {
        throw ContractViolation("make_gbs_config: U must be m x m");
    }
    return GbsConfig{m, r, u, std::nullopt};
}

/// q(S, T) = |Per(C_{S,T})|^2 / (cosh(r)^{2m} prod s_i! prod t_j!), C = tanh(r) U W^dagger.
inline double gbs_unpostselected_probability(const GbsConfig &cfg, const OutcomePattern &s, const OutcomePattern &t) {
    if (s.modes() != cfg.m || t.modes() != cfg.m) {
        throw ContractViolation("gbs_unpostselected_probability: patterns must span m modes");
    }
    const double abs2 = std::norm(per_exact(submatrix_rows_cols(cfg.transition(), s, t)));
    const double fact = (s.factorial_product() * t.factorial_product()).convert_to<double>();
    return abs2 / fact * std::exp(-cfg.log_normalization());
}

/// Sum of q(S, T) over all pairs with total photon number at most max_n.
inline double gbs_total_probability(const GbsConfig &cfg, int max_n) {
    double total = 0.0;
    for (int n = 0; n <= max_n; ++n) {
        const auto outcomes = enumerate_outcomes(cfg.m, n);
        for (const auto &s : outcomes) {
            for (const auto &t : outcomes) {
                total += gbs_unpostselected_probability(cfg, s, t);
            }
        }
    }
    return total;
}

}  // namespace bosonlab
