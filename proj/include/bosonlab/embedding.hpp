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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/permanent.hpp"
#include "bosonlab/rng.hpp"
#include "bosonlab/stats.hpp"

namespace bosonlab {

/// Rows of a c x c base matrix X are assigned to the click modes of S in
/// ascending order. A = (X | Y) where Y holds s_i - 1 unit columns with their 1
/// in row i, grouped by row ascending. A_S repeats row i of A s_i times.
struct EmbeddingSpec {
    IntegerMatrix base;
    OutcomePattern pattern{std::vector<int>{0}};
    IntegerMatrix a;
    IntegerMatrix a_s;
};

/// Repeats row r of m rows[r] times and column c cols[c] times.
inline IntegerMatrix repeat_rows_cols(const IntegerMatrix &m, const std::vector<int> &rows, const std::vector<int> &cols) {
    std::vector<std::size_t> ri;
    std::vector<std::size_t> ci;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        ri.insert(ri.end(), static_cast<std::size_t>(rows[r]), r);
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        ci.insert(ci.end(), static_cast<std::size_t>(cols[c]), c);
    }
    IntegerMatrix out(ri.size(), ci.size());
    for (std::size_t r = 0; r < ri.size(); ++r) {
        for (std::size_t c = 0; c < ci.size(); ++c) {
            out(r, c) = m(ri[r], ci[c]);
        }
    }
    return out;
}

inline std::vector<int> click_occupations(const OutcomePattern &s) {
    std::vector<int> out;
    for (int v : s.occupations()) {
        if (v > 0) {
            out.push_back(v);
        }
    }
    return out;
}

inline EmbeddingSpec build_embedding(const IntegerMatrix &x, const OutcomePattern &s) {
    if (!x.is_square()) {
        throw ContractViolation("build_embedding: base matrix must be square");
    }
    const std::vector<int> occ = click_occupations(s);
    const std::size_t c = x.rows();
    if (occ.size() != c) {
        throw ContractViolation(
            "build_embedding: pattern has " + std::to_string(occ.size()) + " clicks but base matrix is " +
            std::to_string(c) + "x" + std::to_string(c));
    }
    const auto n = static_cast<std::size_t>(s.photons());
    EmbeddingSpec spec;
    spec.base = x;
    spec.pattern = s;
    spec.a = IntegerMatrix(c, n);
    for (std::size_t r = 0; r < c; ++r) {
        for (std::size_t k = 0; k < c; ++k) {
            spec.a(r, k) = x(r, k);
        }
    }
    std::size_t col = c;
    for (std::size_t r = 0; r < c; ++r) {
        for (int rep = 1; rep < occ[r]; ++rep) {
            spec.a(r, col++) = 1;
        }
    }
    spec.a_s = repeat_rows_cols(spec.a, occ, std::vector<int>(n, 1));
    return spec;
}

struct EmbeddingCheck {
    BigInt per_a_s;
    BigInt per_base;
    BigInt multiplicity;  // prod s_i! (times prod t_j! for the two-sided variant)
    BigInt rhs;           // per_base * multiplicity
    bool holds = false;
};

inline EmbeddingCheck verify_embedding_identity(const EmbeddingSpec &spec) {
    EmbeddingCheck chk;
    chk.per_a_s = per_exact_int(spec.a_s);
    chk.per_base = per_exact_int(spec.base);
    chk.multiplicity = spec.pattern.factorial_product();
    chk.rhs = chk.per_base * chk.multiplicity;
    chk.holds = chk.per_a_s == chk.rhs;
    return chk;
}

/// Random {0,1} matrix with entries 1 with probability one half.
inline IntegerMatrix random_binary_matrix(std::size_t rows, std::size_t cols, Rng &rng) {
    IntegerMatrix m(rows, cols);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = coin(rng) ? 1 : 0;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Two-sided variant. A has rows indexed by the click modes of S and columns by
// the click modes of T, both ascending. In block form (before ordering)
//
//     A = [ X   Y ]     X: l x l, Y: l x k_S unit columns for collisions of S,
//         [ Y'  0 ]     Y': k_T x l unit rows for collisions of T.
//
// The k_T rows of Y' belong to the last k_T single-photon modes of S and the
// k_S columns of Y to the last k_S single-photon modes of T. A_{S,T} repeats
// row i s_i times and column j t_j times.

struct GbsEmbeddingSpec {
    IntegerMatrix base;
    OutcomePattern s{std::vector<int>{0}};
    OutcomePattern t{std::vector<int>{0}};
    int k_s = 0;
    int k_t = 0;
    std::vector<int> row_modes;  // mode of S owning each row of A
    std::vector<int> col_modes;  // mode of T owning each column of A
    IntegerMatrix a;
    IntegerMatrix a_st;
};

namespace detail {

/// Click modes of p ascending, split into the last `extra` single-photon modes
/// and the rest.
inline void split_modes(const OutcomePattern &p, int extra, std::vector<int> &core, std::vector<int> &tail) {
    std::vector<int> singles;
    for (int i = 0; i < p.modes(); ++i) {
        if (p[static_cast<std::size_t>(i)] == 1) {
            singles.push_back(i);
        }
    }
    std::vector<int> tail_modes(singles.end() - extra, singles.end());
    core.clear();
    for (int i = 0; i < p.modes(); ++i) {
        if (p[static_cast<std::size_t>(i)] > 0 && std::find(tail_modes.begin(), tail_modes.end(), i) == tail_modes.end()) {
            core.push_back(i);
        }
    }
    tail = std::move(tail_modes);
}

}  // namespace detail

inline GbsEmbeddingSpec build_embedding_gbs(const IntegerMatrix &x, const OutcomePattern &s, const OutcomePattern &t) {
    if (!x.is_square()) {
        throw ContractViolation("build_embedding_gbs: base matrix must be square");
    }
    if (s.photons() != t.photons()) {
        throw ContractViolation("build_embedding_gbs: S and T must carry the same photon number");
    }
    const int n = s.photons();
    const auto l = static_cast<int>(x.rows());
    const ClickStats cs = click_stats(s);
    const ClickStats ct = click_stats(t);
    const int k_s = cs.collisions;
    const int k_t = ct.collisions;
    if (l + k_s + k_t != n) {
        throw ContractViolation(
            "build_embedding_gbs: l + k_S + k_T = " + std::to_string(l + k_s + k_t) + " but n = " + std::to_string(n));
    }
    if (cs.no_collision_clicks < k_t) {
        throw ContractViolation(
            "build_embedding_gbs: single-photon modes of S (" + std::to_string(cs.no_collision_clicks) +
            ") < k_T (" + std::to_string(k_t) + ")");
    }
    if (ct.no_collision_clicks < k_s) {
        throw ContractViolation(
            "build_embedding_gbs: single-photon modes of T (" + std::to_string(ct.no_collision_clicks) +
            ") < k_S (" + std::to_string(k_s) + ")");
    }
    if (l < k_s || l < k_t) {
        throw ContractViolation(
            "build_embedding_gbs: l = " + std::to_string(l) + " must be >= k_S = " + std::to_string(k_s) +
            " and >= k_T = " + std::to_string(k_t));
    }

    std::vector<int> s_core;
    std::vector<int> s_tail;
    std::vector<int> t_core;
    std::vector<int> t_tail;
    detail::split_modes(s, k_t, s_core, s_tail);
    detail::split_modes(t, k_s, t_core, t_tail);

    // Block form with rows (s_core, s_tail) and columns (t_core, t_tail).
    const auto rows = static_cast<std::size_t>(l + k_t);
    const auto cols = static_cast<std::size_t>(l + k_s);
    IntegerMatrix block(rows, cols);
    for (std::size_t r = 0; r < static_cast<std::size_t>(l); ++r) {
        for (std::size_t c = 0; c < static_cast<std::size_t>(l); ++c) {
            block(r, c) = x(r, c);
        }
    }
    std::size_t col = static_cast<std::size_t>(l);
    for (std::size_t r = 0; r < static_cast<std::size_t>(l); ++r) {
        for (int rep = 1; rep < s[static_cast<std::size_t>(s_core[r])]; ++rep) {
            block(r, col++) = 1;
        }
    }
    std::size_t row = static_cast<std::size_t>(l);
    for (std::size_t c = 0; c < static_cast<std::size_t>(l); ++c) {
        for (int rep = 1; rep < t[static_cast<std::size_t>(t_core[c])]; ++rep) {
            block(row++, c) = 1;
        }
    }

    std::vector<int> block_rows = s_core;
    block_rows.insert(block_rows.end(), s_tail.begin(), s_tail.end());
    std::vector<int> block_cols = t_core;
    block_cols.insert(block_cols.end(), t_tail.begin(), t_tail.end());
    std::vector<std::size_t> row_perm(rows);
    std::vector<std::size_t> col_perm(cols);
    std::iota(row_perm.begin(), row_perm.end(), 0);
    std::iota(col_perm.begin(), col_perm.end(), 0);
    std::sort(row_perm.begin(), row_perm.end(), [&](auto a, auto b) { return block_rows[a] < block_rows[b]; });
    std::sort(col_perm.begin(), col_perm.end(), [&](auto a, auto b) { return block_cols[a] < block_cols[b]; });

    GbsEmbeddingSpec spec;
    spec.base = x;
    spec.s = s;
    spec.t = t;
    spec.k_s = k_s;
    spec.k_t = k_t;
    spec.a = IntegerMatrix(rows, cols);
    std::vector<int> row_mult;
    std::vector<int> col_mult;
    for (std::size_t r = 0; r < rows; ++r) {
        spec.row_modes.push_back(block_rows[row_perm[r]]);
        row_mult.push_back(s[static_cast<std::size_t>(spec.row_modes.back())]);
        for (std::size_t c = 0; c < cols; ++c) {
            spec.a(r, c) = block(row_perm[r], col_perm[c]);
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        spec.col_modes.push_back(block_cols[col_perm[c]]);
        col_mult.push_back(t[static_cast<std::size_t>(spec.col_modes.back())]);
    }
    spec.a_st = repeat_rows_cols(spec.a, row_mult, col_mult);
    return spec;
}

inline EmbeddingCheck verify_embedding_identity(const GbsEmbeddingSpec &spec) {
    EmbeddingCheck chk;
    chk.per_a_s = per_exact_int(spec.a_st);
    chk.per_base = per_exact_int(spec.base);
    chk.multiplicity = spec.s.factorial_product() * spec.t.factorial_product();
    chk.rhs = chk.per_base * chk.multiplicity;
    chk.holds = chk.per_a_s == chk.rhs;
    return chk;
}

// ---------------------------------------------------------------------------
// Random instances.

/// Uniform S over outcomes of n photons in m modes and a random {0,1} base of
/// matching size.
inline EmbeddingSpec random_embedding(int m, int n, Rng &rng) {
    const OutcomePattern s = sample_uniform_outcome(m, n, rng);
    const auto c = static_cast<std::size_t>(click_stats(s).clicks);
    return build_embedding(random_binary_matrix(c, c, rng), s);
}

namespace detail {

/// Pattern with `core` modes carrying 1 + extra photons (extra photons spread
/// uniformly) and `singles` modes carrying one photon, placed on random
/// distinct modes.
inline OutcomePattern random_pattern(int m, int core, int extra, int singles, Rng &rng) {
    std::vector<int> occ_core(static_cast<std::size_t>(core), 1);
    std::uniform_int_distribution<int> pick(0, core - 1);
    for (int e = 0; e < extra; ++e) {
        ++occ_core[static_cast<std::size_t>(pick(rng))];
    }
    std::vector<int> values = occ_core;
    values.insert(values.end(), static_cast<std::size_t>(singles), 1);
    std::shuffle(values.begin(), values.end(), rng);
    std::vector<int> modes(static_cast<std::size_t>(m));
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        occ[static_cast<std::size_t>(modes[i])] = values[i];
    }
    return OutcomePattern(std::move(occ));
}

}  // namespace detail

/// Random valid (X, S, T) for the two-sided construction with n photons in m
/// modes, m >= n.
inline GbsEmbeddingSpec random_gbs_embedding(int m, int n, Rng &rng) {
    if (n < 1 || m < n) {
        throw ContractViolation("random_gbs_embedding: need 1 <= n <= m");
    }
    std::vector<std::pair<int, int>> choices;
    for (int ks = 0; ks <= n; ++ks) {
        for (int kt = 0; ks + kt <= n; ++kt) {
            const int l = n - ks - kt;
            if (l >= 1 && l >= ks && l >= kt) {
                choices.emplace_back(ks, kt);
            }
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    const auto [ks, kt] = choices[pick(rng)];
    const int l = n - ks - kt;
    const OutcomePattern s = detail::random_pattern(m, l, ks, kt, rng);
    const OutcomePattern t = detail::random_pattern(m, l, kt, ks, rng);
    return build_embedding_gbs(random_binary_matrix(static_cast<std::size_t>(l), static_cast<std::size_t>(l), rng), s, t);
}

// ---------------------------------------------------------------------------
// How often independent uniform S, T satisfy
//     k_T <= n/3 <= nc_S   and   k_S <= n/3 <= nc_T,
// where nc is the number of single-photon modes.

inline bool gbs_pattern_condition(const OutcomePattern &s, const OutcomePattern &t) {
    const ClickStats a = click_stats(s);
    const ClickStats b = click_stats(t);
    const int n = s.photons();
    // Compare 3k <= n to avoid rounding n/3.
    return 3 * b.collisions <= n && n <= 3 * a.no_collision_clicks && 3 * a.collisions <= n &&
           n <= 3 * b.no_collision_clicks;
}

/// Exact Pr(k_S <= n/3 <= nc_S) for S uniform over outcomes of n photons in m
/// modes, by counting patterns with c clicks of which nc are single.
inline BigRational gbs_single_pattern_probability(int m, int n) {
    BigInt count = 0;
    for (int c = 1; c <= std::min(m, n); ++c) {
        if (3 * (n - c) > n) {
            continue;
        }
        for (int nc = 0; nc <= c; ++nc) {
            if (3 * nc < n) {
                continue;
            }
            const int r = c - nc;      // modes with at least two photons
            const int rest = n - nc;   // photons in those modes
            BigInt ways;
            if (r == 0) {
                ways = rest == 0 ? 1 : 0;
            } else {
                // compositions of rest into r parts each >= 2
                ways = rest >= 2 * r ? binomial(rest - r - 1, r - 1) : BigInt(0);
            }
            count += binomial(m, c) * binomial(c, nc) * ways;
        }
    }
    return BigRational(count, dim_fock(m, n));
}

struct GbsFeasibilityResult {
    int m = 0;
    int n = 0;
    long trials = 0;
    uint64_t seed = 0;
    long hits = 0;
    double frequency = 0.0;
    double sigma = 0.0;
    double exact = 0.0;     // square of the single-pattern probability
    bool in_regime = false; // m >= ceil(2.1 n)
};

inline GbsFeasibilityResult gbs_pattern_feasibility_experiment(int m, int n, long trials, uint64_t seed) {
    if (n < 1 || m < 1 || trials < 1) {
        throw ContractViolation("gbs_pattern_feasibility_experiment: need m, n, trials >= 1");
    }
    GbsFeasibilityResult res;
    res.m = m;
    res.n = n;
    res.trials = trials;
    res.seed = seed;
    res.in_regime = 10L * m >= 21L * n;
    const double q = gbs_single_pattern_probability(m, n).convert_to<double>();
    res.exact = q * q;
    Rng rng = make_stream(seed, stream_key(static_cast<uint64_t>(m), static_cast<uint64_t>(n)));
    const UniformOutcomeSampler sampler(m, n);
    for (long i = 0; i < trials; ++i) {
        const OutcomePattern s = sampler(rng);
        const OutcomePattern t = sampler(rng);
        res.hits += gbs_pattern_condition(s, t);
    }
    res.frequency = static_cast<double>(res.hits) / static_cast<double>(trials);
    res.sigma = binomial_sigma(res.exact, trials);
    return res;
}

}  // namespace bosonlab
