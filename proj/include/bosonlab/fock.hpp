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
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/rng.hpp"

namespace bosonlab {

/// Guard on the size of exhaustive enumerations of the outcome space.
inline constexpr uint64_t kMaxEnumeratedOutcomes = 10'000'000;

/// Occupation numbers (s_1, ..., s_m) of n photons in m modes.
class OutcomePattern {
   public:
    explicit OutcomePattern(std::vector<int> occupations) : occupations_(std::move(occupations)) {
        if (occupations_.empty()) {
            throw ContractViolation("OutcomePattern: at least one mode is required");
        }
        for (int s : occupations_) {
            if (s < 0) {
                throw ContractViolation("OutcomePattern: negative occupation");
            }
            photons_ += s;
        }
    }

    OutcomePattern(std::vector<int> occupations, int photons) : OutcomePattern(std::move(occupations)) {
        if (photons_ != photons) {
            throw ContractViolation(
                "OutcomePattern: occupations sum to " + std::to_string(photons_) + ", expected " +
                std::to_string(photons));
        }
    }

    /// (1, ..., 1, 0, ..., 0): one photon in each of the first n modes.
    static OutcomePattern collision_free(int modes, int photons) {
        if (photons > modes) {
            throw ContractViolation("OutcomePattern::collision_free: more photons than modes");
        }
        std::vector<int> occ(static_cast<std::size_t>(modes), 0);
        std::fill(occ.begin(), occ.begin() + photons, 1);
        return OutcomePattern(std::move(occ));
    }

    int modes() const { return static_cast<int>(occupations_.size()); }
    int photons() const { return photons_; }
    int operator[](std::size_t i) const { return occupations_[i]; }
    const std::vector<int> &occupations() const { return occupations_; }

    /// prod_i s_i!
    BigInt factorial_product() const {
        BigInt p = 1;
        for (int s : occupations_) {
            for (int k = 2; k <= s; ++k) {
                p *= k;
            }
        }
        return p;
    }

    double log_factorial_product() const {
        double acc = 0.0;
        for (int s : occupations_) {
            acc += std::lgamma(static_cast<double>(s) + 1.0);
        }
        return acc;
    }

    /// Mode indices in ascending order, mode i listed s_i times.
    std::vector<int> photon_modes() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(photons_));
        for (int i = 0; i < modes(); ++i) {
            out.insert(out.end(), static_cast<std::size_t>(occupations_[static_cast<std::size_t>(i)]), i);
        }
        return out;
    }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < occupations_.size(); ++i) {
            out += (i ? "," : "") + std::to_string(occupations_[i]);
        }
        return out + ")";
    }

    friend bool operator==(const OutcomePattern &, const OutcomePattern &) = default;
    friend auto operator<=>(const OutcomePattern &a, const OutcomePattern &b) {
        return a.occupations_ <=> b.occupations_;
    }

   private:
    std::vector<int> occupations_;
    int photons_ = 0;
};

struct ClickStats {
    int clicks = 0;               // modes with at least one photon
    int collisions = 0;           // photons beyond the first in each mode; clicks + collisions = n
    int no_collision_clicks = 0;  // modes with exactly one photon
};

inline ClickStats click_stats(const OutcomePattern &s) {
    ClickStats st;
    for (int v : s.occupations()) {
        st.clicks += v >= 1;
        st.no_collision_clicks += v == 1;
    }
    st.collisions = s.photons() - st.clicks;
    return st;
}

inline BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// |S_{m,n}| = C(m+n-1, n), the number of ways to place n photons in m modes.
inline BigInt dim_fock(int m, int n) {
    if (m < 1 || n < 0) {
        throw ContractViolation("dim_fock: need m >= 1 and n >= 0");
    }
    return binomial(static_cast<long long>(m) + n - 1, n);
}

// Outcomes are ordered colexicographically through the bijection between a
// pattern and its sorted list of photon modes j_1 <= ... <= j_n, mapped to the
// strictly increasing combination c_k = j_k + k - 1 of {0, ..., m+n-2}. The
// rank of a pattern is sum_k C(c_k, k) (combinatorial number system), so
// (2,2) orders as (2,0) < (1,1) < (0,2).

inline BigInt rank_outcome(const OutcomePattern &s) {
    BigInt rank = 0;
    long long k = 1;
    for (int mode : s.photon_modes()) {
        rank += binomial(mode + k - 1, k);
        ++k;
    }
    return rank;
}

namespace detail {

using u128 = unsigned __int128;

template <class Int>
Int binomial_as(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) {
        return Int(0);
    }
    k = std::min(k, n - k);
    Int r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * static_cast<Int>(n - k + i) / static_cast<Int>(i);
    }
    return r;
}

template <class Int>
OutcomePattern unrank_with(int m, int n, Int rank) {
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    long long c = static_cast<long long>(m) + n - 2;  // largest admissible combination element
    for (long long k = n; k >= 1; --k) {
        Int binom = binomial_as<Int>(c, k);
        while (binom > rank) {
            // C(c-1, k) = C(c, k) (c - k) / c
            binom = binom * static_cast<Int>(c - k) / static_cast<Int>(c);
            --c;
        }
        rank -= binom;
        occ[static_cast<std::size_t>(c - (k - 1))] += 1;
        --c;
    }
    return OutcomePattern(std::move(occ), n);
}

inline bool fits_u128(const BigInt &dim, int m, int n) {
    // Intermediates are bounded by dim * (m + n); keep them far below 2^128.
    return m + n < (1 << 20) && msb(dim) < 100;
}

inline u128 to_u128(const BigInt &v) {
    u128 r = 0;
    BigInt t = v;
    int shift = 0;
    while (t != 0) {
        r |= static_cast<u128>(static_cast<uint64_t>(t & 0xFFFFFFFFFFFFFFFFULL)) << shift;
        t >>= 64;
        shift += 64;
    }
    return r;
}

inline u128 uniform_below(u128 bound, Rng &rng) {
    int bits = 128;
    while (bits > 0 && !((bound - 1) >> (bits - 1) & 1)) {
        --bits;
    }
    const u128 mask = bits >= 128 ? ~u128{0} : ((u128{1} << bits) - 1);
    while (true) {
        u128 x = (static_cast<u128>(rng()) << 64) | rng();
        x &= mask;
        if (x < bound) {
            return x;
        }
    }
}

inline BigInt uniform_below(const BigInt &bound, Rng &rng) {
    if (bound == 1) {
        return 0;
    }
    const unsigned bits = msb(bound - 1) + 1;
    while (true) {
        BigInt x = 0;
        for (unsigned got = 0; got < bits; got += 64) {
            x <<= 64;
            x |= rng();
        }
        x &= (BigInt(1) << bits) - 1;
        if (x < bound) {
            return x;
        }
    }
}

}  // namespace detail

inline OutcomePattern unrank_outcome(int m, int n, const BigInt &rank) {
    const BigInt dim = dim_fock(m, n);
    if (rank < 0 || rank >= dim) {
        throw ContractViolation("unrank_outcome: rank out of range");
    }
    if (detail::fits_u128(dim, m, n)) {
        return detail::unrank_with<detail::u128>(m, n, detail::to_u128(rank));
    }
    return detail::unrank_with<BigInt>(m, n, rank);
}

/// Exactly uniform sampler over S_{m,n}: a uniform rank in [0, |S_{m,n}|) is
/// drawn by rejection and unranked, O(m + n) per draw.
class UniformOutcomeSampler {
   public:
    UniformOutcomeSampler(int m, int n) : m_(m), n_(n), dim_(dim_fock(m, n)) {
        small_ = detail::fits_u128(dim_, m, n);
        if (small_) {
            dim128_ = detail::to_u128(dim_);
        }
    }

    OutcomePattern operator()(Rng &rng) const {
        if (small_) {
            return detail::unrank_with<detail::u128>(m_, n_, detail::uniform_below(dim128_, rng));
        }
        return detail::unrank_with<BigInt>(m_, n_, detail::uniform_below(dim_, rng));
    }

    int modes() const { return m_; }
    int photons() const { return n_; }
    const BigInt &dimension() const { return dim_; }

   private:
    int m_;
    int n_;
    BigInt dim_;
    bool small_ = false;
    detail::u128 dim128_ = 0;
};

inline OutcomePattern sample_uniform_outcome(int m, int n, Rng &rng) { return UniformOutcomeSampler(m, n)(rng); }

inline uint64_t require_enumerable(int m, int n) {
    const BigInt dim = dim_fock(m, n);
    if (dim > kMaxEnumeratedOutcomes) {
        throw CapacityError("enumeration: |S_{m,n}| = " + dim.str() + " exceeds enumeration guard");
    }
    return dim.convert_to<uint64_t>();
}

/// Visits every pattern of S_{m,n} once, in colexicographic order.
template <class Fn>
void for_each_outcome(int m, int n, Fn &&fn) {
    require_enumerable(m, n);
    const long long limit = static_cast<long long>(m) + n - 1;  // combination elements lie in [0, limit)
    std::vector<long long> comb(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        comb[static_cast<std::size_t>(k)] = k;
    }
    std::vector<int> occ(static_cast<std::size_t>(m));
    while (true) {
        std::fill(occ.begin(), occ.end(), 0);
        for (int k = 0; k < n; ++k) {
            occ[static_cast<std::size_t>(comb[static_cast<std::size_t>(k)] - k)] += 1;
        }
        fn(OutcomePattern(occ));

        int k = 0;
        while (k < n) {
            const long long next = (k + 1 < n) ? comb[static_cast<std::size_t>(k) + 1] : limit;
            if (comb[static_cast<std::size_t>(k)] + 1 < next) {
                break;
            }
            ++k;
        }
        if (k >= n) {
            return;
        }
        comb[static_cast<std::size_t>(k)] += 1;
        for (int i = 0; i < k; ++i) {
            comb[static_cast<std::size_t>(i)] = i;
        }
    }
}

inline std::vector<OutcomePattern> enumerate_outcomes(int m, int n) {
    std::vector<OutcomePattern> out;
    out.reserve(require_enumerable(m, n));
    for_each_outcome(m, n, [&](const OutcomePattern &s) { out.push_back(s); });
    return out;
}

/// |{S in S_{m,n} : S has exactly c clicks}| = C(m, c) C(n-1, n-c).
inline BigInt click_count(int m, int n, int c) {
    if (c < 1 || c > std::min(m, n)) {
        throw DomainError(
            "click_count: c = " + std::to_string(c) + " outside [1, min(m, n)] for m = " + std::to_string(m) +
            ", n = " + std::to_string(n));
    }
    return binomial(m, c) * binomial(n - 1, n - c);
}

inline BigRational click_pmf_exact(int m, int n, int c) { return BigRational(click_count(m, n, c), dim_fock(m, n)); }

/// Probability that a uniformly random outcome has exactly c clicks. Throws
/// DomainError for c outside [1, min(m, n)] (in particular for n = 0).
inline double click_pmf(int m, int n, int c) { return click_pmf_exact(m, n, c).convert_to<double>(); }

struct ClickConcentration {
    int m = 0;
    int n = 0;
    double t = 0.0;
    long trials = 0;
    long hits = 0;
    double center = 0.0;            // alpha n / (alpha + 1 + 1/n), alpha = m/n
    double empirical = 0.0;         // fraction of draws with |c - center| >= t n
    double standard_error = 0.0;    // binomial standard error at the exact tail probability
    double exact_tail = 0.0;        // same event summed from click_pmf
    double bound = 0.0;             // 2 exp(-2 t^2 n)
    double hypergeometric_mean = 0.0;  // m n / (m + n - 1)
};

inline double click_center(int m, int n) {
    const double alpha = static_cast<double>(m) / n;
    return alpha * n / (alpha + 1.0 + 1.0 / n);
}

inline ClickConcentration click_concentration_check(int m, int n, double t, long trials, Rng &rng) {
    if (t < 0) {
        throw ContractViolation("click_concentration_check: t must be non-negative");
    }
    if (n < 1 || m < 1 || trials < 1) {
        throw ContractViolation("click_concentration_check: need m, n, trials >= 1");
    }
    ClickConcentration r;
    r.m = m;
    r.n = n;
    r.t = t;
    r.trials = trials;
    r.center = click_center(m, n);
    r.hypergeometric_mean = static_cast<double>(m) * n / (m + n - 1);
    r.bound = 2.0 * std::exp(-2.0 * t * t * n);
    const double radius = t * n;
    auto in_tail = [&](int c) { return std::abs(c - r.center) >= radius; };

    for (int c = 1; c <= std::min(m, n); ++c) {
        if (in_tail(c)) {
            r.exact_tail += click_pmf(m, n, c);
        }
    }
    const UniformOutcomeSampler sampler(m, n);
    for (long i = 0; i < trials; ++i) {
        r.hits += in_tail(click_stats(sampler(rng)).clicks);
    }
    r.empirical = static_cast<double>(r.hits) / static_cast<double>(trials);
    r.standard_error = std::sqrt(r.exact_tail * (1.0 - r.exact_tail) / static_cast<double>(trials));
    return r;
}

}  // namespace bosonlab
