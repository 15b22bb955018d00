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
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/matrix.hpp"

namespace bosonlab {

/// Largest order accepted by per_exact. At n = 34 the Gray-code loop visits
/// 1.7e10 subsets; in double precision the absolute error of the result is
/// roughly 2^n * n * eps * max_term, so results near this cap are only
/// meaningful when |Per| is not much smaller than the largest subset term.
inline constexpr std::size_t kMaxExactPermanentOrder = 34;

/// Largest order accepted by the brute-force permutation oracle.
inline constexpr std::size_t kMaxOraclePermanentOrder = 9;

/// Above this order the subset sum switches to compensated (Neumaier) accumulation.
inline constexpr std::size_t kCompensatedSumOrder = 20;

struct PermanentOptions {
    /// Number of contiguous Gray-code ranges evaluated concurrently. The
    /// partial sums are reduced in range order, so the result is a pure
    /// function of (matrix, partitions).
    unsigned partitions = 1;
};

namespace detail {

template <class Real>
struct NeumaierSum {
    Real sum{};
    Real correction{};

    void add(Real x) {
        Real t = sum + x;
        using std::abs;
        if (abs(sum) >= abs(x)) {
            correction += (sum - t) + x;
        } else {
            correction += (x - t) + sum;
        }
        sum = t;
    }
    Real value() const { return sum + correction; }
};

template <class Scalar>
struct ScalarAccumulator {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    static constexpr bool is_complex = Eigen::NumTraits<Scalar>::IsComplex;

    bool compensated = false;
    Scalar plain{};
    NeumaierSum<Real> re;
    NeumaierSum<Real> im;

    void add(const Scalar &x) {
        if (!compensated) {
            plain += x;
            return;
        }
        if constexpr (is_complex) {
            re.add(x.real());
            im.add(x.imag());
        } else {
            re.add(x);
        }
    }

    Scalar value() const {
        if (!compensated) {
            return plain;
        }
        if constexpr (is_complex) {
            return Scalar(re.value(), im.value());
        } else {
            return re.value();
        }
    }
};

inline uint64_t gray(uint64_t k) { return k ^ (k >> 1); }

// Signed Ryser subset sum over Gray-code indices k in [lo, hi), 1 <= lo.
// Gray code g(k) has popcount parity equal to k's parity, so the sign of the
// (-1)^{|S|} factor alternates with k.
template <class Matrix, class Scalar = typename Matrix::Scalar>
Scalar ryser_range(const Matrix &a, uint64_t lo, uint64_t hi, bool compensated) {
    const Eigen::Index n = a.rows();
    std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar(0));
    const uint64_t start = gray(lo);
    for (Eigen::Index j = 0; j < n; ++j) {
        if ((start >> j) & 1U) {
            for (Eigen::Index i = 0; i < n; ++i) {
                row_sums[static_cast<std::size_t>(i)] += a(i, j);
            }
        }
    }

    ScalarAccumulator<Scalar> acc;
    acc.compensated = compensated;
    auto add_term = [&](uint64_t k) {
        Scalar prod = row_sums[0];
        for (Eigen::Index i = 1; i < n; ++i) {
            prod *= row_sums[static_cast<std::size_t>(i)];
        }
        acc.add((k & 1U) ? Scalar(-prod) : prod);
    };

    add_term(lo);
    for (uint64_t k = lo + 1; k < hi; ++k) {
        const auto j = static_cast<Eigen::Index>(std::countr_zero(k));
        if ((gray(k) >> j) & 1U) {
            for (Eigen::Index i = 0; i < n; ++i) {
                row_sums[static_cast<std::size_t>(i)] += a(i, j);
            }
        } else {
            for (Eigen::Index i = 0; i < n; ++i) {
                row_sums[static_cast<std::size_t>(i)] -= a(i, j);
            }
        }
        add_term(k);
    }
    return acc.value();
}

}  // namespace detail

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code column
/// subsets and running row sums, O(2^n n) time. Works for any Eigen scalar
/// (double, long double and their complex counterparts). The empty matrix has
/// permanent 1.
template <class Derived>
typename Derived::Scalar per_exact(const Eigen::MatrixBase<Derived> &matrix, PermanentOptions options = {}) {
    using Scalar = typename Derived::Scalar;
    require_square(matrix, "per_exact");
    const auto n = static_cast<std::size_t>(matrix.rows());
    if (n > kMaxExactPermanentOrder) {
        throw CapacityError(
            "per_exact: order " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxExactPermanentOrder));
    }
    if (n == 0) {
        return Scalar(1);
    }
    require_finite(matrix, "per_exact");

    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = matrix;
    const uint64_t total = uint64_t{1} << n;
    const bool compensated = n > kCompensatedSumOrder;
    const uint64_t parts = std::clamp<uint64_t>(options.partitions, 1, total - 1);

    std::vector<Scalar> partial(parts, Scalar(0));
    auto bounds = [&](uint64_t p) { return 1 + (total - 1) * p / parts; };
    if (parts == 1) {
        partial[0] = detail::ryser_range(a, 1, total, compensated);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(parts);
        for (uint64_t p = 0; p < parts; ++p) {
            workers.emplace_back([&, p] { partial[p] = detail::ryser_range(a, bounds(p), bounds(p + 1), compensated); });
        }
    }

    detail::ScalarAccumulator<Scalar> acc;
    acc.compensated = compensated;
    for (const auto &v : partial) {
        acc.add(v);
    }
    Scalar result = acc.value();
    return (n % 2 == 1) ? Scalar(-result) : result;
}

/// Permanent as the sum over all n! permutations. Test oracle only.
template <class Derived>
typename Derived::Scalar per_oracle(const Eigen::MatrixBase<Derived> &matrix) {
    using Scalar = typename Derived::Scalar;
    require_square(matrix, "per_oracle");
    const auto n = static_cast<std::size_t>(matrix.rows());
    if (n > kMaxOraclePermanentOrder) {
        throw CapacityError(
            "per_oracle: order " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxOraclePermanentOrder));
    }
    std::vector<Eigen::Index> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Scalar total(0);
    do {
        Scalar prod(1);
        for (std::size_t i = 0; i < n; ++i) {
            prod *= matrix(static_cast<Eigen::Index>(i), sigma[i]);
        }
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

/// Brute-force permanent of an integer matrix (exact). Test oracle only.
inline BigInt per_oracle(const IntegerMatrix &matrix) {
    if (!matrix.is_square()) {
        throw ContractViolation("per_oracle: expected a square matrix");
    }
    const std::size_t n = matrix.rows();
    if (n > kMaxOraclePermanentOrder) {
        throw CapacityError("per_oracle: order " + std::to_string(n) + " exceeds cap");
    }
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    BigInt total = 0;
    do {
        BigInt prod = 1;
        for (std::size_t i = 0; i < n && prod != 0; ++i) {
            prod *= matrix(i, sigma[i]);
        }
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

/// Exact integer permanent (Ryser, Gray code, arbitrary precision). No
/// floating point is involved, so identities between permanents can be
/// checked with zero tolerance.
inline BigInt per_exact_int(const IntegerMatrix &matrix) {
    if (!matrix.is_square()) {
        throw ContractViolation(
            "per_exact_int: expected a square matrix, got " + std::to_string(matrix.rows()) + "x" +
            std::to_string(matrix.cols()));
    }
    const std::size_t n = matrix.rows();
    if (n == 0) {
        return 1;
    }
    if (n >= 63) {
        throw CapacityError("per_exact_int: order too large for subset enumeration");
    }
    std::vector<BigInt> row_sums(n, 0);
    BigInt total = 0;
    const uint64_t count = uint64_t{1} << n;
    for (uint64_t k = 1; k < count; ++k) {
        const auto j = static_cast<std::size_t>(std::countr_zero(k));
        const bool added = (detail::gray(k) >> j) & 1U;
        for (std::size_t i = 0; i < n; ++i) {
            if (added) {
                row_sums[i] += matrix(i, j);
            } else {
                row_sums[i] -= matrix(i, j);
            }
        }
        BigInt prod = row_sums[0];
        for (std::size_t i = 1; i < n && prod != 0; ++i) {
            prod *= row_sums[i];
        }
        if (k & 1U) {
            total -= prod;
        } else {
            total += prod;
        }
    }
    return (n % 2 == 1) ? BigInt(-total) : total;
}

}  // namespace bosonlab
