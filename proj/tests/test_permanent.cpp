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

#include <cmath>
#include <limits>
#include <numeric>

#include "bosonlab/permanent.hpp"
#include "test_util.hpp"

namespace bosonlab {
namespace {

using testing::random_complex;

TEST(Permanent, FrozenSmallValues) {
    EXPECT_EQ(per_exact(Eigen::MatrixXd::Identity(3, 3)), 1.0);
    EXPECT_EQ(per_exact(Eigen::MatrixXd::Ones(3, 3)), 6.0);
    EXPECT_EQ(per_exact(Eigen::MatrixXd::Ones(4, 4)), 24.0);
    Eigen::Matrix2d m;
    m << 1, 2, 3, 4;
    EXPECT_EQ(per_exact(m), 10.0);
    EXPECT_EQ(per_exact_int(IntegerMatrix{{1, 2}, {3, 4}}), 10);
    EXPECT_EQ(per_exact_int(IntegerMatrix::ones(5, 5)), 120);
}

TEST(Permanent, EmptyMatrixIsOne) {
    EXPECT_EQ(per_exact(Eigen::MatrixXd(0, 0)), 1.0);
    EXPECT_EQ(per_exact_int(IntegerMatrix(0, 0)), 1);
}

TEST(Permanent, OneByOne) {
    ComplexMatrix m(1, 1);
    m(0, 0) = Complex(0.3, -2.0);
    EXPECT_EQ(per_exact(m), m(0, 0));
}

TEST(Permanent, RejectsBadInput) {
    EXPECT_THROW(per_exact(Eigen::MatrixXd::Ones(2, 3)), ContractViolation);
    EXPECT_THROW(per_exact_int(IntegerMatrix(2, 3)), ContractViolation);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Ones(3, 3);
    nan(1, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(per_exact(nan), ContractViolation);
    nan(1, 2) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(per_exact(nan), ContractViolation);
    EXPECT_THROW(per_exact(Eigen::MatrixXd::Ones(35, 35)), CapacityError);
    EXPECT_THROW(per_oracle(Eigen::MatrixXd::Ones(10, 10)), CapacityError);
}

TEST(Permanent, MatchesPermutationSumOracle) {
    Rng rng = make_stream(11, 0);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix a = random_complex(n, n, rng);
            const Complex fast = per_exact(a);
            const Complex slow = per_oracle(a);
            EXPECT_LE(std::abs(fast - slow), 1e-10 * std::max(1.0, std::abs(slow))) << "n=" << n;
        }
    }
}

TEST(Permanent, IntegerVersionMatchesOracle) {
    Rng rng = make_stream(12, 0);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int n = 1; n <= 7; ++n) {
        IntegerMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                m(r, c) = entry(rng);
            }
        }
        EXPECT_EQ(per_exact_int(m), per_oracle(m)) << m.to_string();
        EXPECT_NEAR(per_exact(m.to_complex()).real(), per_oracle(m).convert_to<double>(), 1e-6);
    }
}

TEST(Permanent, InvariantUnderRowAndColumnPermutationsAndTranspose) {
    Rng rng = make_stream(13, 0);
    const int n = 6;
    const ComplexMatrix a = random_complex(n, n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix b(n, n);
    for (int r = 0; r < n; ++r) {
        b.row(r) = a.row(perm[static_cast<std::size_t>(r)]);
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix c(n, n);
    for (int k = 0; k < n; ++k) {
        c.col(k) = b.col(perm[static_cast<std::size_t>(k)]);
    }
    const Complex p = per_exact(a);
    EXPECT_LE(std::abs(per_exact(c) - p), 1e-10 * std::abs(p));
    const ComplexMatrix at = a.transpose();
    EXPECT_LE(std::abs(per_exact(at) - p), 1e-10 * std::abs(p));
}

TEST(Permanent, RowScalingIsMultiplicative) {
    Rng rng = make_stream(14, 0);
    ComplexMatrix a = random_complex(5, 5, rng);
    const Complex p = per_exact(a);
    const Complex k(0.5, 1.5);
    a.row(2) *= k;
    EXPECT_LE(std::abs(per_exact(a) - k * p), 1e-10 * std::abs(k * p));
}

TEST(Permanent, PartitionedEvaluationMatchesSerial) {
    Rng rng = make_stream(15, 0);
    const ComplexMatrix a = random_complex(12, 12, rng);
    const Complex serial = per_exact(a);
    for (unsigned parts : {2U, 3U, 7U, 64U}) {
        const Complex split = per_exact(a, PermanentOptions{parts});
        EXPECT_LE(std::abs(split - serial), 1e-11 * std::abs(serial)) << parts;
        EXPECT_EQ(split, per_exact(a, PermanentOptions{parts})) << "repeatable for fixed partition count";
    }
    // More partitions than subsets.
    const ComplexMatrix small = random_complex(2, 2, rng);
    EXPECT_LE(std::abs(per_exact(small, PermanentOptions{100}) - per_oracle(small)), 1e-12);
}

TEST(Permanent, CompensatedPathOnLargeBlockDiagonal) {
    Rng rng = make_stream(17, 0);
    const ComplexMatrix a = random_complex(11, 11, rng);
    const ComplexMatrix b = random_complex(11, 11, rng);
    ComplexMatrix d = ComplexMatrix::Zero(22, 22);
    d.topLeftCorner(11, 11) = a;
    d.bottomRightCorner(11, 11) = b;
    const Complex expected = per_exact(a) * per_exact(b);
    EXPECT_LE(std::abs(per_exact(d, PermanentOptions{4}) - expected), 1e-9 * std::abs(expected));
}

TEST(Permanent, LargeDiagonalDominantMatrix) {
    // Per(I + e J) for a rank-one perturbation has the closed form
    // sum_k C(n, k) k! e^k.
    const int n = 21;
    const double e = 0.01;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + Eigen::MatrixXd::Constant(n, n, e);
    double expected = 0.0;
    double term = 1.0;  // C(n, k) k! e^k = n! / (n - k)! e^k
    for (int k = 0; k <= n; ++k) {
        expected += term;
        term *= (n - k) * e;
    }
    EXPECT_NEAR(per_exact(a) / expected, 1.0, 1e-10);
}

TEST(Permanent, ExtendedPrecisionScalar) {
    using Ld = std::complex<long double>;
    Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic> a(3, 3);
    a.setConstant(Ld(1.0L, 0.0L));
    EXPECT_EQ(per_exact(a), Ld(6.0L, 0.0L));
}

TEST(Permanent, BlockDiagonalFactorizes) {
    Rng rng = make_stream(16, 0);
    const ComplexMatrix a = random_complex(3, 3, rng);
    const ComplexMatrix b = random_complex(4, 4, rng);
    ComplexMatrix d = ComplexMatrix::Zero(7, 7);
    d.topLeftCorner(3, 3) = a;
    d.bottomRightCorner(4, 4) = b;
    const Complex expected = per_exact(a) * per_exact(b);
    EXPECT_LE(std::abs(per_exact(d) - expected), 1e-10 * std::abs(expected));
}

}  // namespace
}  // namespace bosonlab
