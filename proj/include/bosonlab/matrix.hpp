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
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"

namespace bosonlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            using std::imag;
            using std::isfinite;
            using std::real;
            const auto v = m(r, c);
            if (!isfinite(real(v)) || !isfinite(imag(v))) {
                return false;
            }
        }
    }
    return true;
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived> &m, const char *what) {
    if (!all_finite(m)) {
        throw ContractViolation(std::string(what) + ": matrix has non-finite entries");
    }
}

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived> &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw ContractViolation(
            std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
            std::to_string(m.cols()));
    }
}

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
   public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &row : rows) {
            if (row.size() != cols_) {
                throw ContractViolation("IntegerMatrix: ragged initializer");
            }
            for (long long v : row) {
                data_.emplace_back(v);
            }
        }
    }

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    static IntegerMatrix ones(std::size_t rows, std::size_t cols) {
        IntegerMatrix m(rows, cols);
        for (auto &v : m.data_) {
            v = 1;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    BigInt &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const BigInt &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_binary() const {
        for (const auto &v : data_) {
            if (v != 0 && v != 1) {
                return false;
            }
        }
        return true;
    }

    bool has_zero_row() const {
        for (std::size_t r = 0; r < rows_; ++r) {
            bool zero = true;
            for (std::size_t c = 0; c < cols_ && zero; ++c) {
                zero = (*this)(r, c) == 0;
            }
            if (zero) {
                return true;
            }
        }
        return false;
    }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                t(c, r) = (*this)(r, c);
            }
        }
        return t;
    }

    /// Entries must fit in a double exactly for the result to be meaningful.
    ComplexMatrix to_complex() const {
        ComplexMatrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    Complex((*this)(r, c).convert_to<double>(), 0.0);
            }
        }
        return m;
    }

    std::string to_string() const {
        std::ostringstream out;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out << (c ? " " : "") << (*this)(r, c);
            }
            out << '\n';
        }
        return out.str();
    }

    friend bool operator==(const IntegerMatrix &a, const IntegerMatrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

}  // namespace bosonlab
