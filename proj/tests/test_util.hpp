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

#include <random>

#include "bosonlab/matrix.hpp"
#include "bosonlab/rng.hpp"

namespace bosonlab::testing {

inline ComplexMatrix random_complex(int rows, int cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double re = normal(rng);
            m(r, c) = Complex(re, normal(rng));
        }
    }
    return m;
}

inline double max_abs(const ComplexMatrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace bosonlab::testing
