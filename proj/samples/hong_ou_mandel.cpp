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

// Two photons entering a balanced beam splitter never leave in different
// ports: the permanent of the 2x2 Hadamard-like block vanishes. The same
// outcome probabilities then come out of a 6-mode Haar interferometer.

#include <cmath>
#include <iostream>

#include "bosonlab/bosonlab.hpp"

int main() {
    using namespace bosonlab;

    const double h = 1.0 / std::sqrt(2.0);
    ComplexMatrix splitter(2, 2);
    splitter << h, h, h, -h;

    std::cout << "balanced beam splitter, input (1,1)\n";
    for (const auto &s : enumerate_outcomes(2, 2)) {
        std::cout << "  " << s.to_string() << "  p = " << outcome_probability(splitter, s) << "\n";
    }

    const auto draw = haar_unitary(6, 2026, 0);
    const auto dist = full_distribution(draw.unitary, 3);
    std::cout << "6-mode Haar interferometer, 3 photons: " << dist.outcomes.size() << " outcomes, total "
              << dist.total() << "\n";
    const auto sampler = ExactSampler(dist);
    Rng rng = make_stream(2026, 1);
    for (int i = 0; i < 5; ++i) {
        const auto &s = sampler(rng);
        std::cout << "  sample " << s.to_string() << "  p = " << outcome_probability(draw.unitary.leftCols(3), s) << "\n";
    }
    return 0;
}
