// Copyright 2026 The pseudomeasure-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "pml/grid.hpp"
#include "pml/semigroup.hpp"

namespace pml::test {

inline StateVector random_state(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(grid.size()));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return StateVector(grid, v);
}

inline BaseSet random_base(const Grid& grid, std::mt19937_64& rng, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        if (coin(rng)) cells.push_back(c);
    }
    return BaseSet(grid, cells);
}

inline BaseSet nonempty_random_base(const Grid& grid, std::mt19937_64& rng, double density = 0.5) {
    for (;;) {
        auto b = random_base(grid, rng, density);
        if (!b.is_empty()) return b;
    }
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Propagator by Pade scaling and squaring, independent of the spectral path.
inline Matrix expm_oracle(const Matrix& generator, Mode mode, double t) {
    const Complex factor = mode == Mode::unitary ? Complex(0.0, -t) : Complex(t, 0.0);
    return Matrix(generator * factor).exp();
}

}  // namespace pml::test
