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

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "pml/grid.hpp"

namespace pml {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the Wiener measure of A^{t_1..t_m}_{B_1..B_m} on
/// the periodic box.
///
/// Paths start uniformly on B_1 (total weight mu_L(B_1)) and take Gaussian
/// steps of variance 2 (t_{j+1} - t_j) per axis, which is the kernel of
/// e^{t Delta}. Path p draws from the Philox stream (seed, p) only, so the
/// estimate does not depend on the worker count.
///
/// Throws InvalidArgument unless m >= 2, times strictly increase,
/// n_paths >= 1000 and B_1 is nonempty.
McEstimate estimate_cylinder(const Grid& grid, const std::vector<double>& times, const std::vector<BaseSet>& bases,
                             std::size_t n_paths, std::uint64_t seed);

/// J_0(t) = (1/2pi) int_0^{2pi} cos(t sin theta) d theta, trapezoid rule.
double bessel_oracle(double t, int points = 512);

struct WienerComparison {
    double eval = 0.0;
    McEstimate mc;
    /// (eval - mc.value) / mc.std_error. A zero-variance estimate gives 0
    /// when the values agree to 1e-9 (relative) and an infinity otherwise.
    double z_score = 0.0;

    nlohmann::json to_json() const;
};

/// Heat-semigroup pseudomeasure value against the Monte Carlo estimate.
WienerComparison compare_heat_with_wiener(const Grid& grid, const std::vector<double>& times,
                                          const std::vector<BaseSet>& bases, std::size_t n_paths,
                                          std::uint64_t seed);

}  // namespace pml
