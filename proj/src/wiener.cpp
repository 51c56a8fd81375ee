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

#include "pml/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pml/cylinder.hpp"
#include "pml/parallel.hpp"
#include "pml/pseudomeasure.hpp"
#include "pml/random.hpp"
#include "pml/semigroup.hpp"

namespace pml {

namespace {

std::size_t cell_of(const Grid& grid, const double* x) {
    const auto n = static_cast<std::size_t>(grid.cells_per_axis());
    std::size_t cell = 0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
        auto k = static_cast<std::size_t>(x[axis] / grid.spacing());
        if (k >= n) k = n - 1;
        cell = cell * n + k;
    }
    return cell;
}

double wrap(double x, double extent) {
    double y = std::fmod(x, extent);
    if (y < 0.0) y += extent;
    return y >= extent ? 0.0 : y;
}

}  // namespace

McEstimate estimate_cylinder(const Grid& grid, const std::vector<double>& times, const std::vector<BaseSet>& bases,
                             std::size_t n_paths, std::uint64_t seed) {
    if (times.size() < 2 || times.size() != bases.size()) {
        throw InvalidArgument("Monte Carlo cylinder needs m >= 2 times with one base each");
    }
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1])) throw InvalidArgument("Monte Carlo cylinder times must strictly increase");
    }
    if (n_paths < 1000) throw InvalidArgument("Monte Carlo needs at least 1000 paths");
    for (const auto& b : bases) {
        if (!(b.grid() == grid)) throw GridMismatch();
    }
    const auto start_cells = bases.front().cells();
    if (start_cells.empty()) throw InvalidArgument("Monte Carlo start set is empty");

    const auto n = static_cast<std::size_t>(grid.cells_per_axis());
    std::vector<double> sigma(times.size());
    for (std::size_t j = 1; j < times.size(); ++j) sigma[j] = std::sqrt(2.0 * (times[j] - times[j - 1]));

    std::vector<unsigned char> hit(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t p) {
        KeyedStream rng(seed, p);
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(start_cells.size()));
        std::size_t cell = start_cells[std::min(pick, start_cells.size() - 1)];
        double x[2] = {0.0, 0.0};
        for (int axis = grid.dim() - 1; axis >= 0; --axis) {
            x[axis] = (static_cast<double>(cell % n) + rng.uniform()) * grid.spacing();
            cell /= n;
        }
        for (std::size_t j = 1; j < times.size(); ++j) {
            for (int axis = 0; axis < grid.dim(); ++axis) {
                x[axis] = wrap(x[axis] + sigma[j] * rng.normal(), grid.extent());
            }
            if (!bases[j].contains(cell_of(grid, x))) return;
        }
        hit[p] = 1;
    });

    std::size_t hits = 0;
    for (auto h : hit) hits += h;
    const double weight = lebesgue(bases.front());
    const double frac = static_cast<double>(hits) / static_cast<double>(n_paths);
    McEstimate est;
    est.value = weight * frac;
    est.std_error = weight * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_paths));
    est.n_paths = n_paths;
    est.seed = seed;
    return est;
}

double bessel_oracle(double t, int points) {
    double sum = 0.0;
    for (int k = 0; k < points; ++k) {
        sum += std::cos(t * std::sin(2.0 * std::numbers::pi * k / points));
    }
    return sum / points;
}

nlohmann::json WienerComparison::to_json() const {
    return {{"eval", eval},   {"mc_value", mc.value}, {"mc_stderr", mc.std_error},
            {"z_score", z_score}, {"n_paths", mc.n_paths}, {"seed", mc.seed}};
}

WienerComparison compare_heat_with_wiener(const Grid& grid, const std::vector<double>& times,
                                          const std::vector<BaseSet>& bases, std::size_t n_paths,
                                          std::uint64_t seed) {
    const Semigroup heat(build_generator(grid, GeneratorSpec::laplacian()), Mode::heat);
    WienerComparison cmp;
    cmp.eval = from_semigroup(heat).eval(make_cylinder(times, bases)).real();
    cmp.mc = estimate_cylinder(grid, times, bases, n_paths, seed);
    const double diff = cmp.eval - cmp.mc.value;
    if (cmp.mc.std_error > 0.0) {
        cmp.z_score = diff / cmp.mc.std_error;
    } else {
        const bool agrees = std::abs(diff) <= 1e-9 * std::max(1.0, std::abs(cmp.mc.value));
        cmp.z_score = agrees ? 0.0 : std::copysign(INFINITY, diff);
    }
    return cmp;
}

}  // namespace pml
