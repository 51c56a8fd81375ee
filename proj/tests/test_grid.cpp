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

#include "doctest.h"

#include "pml/grid.hpp"
#include "test_support.hpp"

using namespace pml;

TEST_CASE("make_grid spacing and cell count") {
    const auto g1 = make_grid(1, 8, 1.0);
    CHECK(g1.spacing() == doctest::Approx(0.125));
    CHECK(g1.size() == 8);
    CHECK(std::abs(g1.spacing() * g1.cells_per_axis() - g1.extent()) < 1e-12);

    const auto g2 = make_grid(2, 4, 2.0);
    CHECK(g2.size() == 16);
    CHECK(g2.spacing() == doctest::Approx(0.5));
    CHECK(g2.cell_volume() == doctest::Approx(0.25));
}

TEST_CASE("make_grid rejects bad shapes") {
    CHECK_THROWS_AS(make_grid(1, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(3, 4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1, 4, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1, 4, -1.0), InvalidArgument);
    CHECK_THROWS_AS(make_scalar_grid(0.0), InvalidArgument);
}

TEST_CASE("indicator") {
    const auto g = make_grid(1, 4, 1.0);
    CHECK(indicator(BaseSet::empty(g)).values().isZero());
    CHECK(indicator(BaseSet::full(g)).values() == Vector::Ones(4));
    const auto v = indicator(BaseSet(g, {0}));
    CHECK(v[0] == Complex(1.0));
    CHECK(v[1] == Complex(0.0));
    CHECK(v[2] == Complex(0.0));
    CHECK(v[3] == Complex(0.0));
}

TEST_CASE("inner product convention") {
    const auto g = make_grid(1, 2, 1.0);
    const Complex i(0.0, 1.0);
    // 0.5 * (1 * conj(i) + i * conj(1)) = 0.5 * (-i + i)
    CHECK(std::abs(inner(StateVector(g, {1.0, i}), StateVector(g, {i, 1.0}))) < 1e-15);
    // Linear in the first slot, conjugate-linear in the second.
    const StateVector u(g, {1.0, 2.0}), v(g, {1.0, 0.0});
    CHECK(std::abs(inner(u * i, v) - i * inner(u, v)) < 1e-15);
    CHECK(std::abs(inner(u, v * i) + i * inner(u, v)) < 1e-15);
    CHECK(inner(u, StateVector(g)) == Complex(0.0));
    CHECK_THROWS_AS(inner(u, StateVector(make_grid(1, 2, 2.0))), GridMismatch);
}

TEST_CASE("indicator norms equal Lebesgue measure") {
    const auto g = make_grid(2, 6, 3.0);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const auto b = test::random_base(g, rng);
        CHECK(inner(indicator(b), indicator(b)).real() == doctest::Approx(lebesgue(b)).epsilon(1e-14));
    }
}

TEST_CASE("lebesgue") {
    const auto g = make_grid(1, 8, 1.0);
    CHECK(lebesgue(BaseSet(g, {0, 1, 2, 3})) == doctest::Approx(0.5));
    CHECK(lebesgue(BaseSet::empty(g)) == 0.0);
    CHECK(lebesgue(BaseSet::full(make_grid(1, 4, 2.0))) == doctest::Approx(2.0));
}

TEST_CASE("lebesgue is additive on disjoint sets") {
    const auto g = make_grid(1, 32, 1.0);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const auto a = test::random_base(g, rng);
        const auto b = test::random_base(g, rng) - a;
        CHECK(lebesgue(a | b) == doctest::Approx(lebesgue(a) + lebesgue(b)).epsilon(1e-14));
    }
}

TEST_CASE("project") {
    const auto g = make_grid(1, 16, 1.0);
    std::mt19937_64 rng(3);
    const auto v = test::random_state(g, rng);
    CHECK(project(BaseSet::full(g), v).values() == v.values());
    CHECK(project(BaseSet::empty(g), v).values().isZero());
    const auto b = test::random_base(g, rng);
    CHECK(project(b, project(b, v)).values() == project(b, v).values());
}

TEST_CASE("properties: Hermitian symmetry and self-adjoint projection") {
    const auto g = make_grid(2, 5, 1.0);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 25; ++k) {
        const auto u = test::random_state(g, rng);
        const auto v = test::random_state(g, rng);
        const auto b = test::random_base(g, rng);
        CHECK(std::abs(inner(u, v) - std::conj(inner(v, u))) < 1e-12);
        CHECK(std::abs(inner(project(b, u), v) - inner(u, project(b, v))) < 1e-12);
    }
}

TEST_CASE("base set complement is an involution") {
    const auto g = make_grid(1, 9, 1.0);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
        const auto b = test::random_base(g, rng);
        CHECK(b.complement().complement() == b);
        CHECK((b & b.complement()).is_empty());
        CHECK((b | b.complement()).is_full());
    }
    CHECK_THROWS_AS(BaseSet(g, {9}), InvalidArgument);
}

TEST_CASE("refine_base keeps the measure") {
    const auto g = make_grid(2, 4, 1.0);
    std::mt19937_64 rng(4);
    const auto b = test::random_base(g, rng);
    const auto fine = refine_base(b);
    CHECK(fine.grid().cells_per_axis() == 8);
    CHECK(lebesgue(fine) == doctest::Approx(lebesgue(b)));
}
