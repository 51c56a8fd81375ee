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

#include <atomic>
#include <numbers>
#include <thread>

#include "pml/semigroup.hpp"
#include "pml/wiener.hpp"
#include "test_support.hpp"

using namespace pml;
using std::numbers::pi;

namespace {

Semigroup laplace(const Grid& g, Mode mode) { return Semigroup(build_generator(g, GeneratorSpec::laplacian()), mode); }

}  // namespace

TEST_CASE("periodic laplacian on two cells") {
    const auto g = make_grid(1, 2, 1.0);
    const auto gen = build_generator(g, GeneratorSpec::laplacian());
    const double inv_h2 = 1.0 / 0.25;
    Matrix expected(2, 2);
    expected << -2.0 * inv_h2, 2.0 * inv_h2, 2.0 * inv_h2, -2.0 * inv_h2;
    CHECK(test::max_abs(gen->matrix() - expected) < 1e-12);
    // Eigenvalues {0, -4/h^2} = {0, -16}, ascending.
    CHECK(gen->eigenvalues()[0] == doctest::Approx(-16.0));
    CHECK(std::abs(gen->eigenvalues()[1]) < 1e-12);
}

TEST_CASE("laplacian is Hermitian, negative semidefinite, and well factorized") {
    for (const auto& g : {make_grid(1, 33, 1.0), make_grid(2, 6, 2.0)}) {
        const auto gen = build_generator(g, GeneratorSpec::laplacian());
        const Matrix l = gen->matrix();
        CHECK(test::max_abs(l - l.adjoint()) < 1e-10);
        CHECK(gen->eigenvalues().maxCoeff() < 1e-9);
        CHECK(gen->reconstruction_residual() < 1e-10);
    }
}

TEST_CASE("multiplication by one is the identity generator") {
    const auto g = make_grid(1, 5, 1.0);
    const auto gen = build_generator(g, GeneratorSpec::multiplication(std::vector<double>(5, 1.0)));
    CHECK(test::max_abs(gen->matrix() - Matrix::Identity(5, 5)) == 0.0);
    CHECK(gen->eigenvalues().isOnes());
}

TEST_CASE("generator construction errors") {
    const auto g = make_grid(1, 3, 1.0);
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(build_generator(g, GeneratorSpec::explicit_hermitian(m)), InvalidArgument);
    CHECK_THROWS_AS(build_generator(g, GeneratorSpec::multiplication({1.0, 2.0})), InvalidArgument);
    CHECK_THROWS_AS(build_generator(g, GeneratorSpec::laplacian_plus_potential({1.0})), InvalidArgument);
    CHECK_THROWS_AS(build_generator(g, GeneratorSpec::explicit_hermitian(Matrix::Identity(2, 2))), InvalidArgument);

    m(1, 0) = 1.0;
    const auto gen = build_generator(g, GeneratorSpec::explicit_hermitian(m));
    CHECK(gen->reconstruction_residual() < 1e-10);
}

TEST_CASE("propagate at zero is the identity") {
    const auto g = make_grid(1, 8, 1.0);
    for (auto mode : {Mode::unitary, Mode::heat}) {
        CHECK(test::max_abs(propagate(laplace(g, mode), 0.0) - Matrix::Identity(8, 8)) == 0.0);
    }
}

TEST_CASE("scalar unitary semigroup at t = pi") {
    const auto g = make_scalar_grid();
    const Semigroup sg(build_generator(g, GeneratorSpec::multiplication({1.0})), Mode::unitary);
    const Matrix u = sg.propagate(pi);
    CHECK(std::abs(u(0, 0) - Complex(-1.0)) < 1e-15);
}

TEST_CASE("heat semigroup rejects negative time") {
    CHECK_THROWS_AS(laplace(make_grid(1, 4, 1.0), Mode::heat).propagate(-0.1), InvalidArgument);
}

TEST_CASE("heat semigroup at large time projects onto constants") {
    const auto g = make_grid(1, 8, 1.0);
    const auto sg = laplace(g, Mode::heat);
    const Matrix u = sg.propagate(100.0);
    CHECK(test::max_abs(u - Matrix::Constant(8, 8, 1.0 / 8.0)) < 1e-10);
    // Column images keep their mass.
    const auto b = BaseSet(g, {1, 2, 5});
    CHECK(std::abs(inner(StateVector(g, u * indicator(b).values()), indicator(BaseSet::full(g))) - lebesgue(b)) <
          1e-10);

    const Matrix far = sg.propagate(1e6);
    CHECK(test::max_abs(far - Matrix::Constant(8, 8, 1.0 / 8.0)) < 1e-10);
    CHECK(std::abs(inner(StateVector(g, far * indicator(b).values()), indicator(BaseSet::full(g))) - lebesgue(b)) <
          1e-10);
}

TEST_CASE("semigroup defect") {
    const auto g = make_grid(1, 16, 1.0);
    const auto u = laplace(g, Mode::unitary);
    CHECK(semigroup_defect(u, 0.0, 1.0) < 1e-10);
    CHECK(semigroup_defect(u, 0.3, 0.7) < 1e-9);
    CHECK(semigroup_defect(laplace(g, Mode::heat), 0.01, 0.02) < 1e-9);

    // J0(t) I is not a semigroup: |J0(2) - J0(1)^2| = 0.361637 (scipy.special.j0).
    const OperatorFamily bessel = [](double t) { return Matrix(Matrix::Identity(2, 2) * bessel_oracle(t)); };
    CHECK(semigroup_defect(bessel, 1.0, 1.0) == doctest::Approx(0.3616367203724283).epsilon(1e-9));
}

TEST_CASE("properties: unitarity, group law, adjoint law") {
    const auto g = make_grid(1, 24, 1.0);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> time(-2.0, 2.0);
    std::vector<double> potential(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) potential[c] = 30.0 * std::cos(2.0 * pi * g.center(c));
    const Semigroup sg(build_generator(g, GeneratorSpec::laplacian_plus_potential(potential)), Mode::unitary);

    double unitarity = 0.0, group = 0.0, adjoint = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double t = time(rng), s = time(rng);
        const auto v = test::random_state(g, rng);
        unitarity = std::max(unitarity, std::abs(sg.apply(t, v).norm() - v.norm()));
        group = std::max(group, semigroup_defect(sg, t, s));
        adjoint = std::max(adjoint, test::max_abs(sg.propagate(t).adjoint() - sg.propagate(-t)));
    }
    CHECK(unitarity < 1e-9);
    CHECK(group < 1e-9);
    CHECK(adjoint < 1e-10);
}

TEST_CASE("properties: heat contraction, positivity, mass conservation") {
    const auto g = make_grid(1, 32, 1.0);
    const auto sg = laplace(g, Mode::heat);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> time(1e-4, 0.5);
    for (int k = 0; k < 20; ++k) {
        const double t = time(rng);
        const Matrix u = sg.propagate(t);
        CHECK(operator_norm(u) <= 1.0 + 1e-10);
        CHECK(u.real().minCoeff() >= -1e-12);
        CHECK(u.imag().cwiseAbs().maxCoeff() < 1e-12);
        const auto b = test::random_base(g, rng);
        const auto image = StateVector(g, u * indicator(b).values());
        CHECK(std::abs(inner(indicator(BaseSet::full(g)), image) - lebesgue(b)) < 1e-9);
    }
}

TEST_CASE("scalar pair family") {
    const auto g = make_scalar_grid();
    const auto fam = make_family(g, {"scalar_pair", {}, Mode::unitary}, {1.0, -1.0});
    const double t = 0.7;
    CHECK(std::abs(fam.member(0).propagate(t)(0, 0) - std::exp(Complex(0.0, -t))) < 1e-15);
    CHECK(std::abs(fam.member(1).propagate(t)(0, 0) - std::exp(Complex(0.0, t))) < 1e-15);
}

TEST_CASE("oscillating multiplier family") {
    const auto g = make_grid(1, 512, 1.0);
    const auto fam = make_family(g, {"oscillating_multiplier", {1.0}, Mode::unitary}, {1.0, 32.0, 64.0});
    CHECK(test::max_abs(fam.member(0).propagate(0.0) - Matrix::Identity(512, 512)) == 0.0);

    const auto one = indicator(BaseSet::full(g));
    const double norm2 = inner(one, one).real();
    for (double t : {0.5, 1.0, 2.0}) {
        const double j0 = bessel_oracle(t);
        for (std::size_t i = 1; i < fam.size(); ++i) {
            const Complex element = inner(fam.member(i).apply(t, one), one) / norm2;
            CHECK(std::abs(element - j0) < 2e-2);
        }
    }
}

TEST_CASE("regularized potential family converges to the cusp potential") {
    const auto g = make_grid(1, 32, 1.0);
    const auto fam = make_family(g, {"regularized_potential", {10.0}, Mode::unitary}, {0.2, 0.1, 0.05});
    const auto limit = fam.build(0.0);
    const Matrix target = limit.generator().matrix();
    double previous = INFINITY;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const double gap = test::max_abs(fam.member(i).generator().matrix() - target);
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("family errors") {
    const auto g = make_grid(1, 4, 1.0);
    CHECK_THROWS_AS(make_family(g, {"nope", {}, Mode::unitary}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(make_family(g, {"scalar_pair", {}, Mode::unitary}, {}), InvalidArgument);
    const auto fam = make_family(g, {"scalar_pair", {}, Mode::unitary}, {1.0});
    CHECK_THROWS_AS(fam.member(1), InvalidArgument);
}

TEST_CASE("random semigroup member is built once under concurrent access") {
    const auto g = make_grid(1, 64, 1.0);
    std::atomic<int> builds{0};
    RandomSemigroup fam(g, Mode::unitary, {1.0}, [&](double) {
        ++builds;
        return Semigroup(build_generator(g, GeneratorSpec::laplacian()), Mode::unitary);
    });
    std::vector<std::thread> threads;
    std::vector<const Semigroup*> seen(8);
    for (int k = 0; k < 8; ++k) threads.emplace_back([&, k] { seen[static_cast<std::size_t>(k)] = &fam.member(0); });
    for (auto& t : threads) t.join();
    CHECK(builds == 1);
    for (auto* p : seen) CHECK(p == seen[0]);
}
