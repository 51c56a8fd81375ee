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

#include <cmath>
#include <numbers>

#include "pml/pseudomeasure.hpp"
#include "test_support.hpp"

using namespace pml;
using std::numbers::pi;

namespace {

std::vector<double> cosine_potential(const Grid& g, double amplitude) {
    std::vector<double> v(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) v[c] = amplitude * std::cos(2.0 * pi * g.center(c, 0) / g.extent());
    return v;
}

Semigroup schrodinger(const Grid& g, Mode mode, double amplitude = 20.0) {
    return Semigroup(build_generator(g, GeneratorSpec::laplacian_plus_potential(cosine_potential(g, amplitude))), mode);
}

Semigroup laplace(const Grid& g, Mode mode) { return Semigroup(build_generator(g, GeneratorSpec::laplacian()), mode); }

// Cylinder value assembled from Pade exponentials and explicit projector matrices.
Complex eval_oracle(const Semigroup& sg, const CylinderSet& a) {
    const auto& t = a.times();
    const auto& b = a.bases();
    if (a.arity() == 1) return lebesgue(b[0]);
    Vector x = indicator(b.front()).values();
    for (std::size_t j = 1; j < a.arity(); ++j) {
        x = test::expm_oracle(sg.generator().matrix(), sg.mode(), t[j] - t[j - 1]) * x;
        if (j + 1 < a.arity()) x = projector(b[j]) * x;
    }
    return a.grid().cell_volume() * indicator(b.back()).values().dot(x);
}

CylinderSet random_cylinder(const Grid& g, std::mt19937_64& rng, std::size_t arity, double horizon = 1.0) {
    std::uniform_real_distribution<double> time(0.0, horizon);
    std::vector<double> times;
    std::vector<BaseSet> bases;
    for (std::size_t j = 0; j < arity; ++j) {
        times.push_back(time(rng));
        bases.push_back(test::nonempty_random_base(g, rng));
    }
    return make_cylinder(times, bases);
}

CylinderSet with_base(const CylinderSet& a, std::size_t j, const BaseSet& b) {
    auto bases = a.bases();
    bases[j] = b;
    return make_cylinder(a.times(), bases);
}

std::vector<std::vector<BaseSet>> all_base_pairs(const Grid& g) {
    std::vector<BaseSet> subsets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << g.size()); ++mask) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < g.size(); ++c) {
            if (mask >> c & 1U) cells.push_back(c);
        }
        subsets.emplace_back(g, cells);
    }
    std::vector<std::vector<BaseSet>> pairs;
    for (const auto& x : subsets) {
        for (const auto& y : subsets) pairs.push_back({x, y});
    }
    return pairs;
}

}  // namespace

TEST_CASE("semigroup-backed values match the matrix-product oracle") {
    const auto g = make_grid(1, 12, 1.0);
    std::mt19937_64 rng(21);
    for (auto mode : {Mode::unitary, Mode::heat}) {
        const auto sg = schrodinger(g, mode);
        const auto mu = from_semigroup(sg);
        for (int k = 0; k < 40; ++k) {
            const auto a = random_cylinder(g, rng, 1 + static_cast<std::size_t>(k % 4), 0.2);
            CHECK(std::abs(mu.eval(a) - eval_oracle(sg, a)) < 1e-9);
        }
    }
}

TEST_CASE("heat cylinder with a free endpoint keeps the Lebesgue mass") {
    const auto g = make_grid(1, 32, 1.0);
    const auto mu = from_semigroup(laplace(g, Mode::heat));
    std::mt19937_64 rng(4);
    for (double t : {0.001, 0.05, 0.7}) {
        const auto b = test::nonempty_random_base(g, rng);
        CHECK(std::abs(mu.eval(make_cylinder({0.0, t}, {b, BaseSet::full(g)})) - lebesgue(b)) < 1e-9);
    }
}

TEST_CASE("one-cell unitary example") {
    for (double extent : {1.0, 2.5}) {
        const auto g = make_scalar_grid(extent);
        const auto mu = from_semigroup(Semigroup(build_generator(g, GeneratorSpec::multiplication({1.0})), Mode::unitary));
        const double t = 0.9;
        const auto full = BaseSet::full(g);
        CHECK(std::abs(mu.eval(make_cylinder({0.0, t}, {full, full})) - extent * std::exp(Complex(0.0, -t))) < 1e-14);
    }
}

TEST_CASE("ring element evaluation and normalization") {
    const auto g = make_grid(1, 8, 1.0);
    const auto mu = from_semigroup(laplace(g, Mode::unitary));
    CHECK(eval(mu, CylinderSet::empty(g)) == Complex(0.0));
    CHECK(eval(mu, RingElement{}) == Complex(0.0));
    CHECK(eval(mu, RingElement::omega()) == Complex(1.0));

    std::mt19937_64 rng(9);
    for (int k = 0; k < 10; ++k) {
        const auto a = random_cylinder(g, rng, 2 + static_cast<std::size_t>(k % 2));
        const Complex direct = eval(mu, RingElement::of(a));
        // Complemented path: mu(A) = 1 - mu(Omega \ A) with the ring value of Omega \ A.
        CHECK(std::abs(eval(mu, RingElement{{a}, true}) + direct - 1.0) < 1e-12);
        // Ring path: the full partition carries mu_L(grid), not 1.
        CHECK(std::abs(direct + eval(mu, complement(a)) - lebesgue(BaseSet::full(g))) < 1e-9);
    }
}

TEST_CASE("combine") {
    const auto g = make_grid(1, 10, 1.0);
    const auto mu1 = from_semigroup(laplace(g, Mode::unitary));
    const auto mu2 = from_semigroup(schrodinger(g, Mode::heat));
    std::mt19937_64 rng(12);
    for (int k = 0; k < 10; ++k) {
        const auto a = random_cylinder(g, rng, 3);
        CHECK(combine({1.0}, {mu1}).eval(a) == mu1.eval(a));
        CHECK(std::abs(combine({1.0, -1.0}, {mu1, mu1}).eval(a)) < 1e-15);
        CHECK(std::abs(combine({0.5, 0.5}, {mu1, mu2}).eval(a) - 0.5 * (mu1.eval(a) + mu2.eval(a))) < 1e-14);
    }
    CHECK(Pseudomeasure::zero(g).eval(make_cylinder({0.0, 1.0}, {BaseSet::full(g), BaseSet::full(g)})) == Complex(0.0));
    CHECK_THROWS_AS(combine({}, {}), InvalidArgument);
    CHECK_THROWS_AS(combine({1.0, 2.0}, {mu1}), InvalidArgument);
    CHECK_THROWS_AS(combine({1.0, 2.0}, {mu1, from_semigroup(laplace(make_grid(1, 4, 1.0), Mode::heat))}),
                    GridMismatch);
}

TEST_CASE("table-backed pseudomeasure") {
    const auto g = make_grid(1, 4, 1.0);
    const auto a = make_cylinder({0.0, 1.0}, {BaseSet(g, {0}), BaseSet(g, {1})});
    const auto b = make_cylinder({0.0, 1.0}, {BaseSet(g, {2}), BaseSet(g, {1})});
    const auto table = Pseudomeasure::table(g, {{a, Complex(0.25, -1.0)}});
    CHECK(table.eval(a) == Complex(0.25, -1.0));
    CHECK(table.eval(CylinderSet::empty(g)) == Complex(0.0));
    CHECK_THROWS_AS(table.eval(b), Unevaluable);
    CHECK_THROWS_AS(reconstruct_operator(table, {0.0, 1.0}), Unevaluable);
}

TEST_CASE("sesquilinear form") {
    const auto g = make_grid(1, 10, 1.0);
    const auto mu = from_semigroup(schrodinger(g, Mode::unitary));
    std::mt19937_64 rng(31);
    const std::vector<double> times{0.0, 0.2, 0.5};
    const auto mid = test::nonempty_random_base(g, rng);
    const SesquilinearForm form{mu, times, {mid}};

    const auto b0 = test::nonempty_random_base(g, rng), b2 = test::nonempty_random_base(g, rng);
    CHECK(std::abs(sesquilinear_eval(form, indicator(b0), indicator(b2)) - mu.eval(make_cylinder(times, {b0, mid, b2}))) <
          1e-12);

    const auto u = test::random_state(g, rng), v = test::random_state(g, rng);
    CHECK(sesquilinear_eval(form, StateVector(g), v) == Complex(0.0));
    CHECK(sesquilinear_eval(form, u, StateVector(g)) == Complex(0.0));
    const Complex c(0.3, 2.0), s(-1.5, 0.7);
    CHECK(std::abs(sesquilinear_eval(form, u * c, v * s) - c * std::conj(s) * sesquilinear_eval(form, u, v)) < 1e-10);
    CHECK_THROWS_AS(sesquilinear_eval(form, test::random_state(make_grid(1, 5, 1.0), rng), v), GridMismatch);
}

TEST_CASE("operator reconstruction") {
    const auto g = make_grid(1, 16, 1.0);
    const auto heat = laplace(g, Mode::heat);
    const auto mu = from_semigroup(heat);
    const Matrix lap = heat.generator().matrix();

    CHECK(test::max_abs(reconstruct_operator(mu, {0.0, 0.3}) - test::expm_oracle(lap, Mode::heat, 0.3)) < 1e-9);
    CHECK(test::max_abs(reconstruct_operator(mu, {0.4, 0.4}) - Matrix::Identity(16, 16)) < 1e-12);

    std::mt19937_64 rng(2);
    const auto b = test::nonempty_random_base(g, rng);
    const Matrix expected = test::expm_oracle(lap, Mode::heat, 0.25) * projector(b) * test::expm_oracle(lap, Mode::heat, 0.1);
    CHECK(test::max_abs(reconstruct_operator(mu, {0.0, 0.1, 0.35}, {b}) - expected) < 1e-9);
    CHECK(test::max_abs(reconstruct_operator_by_probes(mu, {0.0, 0.1, 0.35}, {b}) - expected) < 1e-9);

    CHECK_THROWS_AS(reconstruct_operator(mu, {0.0}), InvalidArgument);
    CHECK_THROWS_AS(reconstruct_operator(mu, {0.0, 0.1, 0.2}), InvalidArgument);
}

TEST_CASE("Markov check") {
    const auto g = make_grid(1, 12, 1.0);
    const auto mu = from_semigroup(schrodinger(g, Mode::unitary));
    std::mt19937_64 rng(77);
    std::vector<MarkovSample> samples;
    for (int k = 0; k < 10; ++k) {
        samples.push_back({{0.0, 0.1 + 0.05 * k, 0.3 + 0.1 * k, 1.5}, {test::random_base(g, rng), test::random_base(g, rng)},
                           1 + static_cast<std::size_t>(k % 2)});
    }
    const auto report = check_markov(mu, samples);
    CHECK(report.max_residual < 1e-9);
    CHECK(report.samples == samples.size());
    CHECK(check_markov(mu, {{{0.0, 0.4, 0.4}, {BaseSet::full(g)}, 1}}).max_residual < 1e-9);

    // Mean of e^{-it} and e^{it} is cos t; cos(pi/2)^2 - cos(pi) = 1.
    const auto s = make_scalar_grid();
    auto scalar = [&](double lambda) {
        return from_semigroup(Semigroup(build_generator(s, GeneratorSpec::multiplication({lambda})), Mode::unitary));
    };
    const auto mean = combine({0.5, 0.5}, {scalar(1.0), scalar(-1.0)});
    const auto failure = check_markov(mean, {{{0.0, pi / 2, pi}, {BaseSet::full(s)}, 1}});
    CHECK(failure.max_residual == doctest::Approx(1.0).epsilon(1e-12));

    const auto json = failure.to_json();
    CHECK(json.at("property") == "markov");
    CHECK(json.contains("witness"));
    CHECK(json.at("n_samples") == 1);
}

TEST_CASE("stationarity check") {
    const auto g = make_grid(1, 10, 1.0);
    const auto mu = from_semigroup(schrodinger(g, Mode::heat));
    std::mt19937_64 rng(8);
    std::vector<CylinderSet> samples;
    for (int k = 0; k < 20; ++k) samples.push_back(random_cylinder(g, rng, 2 + static_cast<std::size_t>(k % 3)));
    CHECK(check_stationary(mu, 0.37, samples).max_residual < 1e-10);
    CHECK(check_stationary(mu, 0.0, samples).max_residual == 0.0);
    CHECK_THROWS_AS(check_stationary(mu, -0.1, samples), InvalidArgument);

    const auto a = samples.front();
    const auto table = Pseudomeasure::table(g, {{a, Complex(0.5)}, {shift_times(a, 1.0), Complex(0.25)}});
    CHECK(check_stationary(table, 1.0, {a}).max_residual == doctest::Approx(0.25));
}

TEST_CASE("continuity constant a") {
    const auto g = make_grid(1, 14, 1.0);
    CHECK(continuity_constant_a(from_semigroup(schrodinger(g, Mode::unitary)), {0.0, 0.8}) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(continuity_constant_a(from_semigroup(laplace(g, Mode::heat)), {0.1, 0.2}) <= 1.0 + 1e-12);
    CHECK(continuity_constant_a(Pseudomeasure::zero(g), {0.0, 1.0}) == 0.0);
}

TEST_CASE("continuity constant b") {
    const auto g = make_grid(1, 64, 1.0);
    const auto heat = laplace(g, Mode::heat);
    const auto mu = from_semigroup(heat);
    const double t = 0.01;

    std::vector<std::vector<BaseSet>> singles;
    for (std::size_t j = 0; j < g.size(); ++j) singles.push_back({BaseSet(g, {0}), BaseSet(g, {j})});
    const auto bound = continuity_constant_b(mu, {0.0, t}, singles);
    const Matrix u = test::expm_oracle(heat.generator().matrix(), Mode::heat, t);
    CHECK(bound.constant == doctest::Approx(u.cwiseAbs().maxCoeff() / g.spacing()).epsilon(1e-9));

    // Continuum periodic kernel at the origin, summed over images.
    double kernel = 0.0;
    for (int k = -5; k <= 5; ++k) kernel += std::exp(-double(k * k) / (4.0 * t)) / std::sqrt(4.0 * pi * t);
    CHECK(bound.constant == doctest::Approx(kernel).epsilon(0.05));

    CHECK(continuity_constant_b(Pseudomeasure::zero(g), {0.0, t}, singles).constant == 0.0);
    const auto doubled = continuity_constant_b(combine({2.0}, {mu}), {0.0, t}, singles);
    CHECK(doubled.constant == doctest::Approx(2.0 * bound.constant).epsilon(1e-14));

    auto with_null = singles;
    with_null.push_back({BaseSet::empty(g), BaseSet(g, {1})});
    const auto skipped = continuity_constant_b(mu, {0.0, t}, with_null);
    CHECK(skipped.skipped == 1);
    CHECK(skipped.samples == singles.size());
    CHECK(skipped.constant == bound.constant);
}

TEST_CASE("properties: additivity over disjoint splits") {
    const auto g = make_grid(1, 9, 1.0);
    std::mt19937_64 rng(505);
    const auto mu = combine({Complex(0.7, 0.2), 0.3}, {from_semigroup(schrodinger(g, Mode::unitary)),
                                                        from_semigroup(laplace(g, Mode::heat))});
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto a = random_cylinder(g, rng, 2 + static_cast<std::size_t>(k % 3));
        if (a.is_empty()) continue;
        std::vector<CylinderSet> parts{a};
        // Split two random coordinates along random subsets.
        for (int round = 0; round < 2; ++round) {
            std::vector<CylinderSet> next;
            const std::size_t j = std::uniform_int_distribution<std::size_t>(0, a.arity() - 1)(rng);
            const auto cut = test::random_base(g, rng);
            for (const auto& p : parts) {
                for (const auto& piece : {p.bases()[j] & cut, p.bases()[j] - cut}) {
                    if (!piece.is_empty()) next.push_back(with_base(p, j, piece));
                }
            }
            parts = next;
        }
        const RingElement split{parts, false};
        REQUIRE(is_disjoint_family(split.parts));
        worst = std::max(worst, std::abs(eval(mu, split) - mu.eval(a)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("properties: inclusion-exclusion through disjointify") {
    const auto g = make_grid(1, 8, 1.0);
    std::mt19937_64 rng(41);
    const auto mu = from_semigroup(schrodinger(g, Mode::unitary));
    for (int k = 0; k < 20; ++k) {
        const auto a = random_cylinder(g, rng, 2);
        const auto b = make_cylinder(a.times(), {test::random_base(g, rng), test::random_base(g, rng)});
        const Complex expected = eval(mu, RingElement::of(a)) + eval(mu, RingElement::of(b)) -
                                 eval(mu, RingElement::of(intersect(a, b)));
        CHECK(std::abs(eval(mu, disjointify({a, b})) - expected) < 1e-10);
    }
}

TEST_CASE("properties: sesquilinear form agrees with the reconstructed operator") {
    const auto g = make_grid(1, 10, 1.0);
    std::mt19937_64 rng(6);
    for (auto mode : {Mode::unitary, Mode::heat}) {
        const auto mu = from_semigroup(schrodinger(g, mode));
        for (int k = 0; k < 10; ++k) {
            const std::vector<double> times{0.0, 0.05 * (k + 1), 0.1 * (k + 2)};
            const std::vector<BaseSet> mid{test::random_base(g, rng)};
            const Matrix op = reconstruct_operator(mu, times, mid);
            const auto u = test::random_state(g, rng), v = test::random_state(g, rng);
            CHECK(std::abs(sesquilinear_eval({mu, times, mid}, u, v) - inner(StateVector(g, op * u.values()), v)) <
                  1e-9);
        }
    }
}

TEST_CASE("properties: Markov, stationarity and continuity for a unitary semigroup") {
    const auto g = make_grid(2, 4, 1.0);
    const auto sg = laplace(g, Mode::unitary);
    const auto mu = from_semigroup(sg);
    std::mt19937_64 rng(99);
    std::vector<MarkovSample> markov;
    std::vector<CylinderSet> cylinders;
    double continuity = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double t1 = 0.1 * k, t2 = t1 + 0.3, t3 = t2 + 0.05 * k;
        markov.push_back({{0.0, t1, t2, t3}, {test::random_base(g, rng), test::random_base(g, rng)}, 2});
        cylinders.push_back(random_cylinder(g, rng, 3));
        continuity = std::max(continuity, continuity_constant_a(mu, {t1, t2}));
    }
    CHECK(check_markov(mu, markov).max_residual < 1e-9);
    CHECK(check_stationary(mu, 0.8, cylinders).max_residual < 1e-10);
    CHECK(continuity <= 1.0 + 1e-9);
}

TEST_CASE("properties: reconstruction recovers the propagator") {
    const auto g = make_grid(1, 20, 1.0);
    const auto sg = schrodinger(g, Mode::unitary, 40.0);
    const auto mu = from_semigroup(sg);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> time(0.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        const double s = time(rng), t = time(rng);
        const Matrix expected = test::expm_oracle(sg.generator().matrix(), Mode::unitary, t);
        CHECK(test::max_abs(reconstruct_operator(mu, {s, s + t}) - expected) < 1e-9);
    }
}

TEST_CASE("properties: sampled norm axioms") {
    const auto g = make_grid(1, 3, 1.0);
    const auto pairs = all_base_pairs(g);
    const std::vector<double> times{0.0, 0.3};
    const auto mu = from_semigroup(schrodinger(g, Mode::unitary, 5.0));
    const auto nu = from_semigroup(laplace(g, Mode::heat));
    auto p = [&](const Pseudomeasure& m) { return continuity_constant_b(m, times, pairs).constant; };

    for (Complex alpha : {Complex(2.0), Complex(-0.5, 1.5), Complex(0.0, -3.0)}) {
        CHECK(p(combine({alpha}, {mu})) == doctest::Approx(std::abs(alpha) * p(mu)).epsilon(1e-12));
    }
    CHECK(p(combine({1.0, 1.0}, {mu, nu})) <= p(mu) + p(nu) + 1e-9);

    const auto null = combine({1.0, -1.0}, {mu, mu});
    CHECK(p(null) == 0.0);
    for (const auto& pair : pairs) CHECK(null.eval(make_cylinder(times, pair)) == Complex(0.0));
    CHECK(p(mu) > 0.0);
}

TEST_CASE("properties: quadratic bound for a sum of forms") {
    const auto g = make_grid(1, 8, 1.0);
    std::mt19937_64 rng(13);
    const auto mu = from_semigroup(schrodinger(g, Mode::unitary));
    const auto nu = from_semigroup(laplace(g, Mode::heat));
    const auto sum = combine({1.0, 1.0}, {mu, nu});
    const std::vector<double> times{0.0, 0.2, 0.45};
    for (int k = 0; k < 20; ++k) {
        const std::vector<BaseSet> mid{test::random_base(g, rng)};
        const auto f = test::random_state(g, rng), h = test::random_state(g, rng);
        const double lhs = std::norm(sesquilinear_eval({sum, times, mid}, f, h));
        const double rhs =
            2.0 * (std::norm(sesquilinear_eval({mu, times, mid}, f, h)) + std::norm(sesquilinear_eval({nu, times, mid}, f, h)));
        CHECK(lhs <= rhs + 1e-9);
    }
}
