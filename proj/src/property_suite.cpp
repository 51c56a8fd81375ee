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

#include "pml/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "pml/averaging.hpp"
#include "pml/cylinder.hpp"
#include "pml/functionals.hpp"
#include "pml/random.hpp"
#include "pml/wiener.hpp"

namespace pml {

namespace {

using Rng = std::mt19937_64;
using std::numbers::pi;

StateVector random_state(const Grid& g, Rng& rng) {
    std::normal_distribution<double> n;
    Vector v(static_cast<Eigen::Index>(g.size()));
    for (auto& x : v) x = Complex(n(rng), n(rng));
    return StateVector(g, v);
}

BaseSet random_base(const Grid& g, Rng& rng, bool nonempty = false) {
    std::bernoulli_distribution coin(0.5);
    for (;;) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < g.size(); ++c) {
            if (coin(rng)) cells.push_back(c);
        }
        if (!nonempty || !cells.empty()) return BaseSet(g, cells);
    }
}

CylinderSet random_cylinder(const Grid& g, Rng& rng, std::size_t arity) {
    std::uniform_real_distribution<double> time(0.0, 1.0);
    std::vector<double> times;
    std::vector<BaseSet> bases;
    for (std::size_t j = 0; j < arity; ++j) {
        times.push_back(time(rng));
        bases.push_back(random_base(g, rng, true));
    }
    return make_cylinder(times, bases);
}

Semigroup random_schrodinger(const Grid& g, Mode mode, Rng& rng) {
    std::uniform_real_distribution<double> amp(-30.0, 30.0);
    const double a = amp(rng), b = amp(rng);
    std::vector<double> v(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) {
        const double x = 2.0 * pi * g.center(c) / g.extent();
        v[c] = a * std::cos(x) + b * std::sin(2.0 * x);
    }
    return Semigroup(build_generator(g, GeneratorSpec::laplacian_plus_potential(v)), mode);
}

Semigroup free_semigroup(const Grid& g, Mode mode) { return Semigroup(build_generator(g, GeneratorSpec::laplacian()), mode); }

Matrix random_psd(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (auto& x : m.reshaped()) x = Complex(g(rng), g(rng));
    const Matrix p = m * m.adjoint();
    return p / operator_norm(p);
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Accumulates a max residual with the witness of the worst sample.
class Tracker {
public:
    explicit Tracker(std::string name) { report_.property = std::move(name); }

    void add(double residual, const nlohmann::json& witness = nullptr) {
        ++report_.samples;
        if (report_.samples == 1 || residual > report_.max_residual) {
            report_.max_residual = std::max(0.0, residual);
            report_.witness = witness;
        }
    }
    void skip() { ++report_.skipped; }
    PropertyReport done() { return std::move(report_); }

private:
    PropertyReport report_;
};

struct Check {
    const char* name;
    double bound;
    std::function<PropertyReport(const std::string& name, Rng& rng)> run;
};

// Discrete-path membership for the cylinder checks.
bool member(const CylinderSet& c, const std::vector<double>& pool, const std::vector<std::size_t>& path) {
    if (c.is_empty()) return false;
    for (std::size_t j = 0; j < c.arity(); ++j) {
        const auto it = std::find_if(pool.begin(), pool.end(), [&](double t) { return std::abs(t - c.times()[j]) < kTimeTolerance; });
        if (!c.bases()[j].contains(path[static_cast<std::size_t>(it - pool.begin())])) return false;
    }
    return true;
}

bool member(const RingElement& r, const std::vector<double>& pool, const std::vector<std::size_t>& path) {
    bool in = false;
    for (const auto& p : r.parts) in = in || member(p, pool, path);
    return r.complemented ? !in : in;
}

template <class F>
void for_each_path(std::size_t cells, std::size_t length, F&& f) {
    std::vector<std::size_t> path(length, 0);
    for (;;) {
        f(path);
        std::size_t k = 0;
        while (k < length && ++path[k] == cells) path[k++] = 0;
        if (k == length) return;
    }
}

CylinderSet pool_cylinder(const Grid& g, Rng& rng, const std::vector<double>& pool) {
    std::uniform_int_distribution<std::size_t> len(1, 3), pick(0, pool.size() - 1);
    std::vector<double> times;
    std::vector<BaseSet> bases;
    for (std::size_t j = 0, m = len(rng); j < m; ++j) {
        times.push_back(pool[pick(rng)]);
        bases.push_back(random_base(g, rng));
    }
    return make_cylinder(times, bases);
}

RingElement complement_of_union(const std::vector<CylinderSet>& parts) {
    std::vector<CylinderSet> acc = complement(parts.front()).parts;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::vector<CylinderSet> next;
        for (const auto& x : acc) {
            for (const auto& y : complement(parts[k]).parts) {
                auto z = intersect(x, y);
                if (!z.is_empty()) next.push_back(std::move(z));
            }
        }
        acc = std::move(next);
    }
    return disjointify(acc);
}

std::vector<std::vector<BaseSet>> all_base_pairs(const Grid& g) {
    std::vector<BaseSet> subsets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << g.size()); ++mask) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < g.size(); ++c) {
            if ((mask >> c) & 1U) cells.push_back(c);
        }
        subsets.emplace_back(g, cells);
    }
    std::vector<std::vector<BaseSet>> pairs;
    for (const auto& x : subsets) {
        for (const auto& y : subsets) pairs.push_back({x, y});
    }
    return pairs;
}

const std::vector<Check>& checks() {
    static const std::vector<Check> all{
        // grid-space
        {"grid/hermitian-symmetry", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(2, 5, 1.0);
             Tracker t(name);
             for (int k = 0; k < 25; ++k) {
                 const auto u = random_state(g, rng), v = random_state(g, rng);
                 t.add(std::abs(inner(u, v) - std::conj(inner(v, u))));
             }
             return t.done();
         }},
        {"grid/projection-self-adjoint", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 40, 2.0);
             Tracker t(name);
             for (int k = 0; k < 25; ++k) {
                 const auto u = random_state(g, rng), v = random_state(g, rng);
                 const auto b = random_base(g, rng);
                 t.add(std::abs(inner(project(b, u), v) - inner(u, project(b, v))));
             }
             return t.done();
         }},
        {"grid/lebesgue-additivity", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(2, 7, 3.0);
             Tracker t(name);
             for (int k = 0; k < 25; ++k) {
                 const auto a = random_base(g, rng);
                 const auto b = random_base(g, rng) - a;
                 t.add(std::abs(lebesgue(a | b) - lebesgue(a) - lebesgue(b)));
             }
             return t.done();
         }},
        // semigroup-engine
        {"semigroup/unitarity", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 32, 1.0);
             const auto sg = random_schrodinger(g, Mode::unitary, rng);
             std::uniform_real_distribution<double> time(-3.0, 3.0);
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double s = time(rng);
                 const auto v = random_state(g, rng);
                 t.add(std::abs(sg.apply(s, v).norm() - v.norm()), {{"t", s}});
             }
             return t.done();
         }},
        {"semigroup/group-law", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 32, 1.0);
             const auto unitary = random_schrodinger(g, Mode::unitary, rng);
             const auto heat = random_schrodinger(g, Mode::heat, rng);
             std::uniform_real_distribution<double> time(0.0, 1.0);
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double a = time(rng), b = time(rng);
                 t.add(semigroup_defect(k % 2 ? unitary : heat, a, b), {{"t", a}, {"s", b}});
             }
             return t.done();
         }},
        {"semigroup/adjoint-law", 1e-10,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 24, 1.0);
             const auto sg = random_schrodinger(g, Mode::unitary, rng);
             std::uniform_real_distribution<double> time(-2.0, 2.0);
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double s = time(rng);
                 t.add(max_abs(sg.propagate(s).adjoint() - sg.propagate(-s)), {{"t", s}});
             }
             return t.done();
         }},
        {"semigroup/heat-positivity", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 48, 1.0);
             const auto sg = free_semigroup(g, Mode::heat);
             std::uniform_real_distribution<double> time(1e-5, 1.0);
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double s = time(rng);
                 t.add(std::max(0.0, -sg.propagate(s).real().minCoeff()), {{"t", s}});
             }
             return t.done();
         }},
        {"semigroup/heat-mass", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(2, 6, 1.0);
             const auto sg = free_semigroup(g, Mode::heat);
             std::uniform_real_distribution<double> time(0.0, 2.0);
             const auto one = indicator(BaseSet::full(g));
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double s = time(rng);
                 const auto b = random_base(g, rng);
                 t.add(std::abs(inner(one, sg.apply(s, indicator(b))) - lebesgue(b)), {{"t", s}});
             }
             return t.done();
         }},
        // cylinder-algebra
        {"cylinder/path-oracle", 0.0,
         [](const std::string& name, Rng& rng) {
             const std::vector<double> pool{0.0, 0.5, 1.0};
             Tracker t(name);
             for (int cells : {2, 3}) {
                 const auto g = make_grid(1, cells, 1.0);
                 for (int trial = 0; trial < 30; ++trial) {
                     const auto a = pool_cylinder(g, rng, pool), b = pool_cylinder(g, rng, pool);
                     const auto not_a = complement(a);
                     const auto both = intersect(a, b);
                     const auto either = disjointify({a, b});
                     const bool doubled = !a.is_empty() && !not_a.parts.empty();
                     const auto again = doubled ? complement_of_union(not_a.parts) : RingElement{};
                     double mismatches = 0.0;
                     std::size_t total = 0, in_a = 0, in_not = 0, in_either = 0, oracle_either = 0;
                     for_each_path(static_cast<std::size_t>(cells), pool.size(), [&](const std::vector<std::size_t>& p) {
                         const bool ma = member(a, pool, p), mb = member(b, pool, p);
                         ++total;
                         in_a += ma;
                         in_not += member(not_a, pool, p);
                         for (const auto& part : either.parts) in_either += member(part, pool, p);
                         oracle_either += ma || mb;
                         mismatches += member(both, pool, p) != (ma && mb);
                         if (doubled) mismatches += member(again, pool, p) != ma;
                     });
                     mismatches += in_a + in_not != total;
                     mismatches += in_either != oracle_either;
                     mismatches += !is_disjoint_family(not_a.parts) || !is_disjoint_family(either.parts);
                     t.add(mismatches, {{"cells", cells}, {"trial", trial}});
                 }
             }
             return t.done();
         }},
        {"cylinder/idempotent-canonical-form", 0.0,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 4, 1.0);
             Tracker t(name);
             for (int k = 0; k < 30; ++k) {
                 const auto once = pool_cylinder(g, rng, {0.0, 0.25, 0.25, 2.0});
                 if (once.is_empty()) {
                     t.skip();
                     continue;
                 }
                 t.add(make_cylinder(once.times(), once.bases()) == once ? 0.0 : 1.0);
             }
             return t.done();
         }},
        // pseudomeasure-core
        {"pseudomeasure/additivity", 1e-10,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 9, 1.0);
             const auto mu = combine({Complex(0.7, 0.2), 0.3}, {from_semigroup(random_schrodinger(g, Mode::unitary, rng)),
                                                                 from_semigroup(free_semigroup(g, Mode::heat))});
             Tracker t(name);
             for (int k = 0; k < 50; ++k) {
                 const auto a = random_cylinder(g, rng, 2 + static_cast<std::size_t>(k % 3));
                 std::vector<CylinderSet> parts{a};
                 for (int round = 0; round < 2; ++round) {
                     const std::size_t j = std::uniform_int_distribution<std::size_t>(0, a.arity() - 1)(rng);
                     const auto cut = random_base(g, rng);
                     std::vector<CylinderSet> next;
                     for (const auto& p : parts) {
                         for (const auto& piece : {p.bases()[j] & cut, p.bases()[j] - cut}) {
                             if (piece.is_empty()) continue;
                             auto bases = p.bases();
                             bases[j] = piece;
                             next.push_back(make_cylinder(p.times(), bases));
                         }
                     }
                     parts = std::move(next);
                 }
                 t.add(std::abs(eval(mu, RingElement{parts, false}) - mu.eval(a)), {{"times", a.times()}});
             }
             return t.done();
         }},
        {"pseudomeasure/form-operator-consistency", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 10, 1.0);
             Tracker t(name);
             for (auto mode : {Mode::unitary, Mode::heat}) {
                 const auto mu = from_semigroup(random_schrodinger(g, mode, rng));
                 for (int k = 0; k < 25; ++k) {
                     const std::vector<double> times{0.0, 0.02 * (k + 1), 0.05 * (k + 2)};
                     const std::vector<BaseSet> mid{random_base(g, rng)};
                     const Matrix op = reconstruct_operator(mu, times, mid);
                     const auto u = random_state(g, rng), v = random_state(g, rng);
                     t.add(std::abs(sesquilinear_eval({mu, times, mid}, u, v) - inner(StateVector(g, op * u.values()), v)),
                           {{"mode", to_string(mode)}, {"times", times}});
                 }
             }
             return t.done();
         }},
        {"pseudomeasure/markov", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 16, 1.0);
             const auto mu = from_semigroup(free_semigroup(g, Mode::unitary));
             std::vector<MarkovSample> samples;
             for (int k = 0; k < 40; ++k) {
                 const double t1 = 0.1 * k, t2 = t1 + 0.3, t3 = t2 + 0.05 * k;
                 samples.push_back({{0.0, t1, t2, t3}, {random_base(g, rng), random_base(g, rng)}, 1 + std::size_t(k % 2)});
             }
             auto report = check_markov(mu, samples);
             report.property = name;
             return report;
         }},
        {"pseudomeasure/stationarity", 1e-10,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 16, 1.0);
             const auto mu = from_semigroup(free_semigroup(g, Mode::unitary));
             std::vector<CylinderSet> samples;
             for (int k = 0; k < 20; ++k) samples.push_back(random_cylinder(g, rng, 2 + std::size_t(k % 3)));
             auto report = check_stationary(mu, std::uniform_real_distribution<double>(0.1, 2.0)(rng), samples);
             report.property = name;
             return report;
         }},
        {"pseudomeasure/unit-continuity-constant", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 16, 1.0);
             const auto mu = from_semigroup(free_semigroup(g, Mode::unitary));
             std::uniform_real_distribution<double> time(0.0, 2.0);
             Tracker t(name);
             for (int k = 0; k < 10; ++k) {
                 const double s = time(rng), u = s + time(rng);
                 t.add(std::abs(continuity_constant_a(mu, {s, u}) - 1.0), {{"times", {s, u}}});
             }
             return t.done();
         }},
        {"pseudomeasure/round-trip", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 16, 1.0);
             std::uniform_real_distribution<double> time(0.0, 1.0);
             Tracker t(name);
             for (auto mode : {Mode::unitary, Mode::heat}) {
                 const auto sg = random_schrodinger(g, mode, rng);
                 const auto mu = from_semigroup(sg);
                 for (int k = 0; k < 10; ++k) {
                     const double s = time(rng), u = time(rng);
                     const Matrix expected = sg.propagate(u);
                     t.add(std::max(max_abs(reconstruct_operator(mu, {s, s + u}) - expected),
                                    max_abs(reconstruct_operator_by_probes(mu, {s, s + u}) - expected)),
                           {{"mode", to_string(mode)}, {"t", u}});
                 }
             }
             return t.done();
         }},
        {"pseudomeasure/norm-homogeneity", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 3, 1.0);
             const auto pairs = all_base_pairs(g);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             const double base = continuity_constant_b(mu, {0.0, 0.3}, pairs).constant;
             std::normal_distribution<double> n;
             Tracker t(name);
             for (int k = 0; k < 10; ++k) {
                 const Complex alpha(n(rng), n(rng));
                 const auto scaled = continuity_constant_b(combine({alpha}, {mu}), {0.0, 0.3}, pairs);
                 t.add(std::abs(scaled.constant - std::abs(alpha) * base) / std::max(1.0, std::abs(alpha) * base));
             }
             return t.done();
         }},
        {"pseudomeasure/norm-triangle", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 3, 1.0);
             const auto pairs = all_base_pairs(g);
             Tracker t(name);
             for (int k = 0; k < 10; ++k) {
                 const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
                 const auto nu = from_semigroup(random_schrodinger(g, Mode::heat, rng));
                 const std::vector<double> times{0.0, 0.1 + 0.1 * k};
                 auto p = [&](const Pseudomeasure& m) { return continuity_constant_b(m, times, pairs).constant; };
                 t.add(p(combine({1.0, 1.0}, {mu, nu})) - p(mu) - p(nu));
             }
             return t.done();
         }},
        {"pseudomeasure/norm-definiteness", 0.0,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 3, 1.0);
             const auto pairs = all_base_pairs(g);
             const std::vector<double> times{0.0, 0.4};
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             Tracker t(name);
             for (const auto& m : {Pseudomeasure::zero(g), combine({1.0, -1.0}, {mu, mu}), mu}) {
                 const bool null_norm = continuity_constant_b(m, times, pairs).constant == 0.0;
                 bool all_zero = true;
                 for (const auto& pair : pairs) all_zero = all_zero && m.eval(make_cylinder(times, pair)) == Complex(0.0);
                 t.add(null_norm == all_zero ? 0.0 : 1.0);
             }
             return t.done();
         }},
        {"pseudomeasure/form-sum-bound", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 8, 1.0);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             const auto nu = from_semigroup(random_schrodinger(g, Mode::heat, rng));
             const auto sum = combine({1.0, 1.0}, {mu, nu});
             const std::vector<double> times{0.0, 0.2, 0.45};
             Tracker t(name);
             for (int k = 0; k < 100; ++k) {
                 const std::vector<BaseSet> mid{random_base(g, rng)};
                 const auto f = random_state(g, rng), h = random_state(g, rng);
                 const double lhs = std::norm(sesquilinear_eval({sum, times, mid}, f, h));
                 const double rhs = 2.0 * (std::norm(sesquilinear_eval({mu, times, mid}, f, h)) +
                                           std::norm(sesquilinear_eval({nu, times, mid}, f, h)));
                 t.add(lhs - rhs);
             }
             return t.done();
         }},
        // topology-functionals
        {"functionals/bridge", 1e-9,
         [](const std::string& name, Rng& rng) {
             std::uniform_real_distribution<double> horizon(0.05, 2.0);
             Tracker t(name);
             for (int k = 0; k < 10; ++k) {
                 const auto g = make_grid(1, 8 + 4 * k, 1.0);
                 const auto sg = random_schrodinger(g, k % 2 ? Mode::unitary : Mode::heat, rng);
                 const double T = horizon(rng);
                 t.add(check_eq15(sg, random_state(g, rng), T), {{"cells", g.size()}, {"T", T}});
             }
             return t.done();
         }},
        {"functionals/three-time-breakdown", 0.0,
         [](const std::string& name, Rng&) {
             const auto g = make_grid(1, 512, 1.0);
             const auto fam = make_family(g, {"oscillating_multiplier", {1.0}, Mode::unitary}, {32.0});
             const auto mu = from_semigroup(fam.member(0));
             const auto v = BaseSet::interval(g, 0.1, 0.7), w = BaseSet::interval(g, 0.2, 0.9), y = BaseSet::interval(g, 0.05, 0.8);
             const double j1 = bessel_oracle(1.0);
             const double gap2 = std::abs(mu.eval(make_cylinder({0.0, 1.0}, {v, w})) - j1 * lebesgue(v & w));
             const double gap3 = std::abs(mu.eval(make_cylinder({0.0, 1.0, 2.0}, {v, w, y})) - j1 * j1 * lebesgue(v & w & y));
             Tracker t(name);
             t.add(std::max(0.0, 10.0 * gap2 - gap3), {{"two_time_gap", gap2}, {"three_time_gap", gap3}});
             return t.done();
         }},
        {"functionals/identity-observable", 1e-10,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 12, 1.0);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             const Matrix id = Matrix::Identity(12, 12);
             std::uniform_real_distribution<double> time(0.0, 1.0);
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const double t1 = time(rng), t2 = t1 + time(rng);
                 t.add(std::abs(f_state(mu, DensityState::pure(random_state(g, rng)), id, t1, t2) - 1.0));
             }
             return t.done();
         }},
        {"functionals/quadratic-homogeneity", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 10, 1.0);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             std::normal_distribution<double> n;
             Tracker t(name);
             for (int k = 0; k < 50; ++k) {
                 const auto rho = DensityState::pure(random_state(g, rng));
                 const Matrix obs = random_psd(g.size(), rng);
                 const Complex alpha(n(rng), n(rng));
                 const double base = f_state(mu, rho, obs, 0.0, 0.1 * k);
                 const double scaled = f_state(combine({alpha}, {mu}), rho, obs, 0.0, 0.1 * k);
                 t.add(std::abs(scaled - std::norm(alpha) * base) / std::max(1.0, std::norm(alpha)));
             }
             return t.done();
         }},
        {"functionals/state-sum-bound", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 10, 1.0);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::unitary, rng));
             const auto nu = from_semigroup(random_schrodinger(g, Mode::heat, rng));
             const auto sum = combine({1.0, 1.0}, {mu, nu});
             std::uniform_real_distribution<double> time(0.0, 0.5);
             Tracker t(name);
             for (int k = 0; k < 100; ++k) {
                 const auto rho = DensityState::pure(random_state(g, rng));
                 const Matrix obs = random_psd(g.size(), rng);
                 const double t1 = time(rng), t2 = t1 + time(rng);
                 t.add(f_state(sum, rho, obs, t1, t2) - 2.0 * (f_state(mu, rho, obs, t1, t2) + f_state(nu, rho, obs, t1, t2)));
             }
             return t.done();
         }},
        {"functionals/eigen-sum-form", 1e-9,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 10, 1.0);
             const auto mu = from_semigroup(random_schrodinger(g, Mode::heat, rng));
             std::normal_distribution<double> n;
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 Matrix m(10, 10);
                 for (auto& x : m.reshaped()) x = Complex(n(rng), n(rng));
                 const Matrix obs = m + m.adjoint();
                 const auto rho = DensityState::mixture({0.4, 0.6}, {random_state(g, rng), random_state(g, rng)});
                 t.add(std::abs(f_state(mu, rho, obs, 0.0, 0.02 * k) - f_state_eigensum(mu, rho, obs, 0.0, 0.02 * k)));
             }
             return t.done();
         }},
        // averaging-engine
        {"averaging/weak-identity", 1e-12,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 12, 1.0);
             const auto xi = make_family(g, {"oscillating_multiplier", {1.0}, Mode::unitary}, {1.0, 2.0, 3.0, 5.0});
             const auto nu = ParamMeasure::weights(xi.parameters(), {0.1, 0.2, 0.3, 0.4});
             std::uniform_real_distribution<double> time(0.0, 3.0);
             std::vector<double> ts;
             for (int k = 0; k < 20; ++k) ts.push_back(time(rng));
             const auto me = mean_evolution(xi, nu, ts);
             Tracker t(name);
             for (double s : ts) {
                 const auto a = random_state(g, rng), h = random_state(g, rng);
                 Complex expected = 0.0;
                 for (std::size_t i = 0; i < xi.size(); ++i) expected += nu.weights()[i] * inner(xi.member(i).apply(s, a), h);
                 t.add(std::abs(inner(StateVector(g, me.at(s) * a.values()), h) - expected), {{"t", s}});
             }
             return t.done();
         }},
        {"averaging/mean-continuity", 1e-12,
         [](const std::string& name, Rng&) {
             const auto g = make_grid(1, 32, 1.0);
             const auto xi = make_family(g, {"regularized_potential", {50.0}, Mode::unitary}, {0.2, 0.1, 0.05});
             const auto nu = ParamMeasure::uniform(xi.parameters());
             Vector smooth(32);
             for (Eigen::Index c = 0; c < 32; ++c) smooth[c] = std::exp(-std::pow((g.center(std::size_t(c)) - 0.5) / 0.1, 2));
             const StateVector v(g, smooth);
             const std::vector<double> base_ts{0.0, 0.25, 0.5, 0.75, 1.0};
             Tracker t(name);
             double previous = INFINITY;
             for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
                 std::vector<double> ts = base_ts;
                 for (double s : base_ts) ts.push_back(s + delta);
                 const auto me = mean_evolution(xi, nu, ts);
                 double mean_mod = 0.0, member_mod = 0.0;
                 for (double s : base_ts) {
                     mean_mod = std::max(mean_mod, StateVector(g, (me.at(s + delta) - me.at(s)) * v.values()).norm());
                     for (std::size_t i = 0; i < xi.size(); ++i) {
                         member_mod = std::max(member_mod, (xi.member(i).apply(s + delta, v) - xi.member(i).apply(s, v)).norm());
                     }
                 }
                 // Violations: the mean moving faster than its members, or not shrinking with delta.
                 t.add(std::max(mean_mod - member_mod, mean_mod >= previous ? 1.0 : 0.0),
                       {{"delta", delta}, {"mean_modulus", mean_mod}, {"member_modulus", member_mod}});
                 previous = mean_mod;
             }
             return t.done();
         }},
        {"averaging/mean-additivity", 1e-10,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 10, 1.0);
             const auto xi = make_family(g, {"oscillating_multiplier", {2.0}, Mode::unitary}, {1.0, 2.0, 4.0});
             const auto mean = mean_pseudomeasure(xi, ParamMeasure::weights(xi.parameters(), {0.5, 0.25, 0.25}));
             const std::vector<double> ts{0.0, 0.3, 0.9};
             Tracker t(name);
             for (int k = 0; k < 20; ++k) {
                 const auto b1 = random_base(g, rng, true), b2 = random_base(g, rng, true), cut = random_base(g, rng);
                 const RingElement split{{make_cylinder(ts, {b1, cut, b2}), make_cylinder(ts, {b1, cut.complement(), b2})}, false};
                 t.add(std::abs(eval(mean, split) - mean.eval(make_cylinder(ts, {b1, BaseSet::full(g), b2}))));
             }
             return t.done();
         }},
        {"averaging/markov-contrast", 0.0,
         [](const std::string& name, Rng&) {
             const auto xi = make_family(make_scalar_grid(), {"scalar_pair", {}, Mode::unitary}, {1.0, -1.0});
             const std::vector<MarkovSample> samples{{{0.0, pi / 2, pi}, {BaseSet::full(xi.grid())}, 1}};
             double members = 0.0;
             for (std::size_t i = 0; i < xi.size(); ++i) {
                 members = std::max(members, check_markov(from_semigroup(xi.member(i)), samples).max_residual);
             }
             const double mean = check_markov(mean_pseudomeasure(xi, ParamMeasure::uniform(xi.parameters())), samples).max_residual;
             Tracker t(name);
             t.add(std::max(members > 1e-9 ? members : 0.0, mean > 0.1 ? 0.0 : 0.1 - mean),
                   {{"member_residual", members}, {"mean_residual", mean}});
             return t.done();
         }},
        // wiener-oracle
        {"wiener/determinism", 0.0,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 32, 1.0);
             const std::uint64_t s = rng();
             const std::vector<double> times{0.0, 0.1};
             const std::vector<BaseSet> bases{BaseSet::interval(g, 0.0, 0.5), BaseSet::interval(g, 0.4, 0.9)};
             const auto a = estimate_cylinder(g, times, bases, 20000, s), b = estimate_cylinder(g, times, bases, 20000, s);
             Tracker t(name);
             t.add(a.value == b.value && a.std_error == b.std_error ? 0.0 : 1.0, {{"seed", s}});
             return t.done();
         }},
        {"wiener/error-scaling", 0.2,
         [](const std::string& name, Rng& rng) {
             const auto g = make_grid(1, 32, 1.0);
             const std::uint64_t s = rng();
             const std::vector<double> times{0.0, 0.1};
             const std::vector<BaseSet> bases{BaseSet::interval(g, 0.0, 0.5), BaseSet::interval(g, 0.5, 1.0)};
             const auto a = estimate_cylinder(g, times, bases, 20000, s), b = estimate_cylinder(g, times, bases, 80000, s);
             Tracker t(name);
             t.add(std::abs(b.std_error / a.std_error - 0.5) / 0.5, {{"seed", s}});
             return t.done();
         }},
        {"wiener/refinement-drift", 1.0,
         [](const std::string& name, Rng&) {
             const auto g = make_grid(1, 64, 1.0);
             const std::vector<double> times{0.0, 0.05};
             const std::vector<BaseSet> bases{BaseSet::interval(g, 0.1, 0.4), BaseSet::interval(g, 0.3, 0.6)};
             const auto coarse = compare_heat_with_wiener(g, times, bases, 100000, 1);
             const auto fine_grid = make_grid(1, 128, 1.0);
             const Semigroup fine(build_generator(fine_grid, GeneratorSpec::laplacian()), Mode::heat);
             const double fine_eval =
                 from_semigroup(fine).eval(make_cylinder(times, {refine_base(bases[0]), refine_base(bases[1])})).real();
             Tracker t(name);
             t.add(std::abs(fine_eval - coarse.eval) / coarse.mc.std_error,
                   {{"coarse", coarse.eval}, {"fine", fine_eval}, {"stderr", coarse.mc.std_error}});
             return t.done();
         }},
    };
    return all;
}

}  // namespace

nlohmann::json SuiteCheck::to_json() const {
    auto j = report.to_json();
    j["bound"] = bound;
    j["passed"] = passed;
    return j;
}

std::size_t SuiteResult::samples_with_prefix(const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& c : checks) {
        if (c.report.property.rfind(prefix, 0) == 0) n += c.report.samples;
    }
    return n;
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) list.push_back(c.to_json());
    return {{"passed", passed}, {"first_failure", first_failure}, {"not_run", not_run}, {"checks", list}};
}

std::vector<std::string> property_names() {
    std::vector<std::string> names;
    for (const auto& c : checks()) names.emplace_back(c.name);
    return names;
}

SuiteResult run_property_suite(std::uint64_t seed, const std::string& filter) {
    SuiteResult result;
    for (const auto& c : checks()) {
        const std::string name = c.name;
        if (!filter.empty() && name.find(filter) == std::string::npos) continue;
        if (!result.passed) {
            ++result.not_run;
            continue;
        }
        Rng rng = substream(seed, "property-suite/" + name);
        SuiteCheck check{c.run(name, rng), c.bound, false};
        check.passed = check.report.max_residual <= c.bound;
        if (!check.passed) {
            result.passed = false;
            result.first_failure = name;
        }
        result.checks.push_back(std::move(check));
    }
    return result;
}

}  // namespace pml
