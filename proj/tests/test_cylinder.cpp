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

#include <algorithm>
#include <cmath>
#include <random>

#include "pml/cylinder.hpp"
#include "test_support.hpp"

using namespace pml;

namespace {

// A discrete path assigns a cell to every time of a fixed time list.
struct Raw {
    std::vector<double> times;
    std::vector<BaseSet> bases;
};

bool raw_contains(const Raw& r, const std::vector<double>& path_times, const std::vector<std::size_t>& path) {
    for (std::size_t j = 0; j < r.times.size(); ++j) {
        const auto it = std::find_if(path_times.begin(), path_times.end(),
                                     [&](double t) { return std::abs(t - r.times[j]) < 1e-12; });
        REQUIRE(it != path_times.end());
        if (!r.bases[j].contains(path[static_cast<std::size_t>(it - path_times.begin())])) return false;
    }
    return true;
}

bool contains(const CylinderSet& c, const std::vector<double>& path_times, const std::vector<std::size_t>& path) {
    if (c.is_empty()) return false;
    return raw_contains({c.times(), c.bases()}, path_times, path);
}

bool contains(const RingElement& r, const std::vector<double>& path_times, const std::vector<std::size_t>& path) {
    bool in = false;
    for (const auto& p : r.parts) in = in || contains(p, path_times, path);
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

Raw random_raw(const Grid& g, std::mt19937_64& rng, const std::vector<double>& pool) {
    std::uniform_int_distribution<std::size_t> len(1, 3), pick(0, pool.size() - 1);
    Raw r;
    const std::size_t m = len(rng);
    for (std::size_t j = 0; j < m; ++j) {
        r.times.push_back(pool[pick(rng)]);
        r.bases.push_back(test::random_base(g, rng, 0.6));
    }
    return r;
}

// Complement of a finite union, as the disjointified intersection of the part complements.
RingElement complement_of_union(const std::vector<CylinderSet>& parts) {
    std::vector<CylinderSet> acc = complement(parts.front()).parts;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::vector<CylinderSet> next;
        for (const auto& x : acc) {
            for (const auto& y : complement(parts[k]).parts) {
                const auto z = intersect(x, y);
                if (!z.is_empty()) next.push_back(z);
            }
        }
        acc = next;
    }
    return disjointify(acc);
}

}  // namespace

TEST_CASE("make_cylinder canonical form") {
    const auto g = make_grid(1, 4, 1.0);
    const BaseSet b(g, {0, 1}), c(g, {1, 2});

    const auto sorted = make_cylinder({1.0, 0.5}, {b, c});
    CHECK(sorted.times() == std::vector<double>{0.5, 1.0});
    CHECK(sorted.bases()[0] == c);
    CHECK(sorted.bases()[1] == b);

    const auto merged = make_cylinder({0.5, 0.5}, {b, c});
    CHECK(merged.times() == std::vector<double>{0.5});
    CHECK(merged.bases()[0] == (b & c));

    CHECK(make_cylinder({0.5}, {BaseSet::empty(g)}).is_empty());
    CHECK(make_cylinder({0.5, 0.5}, {BaseSet(g, {0}), BaseSet(g, {3})}).is_empty());

    // Full-grid constraints are kept.
    CHECK(make_cylinder({0.0, 1.0}, {b, BaseSet::full(g)}).arity() == 2);
}

TEST_CASE("make_cylinder errors") {
    const auto g = make_grid(1, 4, 1.0);
    CHECK_THROWS_AS(make_cylinder({0.0, 1.0}, {BaseSet::full(g)}), InvalidArgument);
    CHECK_THROWS_AS(make_cylinder({-0.5}, {BaseSet::full(g)}), InvalidArgument);
    CHECK_THROWS_AS(make_cylinder({}, {}), InvalidArgument);
    CHECK_THROWS_AS(make_cylinder({0.0, 1.0}, {BaseSet::full(g), BaseSet::full(make_grid(1, 5, 1.0))}),
                    GridMismatch);
}

TEST_CASE("intersect") {
    const auto g = make_grid(1, 4, 1.0);
    const BaseSet b1(g, {0, 1}), b2(g, {1, 2});
    const auto same_time = intersect(make_cylinder({1.0}, {b1}), make_cylinder({1.0}, {b2}));
    CHECK(same_time.same_as(make_cylinder({1.0}, {b1 & b2})));

    const auto two_times = intersect(make_cylinder({1.0}, {b1}), make_cylinder({2.0}, {b2}));
    CHECK(two_times.same_as(make_cylinder({1.0, 2.0}, {b1, b2})));

    CHECK(intersect(make_cylinder({1.0}, {b1}), CylinderSet::empty(g)).is_empty());
}

TEST_CASE("complement examples") {
    const auto g = make_grid(1, 4, 1.0);
    const BaseSet b1(g, {0, 1}), b2(g, {1, 2});

    const auto one = complement(make_cylinder({1.0}, {b1}));
    REQUIRE(one.parts.size() == 1);
    CHECK(one.parts[0].same_as(make_cylinder({1.0}, {b1.complement()})));
    CHECK_FALSE(one.complemented);

    const auto two = complement(make_cylinder({1.0, 2.0}, {b1, b2}));
    REQUIRE(two.parts.size() == 3);
    auto has = [&](const BaseSet& x, const BaseSet& y) {
        const auto want = make_cylinder({1.0, 2.0}, {x, y});
        return std::any_of(two.parts.begin(), two.parts.end(), [&](const auto& p) { return p.same_as(want); });
    };
    CHECK(has(b1.complement(), b2));
    CHECK(has(b1, b2.complement()));
    CHECK(has(b1.complement(), b2.complement()));
    CHECK(is_disjoint_family(two.parts));

    const auto omega = complement(CylinderSet::empty(g));
    CHECK(omega.complemented);
    CHECK(omega.parts.empty());
}

TEST_CASE("disjointify examples") {
    const auto g = make_grid(1, 4, 1.0);
    const auto a = make_cylinder({1.0}, {BaseSet(g, {0, 1})});
    const auto same = disjointify({a, a});
    REQUIRE(same.parts.size() == 1);
    CHECK(same.parts[0].same_as(a));

    const BaseSet b(g, {0, 1}), c_disjoint(g, {2, 3}), c_overlap(g, {1, 2});
    const auto kept = disjointify({make_cylinder({1.0}, {b}), make_cylinder({1.0}, {c_disjoint})});
    REQUIRE(kept.parts.size() == 2);
    CHECK(kept.parts[0].same_as(make_cylinder({1.0}, {b})));
    CHECK(kept.parts[1].same_as(make_cylinder({1.0}, {c_disjoint})));

    const auto split = disjointify({make_cylinder({1.0}, {b}), make_cylinder({1.0}, {c_overlap})});
    REQUIRE(split.parts.size() == 2);
    CHECK(split.parts[0].same_as(make_cylinder({1.0}, {b})));
    CHECK(split.parts[1].same_as(make_cylinder({1.0}, {c_overlap - b})));
}

TEST_CASE("exhaustive path oracle on tiny grids") {
    const std::vector<double> pool{0.0, 0.5, 1.0};
    for (int cells : {2, 3}) {
        const auto g = make_grid(1, cells, 1.0);
        const auto n = static_cast<std::size_t>(cells);
        std::mt19937_64 rng(static_cast<std::uint64_t>(cells) * 977);
        for (int trial = 0; trial < 60; ++trial) {
            const Raw ra = random_raw(g, rng, pool), rb = random_raw(g, rng, pool), rc = random_raw(g, rng, pool);
            const auto a = make_cylinder(ra.times, ra.bases);
            const auto b = make_cylinder(rb.times, rb.bases);
            const auto c = make_cylinder(rc.times, rc.bases);
            const auto a_and_b = intersect(a, b);
            const auto not_a = complement(a);
            const auto union_abc = disjointify({a, b, c});
            const bool has_double = !a.is_empty() && !not_a.parts.empty();
            const auto not_not_a = has_double ? complement_of_union(not_a.parts) : RingElement{};
            CHECK(is_disjoint_family(not_a.parts));
            CHECK(is_disjoint_family(union_abc.parts));

            std::size_t in_a = 0, in_not_a = 0, total = 0, union_count = 0, union_oracle = 0;
            for_each_path(n, pool.size(), [&](const std::vector<std::size_t>& path) {
                ++total;
                const bool ma = raw_contains(ra, pool, path), mb = raw_contains(rb, pool, path),
                           mc = raw_contains(rc, pool, path);
                CHECK(contains(a, pool, path) == ma);
                CHECK(contains(a_and_b, pool, path) == (ma && mb));
                CHECK(contains(not_a, pool, path) == !ma);
                CHECK(contains(union_abc, pool, path) == (ma || mb || mc));
                if (has_double) CHECK(contains(not_not_a, pool, path) == ma);
                in_a += ma;
                if (not_a.complemented) in_not_a += contains(not_a, pool, path);
                for (const auto& p : not_a.parts) in_not_a += contains(p, pool, path);
                for (const auto& p : union_abc.parts) union_count += contains(p, pool, path);
                union_oracle += (ma || mb || mc);
            });
            CHECK(in_a + in_not_a == total);
            CHECK(union_count == union_oracle);
        }
    }
}

TEST_CASE("canonicalization is idempotent") {
    const auto g = make_grid(1, 3, 1.0);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 30; ++k) {
        const Raw r = random_raw(g, rng, {0.0, 0.25, 0.25, 2.0});
        const auto once = make_cylinder(r.times, r.bases);
        if (once.is_empty()) continue;
        CHECK(make_cylinder(once.times(), once.bases()) == once);
    }
}
