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

#include "pml/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pml {

CylinderSet CylinderSet::empty(const Grid& grid) {
    CylinderSet c;
    c.grid_ = grid;
    return c;
}

CylinderSet make_cylinder(std::vector<double> times, std::vector<BaseSet> bases) {
    if (times.size() != bases.size()) throw InvalidArgument("cylinder needs one base per time");
    if (times.empty()) throw InvalidArgument("cylinder needs at least one time");
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("cylinder times must be finite and nonnegative");
    }
    const Grid grid = bases.front().grid();
    for (const auto& b : bases) {
        if (!(b.grid() == grid)) throw GridMismatch();
    }

    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return times[i] < times[j]; });

    CylinderSet c;
    c.grid_ = grid;
    for (auto i : order) {
        if (!c.times_.empty() && times[i] - c.times_.back() <= kTimeTolerance) {
            c.bases_.back() = c.bases_.back() & bases[i];
        } else {
            c.times_.push_back(times[i]);
            c.bases_.push_back(bases[i]);
        }
    }
    for (const auto& b : c.bases_) {
        if (b.is_empty()) return CylinderSet::empty(grid);
    }
    return c;
}

CylinderSet CylinderSet::refine(const std::vector<double>& times) const {
    if (is_empty()) return *this;
    std::vector<double> all = times_;
    std::vector<BaseSet> bases = bases_;
    for (double t : times) {
        const bool present = std::any_of(times_.begin(), times_.end(),
                                         [t](double s) { return std::abs(s - t) <= kTimeTolerance; });
        if (!present) {
            all.push_back(t);
            bases.push_back(BaseSet::full(grid_));
        }
    }
    return make_cylinder(std::move(all), std::move(bases));
}

bool CylinderSet::same_as(const CylinderSet& other) const {
    if (!(grid_ == other.grid_) || arity() != other.arity()) return false;
    for (std::size_t j = 0; j < arity(); ++j) {
        if (std::abs(times_[j] - other.times_[j]) > kTimeTolerance) return false;
        if (!(bases_[j] == other.bases_[j])) return false;
    }
    return true;
}

CylinderSet intersect(const CylinderSet& a, const CylinderSet& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    if (a.is_empty() || b.is_empty()) return CylinderSet::empty(a.grid());
    std::vector<double> times = a.times();
    std::vector<BaseSet> bases = a.bases();
    times.insert(times.end(), b.times().begin(), b.times().end());
    bases.insert(bases.end(), b.bases().begin(), b.bases().end());
    return make_cylinder(std::move(times), std::move(bases));
}

bool disjoint(const CylinderSet& a, const CylinderSet& b) { return intersect(a, b).is_empty(); }

std::vector<double> common_times(const std::vector<CylinderSet>& sets) {
    std::vector<double> all;
    for (const auto& s : sets) all.insert(all.end(), s.times().begin(), s.times().end());
    std::sort(all.begin(), all.end());
    std::vector<double> merged;
    for (double t : all) {
        if (merged.empty() || t - merged.back() > kTimeTolerance) merged.push_back(t);
    }
    return merged;
}

RingElement complement(const CylinderSet& a) {
    if (a.is_empty()) return RingElement::omega();
    const std::size_t m = a.arity();
    RingElement out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        std::vector<BaseSet> bases = a.bases();
        for (std::size_t j = 0; j < m; ++j) {
            if (mask & (std::size_t{1} << j)) bases[j] = bases[j].complement();
        }
        auto part = make_cylinder(a.times(), std::move(bases));
        if (!part.is_empty()) out.parts.push_back(std::move(part));
    }
    return out;
}

namespace {

// p \ q for cylinders on the same time list, as disjoint pieces: the j-th
// piece agrees with q on coordinates before j and escapes q at coordinate j.
std::vector<CylinderSet> subtract(const CylinderSet& p, const CylinderSet& q) {
    if (p.is_empty()) return {};
    if (q.is_empty() || disjoint(p, q)) return {p};
    std::vector<CylinderSet> pieces;
    std::vector<BaseSet> prefix;
    for (std::size_t j = 0; j < p.arity(); ++j) {
        std::vector<BaseSet> bases = prefix;
        bases.push_back(p.bases()[j] - q.bases()[j]);
        for (std::size_t k = j + 1; k < p.arity(); ++k) bases.push_back(p.bases()[k]);
        auto piece = make_cylinder(p.times(), std::move(bases));
        if (!piece.is_empty()) pieces.push_back(std::move(piece));
        prefix.push_back(p.bases()[j] & q.bases()[j]);
    }
    return pieces;
}

}  // namespace

RingElement disjointify(const std::vector<CylinderSet>& sets) {
    std::vector<CylinderSet> live;
    for (const auto& s : sets) {
        if (!s.is_empty()) live.push_back(s);
    }
    if (live.empty()) return {};
    for (std::size_t i = 1; i < live.size(); ++i) {
        if (!(live[i].grid() == live[0].grid())) throw GridMismatch();
    }
    const auto times = common_times(live);

    RingElement out;
    for (const auto& s : live) {
        std::vector<CylinderSet> remainder{s.refine(times)};
        for (const auto& taken : out.parts) {
            std::vector<CylinderSet> next;
            for (const auto& r : remainder) {
                auto pieces = subtract(r, taken);
                next.insert(next.end(), pieces.begin(), pieces.end());
            }
            remainder = std::move(next);
            if (remainder.empty()) break;
        }
        out.parts.insert(out.parts.end(), remainder.begin(), remainder.end());
    }
    return out;
}

bool is_disjoint_family(const std::vector<CylinderSet>& parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            if (!disjoint(parts[i], parts[j])) return false;
        }
    }
    return true;
}

}  // namespace pml
