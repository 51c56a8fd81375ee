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

#include <vector>

#include "pml/grid.hpp"

namespace pml {

/// Two times closer than this are treated as the same instant.
inline constexpr double kTimeTolerance = 1e-12;

/// Cylinder event {xi : xi(t_j) in B_j, j = 1..m} in canonical form:
/// strictly increasing times, one base per time. The empty event carries
/// no times.
///
/// Full-grid constraints are kept as given. They are not dropped because a
/// pseudomeasure need not be consistent under marginalization (a unitary
/// one is not).
class CylinderSet {
public:
    static CylinderSet empty(const Grid& grid);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<BaseSet>& bases() const { return bases_; }
    std::size_t arity() const { return times_.size(); }
    bool is_empty() const { return times_.empty(); }

    /// Same event with a full-grid constraint inserted at every time of
    /// `times` missing from this set. `times` must be canonical.
    CylinderSet refine(const std::vector<double>& times) const;

    /// Same times and base masks, times compared with kTimeTolerance.
    bool same_as(const CylinderSet& other) const;

    bool operator==(const CylinderSet& other) const = default;

private:
    friend CylinderSet make_cylinder(std::vector<double> times, std::vector<BaseSet> bases);

    Grid grid_;
    std::vector<double> times_;
    std::vector<BaseSet> bases_;
};

/// Canonicalizes: sorts by time, merges coincident times by intersecting
/// their bases, and collapses to the empty set if any base is empty.
/// Throws InvalidArgument on length mismatch, no times, or a negative time.
CylinderSet make_cylinder(std::vector<double> times, std::vector<BaseSet> bases);

CylinderSet intersect(const CylinderSet& a, const CylinderSet& b);

bool disjoint(const CylinderSet& a, const CylinderSet& b);

/// Sorted union of the time lists (coincident times merged).
std::vector<double> common_times(const std::vector<CylinderSet>& sets);

/// Finite disjoint union of cylinders; with `complemented` set it denotes
/// the complement of that union in path space.
struct RingElement {
    std::vector<CylinderSet> parts;
    bool complemented = false;

    static RingElement of(const CylinderSet& a) {
        if (a.is_empty()) return {};
        return {{a}, false};
    }
    /// The whole path space.
    static RingElement omega() { return {{}, true}; }
};

/// Disjoint decomposition of the complement of `a` on a's own time list:
/// one part per nonempty set of coordinates whose base is replaced by its
/// complement (parts that come out empty are omitted).
RingElement complement(const CylinderSet& a);

/// Pairwise-disjoint cylinders, refined to the common time list of the
/// inputs, with the same union as `sets`.
RingElement disjointify(const std::vector<CylinderSet>& sets);

/// True when the parts are pairwise disjoint.
bool is_disjoint_family(const std::vector<CylinderSet>& parts);

}  // namespace pml
