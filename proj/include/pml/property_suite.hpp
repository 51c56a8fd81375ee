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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pml/pseudomeasure.hpp"

namespace pml {

struct SuiteCheck {
    PropertyReport report;
    double bound = 0.0;
    bool passed = false;

    nlohmann::json to_json() const;
};

struct SuiteResult {
    std::vector<SuiteCheck> checks;
    bool passed = true;
    /// Name of the first violated property, empty when everything passed.
    std::string first_failure;
    /// Checks that were selected but not run because an earlier one failed.
    std::size_t not_run = 0;

    /// Total samples over checks whose name starts with `prefix`.
    std::size_t samples_with_prefix(const std::string& prefix) const;
    nlohmann::json to_json() const;
};

/// Names of all properties in execution order, as "module/property".
std::vector<std::string> property_names();

/// Runs every property whose name contains `filter` (all when empty), in
/// order, stopping at the first violated bound. Each property draws from
/// its own substream of `seed`.
SuiteResult run_property_suite(std::uint64_t seed, const std::string& filter = "");

}  // namespace pml
