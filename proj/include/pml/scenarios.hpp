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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pml/averaging.hpp"
#include "pml/semigroup.hpp"

namespace pml {

/// Rejected run configuration. Each problem reads "json/path: message".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct GridConfig {
    int dim = 1;
    int cells_per_axis = 64;
    double extent = 1.0;
};

struct FamilyConfig {
    std::string family;
    std::vector<double> params;
    Mode mode = Mode::unitary;
    std::vector<double> parameters;
};

/// One base set: the whole grid, a half-open interval [lo, hi) along the
/// first axis (wrapping periodically when hi > extent), or explicit cells.
struct BaseConfig {
    std::string kind = "full";  // full | interval | cells
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> cells;
};

struct CylinderConfig {
    std::vector<double> times;
    std::vector<BaseConfig> bases;
};

struct Budgets {
    std::optional<std::size_t> n_paths;
    std::optional<int> time_samples;
    std::optional<std::size_t> trials;
    std::optional<int> bins;
    std::optional<std::size_t> sequence_length;
};

struct RunConfig {
    int schema_version = 1;
    std::string scenario;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::optional<GridConfig> grid;
    std::optional<FamilyConfig> family;
    std::optional<ParamMeasureSpec> measure;
    std::vector<CylinderConfig> cylinders;
    std::optional<double> T;
    Budgets budgets;
    std::string filter;
};

/// Validates `doc` (unknown keys and keys the chosen scenario ignores are
/// errors) and converts it. Throws ConfigError listing every problem found.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Reads and parses a config file; unreadable or malformed JSON is a ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

struct Artifact {
    std::string name;
    std::string content;
};

struct ScenarioOutcome {
    bool passed = false;
    nlohmann::json summary;
    std::vector<Artifact> artifacts;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    std::vector<std::string> config_keys;
};

/// Built-in scenarios in listing order.
const std::vector<ScenarioInfo>& scenario_catalog();

/// Runs a parsed configuration. Nothing touches the filesystem.
ScenarioOutcome run_scenario(const RunConfig& config);

/// Writes every artifact into `dir` (created if needed). On a write error the
/// files written so far are removed and the error is rethrown.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

}  // namespace pml
