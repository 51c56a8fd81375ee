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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "pml/error.hpp"
#include "pml/property_suite.hpp"
#include "pml/scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPropertyFailure = 2;

int run_command(const std::string& config_path) {
    pml::RunConfig config;
    try {
        config = pml::load_run_config(config_path);
    } catch (const pml::ConfigError& e) {
        std::cerr << "config error in " << config_path << ":\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
        return kConfigError;
    }

    pml::ScenarioOutcome outcome;
    try {
        outcome = pml::run_scenario(config);
    } catch (const pml::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "scenario '" << config.scenario << "' aborted: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        pml::write_artifacts(config.output_dir, outcome.artifacts);
    } catch (const std::exception& e) {
        std::cerr << "cannot write outputs: " << e.what() << '\n';
        return kConfigError;
    }
    for (const auto& a : outcome.artifacts) std::cout << "wrote " << (std::filesystem::path(config.output_dir) / a.name).string() << '\n';
    std::cout << config.scenario << ": " << (outcome.passed ? "PASS" : "FAIL") << '\n';
    return outcome.passed ? kOk : kPropertyFailure;
}

int list_command(bool as_json) {
    const auto& catalog = pml::scenario_catalog();
    if (as_json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& s : catalog) out.push_back({{"name", s.name}, {"description", s.description}, {"config_keys", s.config_keys}});
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& s : catalog) std::cout << s.name << "  " << s.description << '\n';
    }
    return kOk;
}

int suite_command(const std::string& filter, std::uint64_t seed) {
    const auto result = pml::run_property_suite(seed, filter);
    for (const auto& c : result.checks) {
        std::printf("%-4s %-42s residual=%.3e bound=%.1e samples=%zu\n", c.passed ? "ok" : "FAIL", c.report.property.c_str(),
                    c.report.max_residual, c.bound, c.report.samples);
    }
    if (result.checks.empty()) {
        std::cerr << "no property matches '" << filter << "'\n";
        return kConfigError;
    }
    if (!result.passed) {
        std::printf("first failure: %s (%zu checks not run)\n", result.first_failure.c_str(), result.not_run);
        return kPropertyFailure;
    }
    std::printf("%zu properties passed\n", result.checks.size());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudomeasure experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run a scenario described by a JSON config");
    run->add_option("config", config_path, "path to the run configuration")->required();

    bool as_json = false;
    auto* list = app.add_subcommand("list", "list the built-in scenarios");
    list->add_flag("--json", as_json, "machine-readable listing");

    std::string filter;
    std::uint64_t seed = 0;
    auto* suite = app.add_subcommand("suite", "run the property suite");
    suite->add_option("--filter", filter, "only properties whose name contains this text");
    suite->add_option("--seed", seed, "root seed for the property substreams");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kConfigError;
    }

    if (*run) return run_command(config_path);
    if (*list) return list_command(as_json);
    return suite_command(filter, seed);
}
