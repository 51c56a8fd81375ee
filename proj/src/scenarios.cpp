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

#include "pml/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pml/functionals.hpp"
#include "pml/property_suite.hpp"
#include "pml/random.hpp"
#include "pml/wiener.hpp"

namespace pml {

namespace {

using nlohmann::json;
using std::numbers::pi;

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
    return out;
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<std::string> kCommonKeys{"schema_version", "scenario", "seed", "output_dir"};

const std::map<std::string, std::vector<std::string>> kBudgetKeys{
    {"remark7", {"time_samples"}},
    {"wiener-validate", {"n_paths", "trials"}},
    {"theorem3-strong", {"time_samples"}},
    {"theorem4-weak", {"time_samples"}},
    {"theorem1-limits", {"sequence_length"}},
    {"young-oscillation", {"bins"}},
    {"property-suite", {}},
};

const std::map<std::string, std::string> kScenarioFamily{
    {"theorem3-strong", "regularized_potential"},
    {"theorem4-weak", "oscillating_multiplier"},
    {"young-oscillation", "oscillating_multiplier"},
};

// ---------------------------------------------------------------------------
// Config validation

class Reader {
public:
    std::vector<std::string> problems;

    void fail(const std::string& path, const std::string& message) { problems.push_back(path + ": " + message); }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        fail(path, "expected an object");
        return false;
    }

    void keys(const json& j, const std::string& path, const std::vector<std::string>& allowed,
              const std::vector<std::string>& known = {}, const std::string& scenario = "") {
        for (const auto& [key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
            if (std::find(known.begin(), known.end(), key) != known.end()) {
                fail(path + "/" + key, "not used by scenario '" + scenario + "'");
            } else {
                fail(path + "/" + key, "unknown key");
            }
        }
    }

    std::optional<double> number(const json& j, const std::string& path, double lo, double hi, bool open_lo = false) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        const double x = j.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
            std::ostringstream os;
            os << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
            fail(path, os.str());
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::uint64_t> integer(const json& j, const std::string& path, std::uint64_t lo, std::uint64_t hi) {
        if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
            fail(path, "expected a non-negative integer");
            return std::nullopt;
        }
        const auto x = j.get<std::uint64_t>();
        if (x < lo || x > hi) {
            fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::string> string(const json& j, const std::string& path) {
        if (j.is_string()) return j.get<std::string>();
        fail(path, "expected a string");
        return std::nullopt;
    }

    std::vector<double> numbers(const json& j, const std::string& path, double lo, double hi, bool open_lo, std::size_t min_size) {
        std::vector<double> out;
        if (!j.is_array()) {
            fail(path, "expected an array of numbers");
            return out;
        }
        if (j.size() < min_size) fail(path, "needs at least " + std::to_string(min_size) + " entries");
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (auto x = number(j[k], path + "/" + std::to_string(k), lo, hi, open_lo)) out.push_back(*x);
        }
        return out;
    }
};

GridConfig parse_grid(Reader& r, const json& j) {
    GridConfig g;
    if (!r.object(j, "/grid")) return g;
    r.keys(j, "/grid", {"dim", "cells_per_axis", "extent"});
    if (j.contains("dim")) {
        if (auto x = r.integer(j["dim"], "/grid/dim", 1, 2)) g.dim = static_cast<int>(*x);
    }
    if (j.contains("cells_per_axis")) {
        if (auto x = r.integer(j["cells_per_axis"], "/grid/cells_per_axis", 2, 1024)) g.cells_per_axis = static_cast<int>(*x);
    }
    if (j.contains("extent")) {
        if (auto x = r.number(j["extent"], "/grid/extent", 0.0, 1e6, true)) g.extent = *x;
    }
    double cells = 1.0;
    for (int k = 0; k < g.dim; ++k) cells *= g.cells_per_axis;
    if (cells > 4096) r.fail("/grid", "at most 4096 cells in total");
    return g;
}

FamilyConfig parse_family(Reader& r, const json& j, const std::string& expected) {
    FamilyConfig f;
    f.family = expected;
    if (!r.object(j, "/family")) return f;
    r.keys(j, "/family", {"family", "params", "mode", "parameters"});
    if (j.contains("family")) {
        if (auto name = r.string(j["family"], "/family/family"); name && *name != expected) {
            r.fail("/family/family", "this scenario runs the '" + expected + "' family");
        }
    }
    if (j.contains("params")) f.params = r.numbers(j["params"], "/family/params", -1e6, 1e6, false, 1);
    if (j.contains("mode")) {
        if (auto m = r.string(j["mode"], "/family/mode")) {
            if (*m == "unitary" || *m == "heat") {
                f.mode = mode_from_string(*m);
            } else {
                r.fail("/family/mode", "expected 'unitary' or 'heat'");
            }
        }
    }
    if (j.contains("parameters")) f.parameters = r.numbers(j["parameters"], "/family/parameters", 0.0, 1e6, true, 2);
    if (f.params.size() > 1) r.fail("/family/params", "takes exactly one constant");
    return f;
}

ParamMeasureSpec parse_measure(Reader& r, const json& j) {
    ParamMeasureSpec m;
    if (!r.object(j, "/measure")) return m;
    r.keys(j, "/measure", {"kind", "weights", "index", "window", "modulus", "residue"});
    if (j.contains("kind")) {
        if (auto k = r.string(j["kind"], "/measure/kind")) {
            static const std::set<std::string> kinds{"uniform", "weights", "dirac", "cesaro", "tail_selector"};
            if (kinds.count(*k)) {
                m.kind = *k;
            } else {
                r.fail("/measure/kind", "expected one of uniform, weights, dirac, cesaro, tail_selector");
            }
        }
    }
    if (j.contains("weights")) m.weights = r.numbers(j["weights"], "/measure/weights", 0.0, 1.0, false, 1);
    auto read = [&](const char* key, std::size_t& slot, std::uint64_t lo) {
        if (j.contains(key)) {
            if (auto x = r.integer(j[key], std::string("/measure/") + key, lo, 1u << 20)) slot = static_cast<std::size_t>(*x);
        }
    };
    read("index", m.index, 0);
    read("window", m.window, 1);
    read("modulus", m.modulus, 1);
    read("residue", m.residue, 0);
    return m;
}

BaseConfig parse_base(Reader& r, const json& j, const std::string& path) {
    BaseConfig b;
    if (j.is_string() && j.get<std::string>() == "full") return b;
    if (!j.is_object() || j.size() != 1) {
        r.fail(path, "expected \"full\", {\"interval\": [lo, hi]} or {\"cells\": [...]}");
        return b;
    }
    if (j.contains("interval")) {
        b.kind = "interval";
        const auto v = r.numbers(j["interval"], path + "/interval", -1e6, 1e6, false, 2);
        if (j["interval"].size() != 2) {
            r.fail(path + "/interval", "expected [lo, hi]");
        } else if (v.size() == 2) {
            b.lo = v[0];
            b.hi = v[1];
            if (!(b.lo < b.hi)) r.fail(path + "/interval", "needs lo < hi");
        }
    } else if (j.contains("cells")) {
        b.kind = "cells";
        if (!j["cells"].is_array()) {
            r.fail(path + "/cells", "expected an array of cell indices");
        } else {
            for (std::size_t k = 0; k < j["cells"].size(); ++k) {
                if (auto c = r.integer(j["cells"][k], path + "/cells/" + std::to_string(k), 0, 1u << 20)) {
                    b.cells.push_back(static_cast<std::size_t>(*c));
                }
            }
        }
    } else {
        r.fail(path, "expected \"full\", {\"interval\": [lo, hi]} or {\"cells\": [...]}");
    }
    return b;
}

std::vector<CylinderConfig> parse_cylinders(Reader& r, const json& j) {
    std::vector<CylinderConfig> out;
    if (!j.is_array() || j.empty()) {
        r.fail("/cylinders", "expected a non-empty array");
        return out;
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string path = "/cylinders/" + std::to_string(k);
        if (!r.object(j[k], path)) continue;
        r.keys(j[k], path, {"times", "bases"});
        CylinderConfig c;
        if (!j[k].contains("times") || !j[k].contains("bases")) {
            r.fail(path, "needs 'times' and 'bases'");
            continue;
        }
        c.times = r.numbers(j[k]["times"], path + "/times", 0.0, 1e6, false, 2);
        for (std::size_t i = 1; i < c.times.size(); ++i) {
            if (!(c.times[i] > c.times[i - 1])) r.fail(path + "/times", "must be strictly increasing");
        }
        if (!j[k]["bases"].is_array() || j[k]["bases"].size() != j[k]["times"].size()) {
            r.fail(path + "/bases", "needs one base per time");
            continue;
        }
        for (std::size_t i = 0; i < j[k]["bases"].size(); ++i) {
            c.bases.push_back(parse_base(r, j[k]["bases"][i], path + "/bases/" + std::to_string(i)));
        }
        out.push_back(std::move(c));
    }
    return out;
}

void resolve_defaults(RunConfig& c, Reader& r) {
    const std::string& s = c.scenario;
    auto set_grid = [&](int cells) {
        if (!c.grid) c.grid = GridConfig{1, cells, 1.0};
    };
    auto set_family = [&](std::vector<double> params, std::vector<double> parameters) {
        if (!c.family) c.family = FamilyConfig{kScenarioFamily.at(s), {}, Mode::unitary, {}};
        if (c.family->params.empty()) c.family->params = std::move(params);
        if (c.family->parameters.empty()) c.family->parameters = std::move(parameters);
    };
    auto& b = c.budgets;
    if (s == "remark7") {
        if (!c.T) c.T = 2.0 * pi;
        if (!b.time_samples) b.time_samples = 65;
    } else if (s == "wiener-validate") {
        set_grid(64);
        if (!b.n_paths) b.n_paths = 100000;
        if (!b.trials) b.trials = 10;
    } else if (s == "theorem3-strong") {
        set_grid(128);
        set_family({50.0}, {0.2, 0.1, 0.05, 0.025});
        if (!c.T) c.T = 1.0;
        if (!b.time_samples) b.time_samples = 64;
    } else if (s == "theorem4-weak") {
        set_grid(512);
        set_family({1.0}, {4.0, 8.0, 16.0, 32.0});
        if (!c.T) c.T = 2.0;
        if (!b.time_samples) b.time_samples = 17;
    } else if (s == "theorem1-limits") {
        if (!b.sequence_length) b.sequence_length = 64;
    } else if (s == "young-oscillation") {
        set_grid(64);
        std::vector<double> ns;
        for (int n = 1; n <= 256; ++n) ns.push_back(n);
        set_family({1.0}, ns);
        if (!c.measure) c.measure = ParamMeasureSpec{};
        if (!b.bins) b.bins = 64;
    }

    if (c.grid && s != "wiener-validate" && c.grid->dim != 1) r.fail("/grid/dim", "this scenario needs a one-dimensional grid");
    if (c.family && c.family->mode != Mode::unitary) r.fail("/family/mode", "this scenario needs the unitary mode");
    if (c.measure && c.family) {
        try {
            (void)make_param_measure(c.family->parameters, *c.measure);
        } catch (const InvalidArgument& e) {
            r.fail("/measure", e.what());
        }
    }
    if (c.grid) {
        for (std::size_t k = 0; k < c.cylinders.size(); ++k) {
            for (std::size_t i = 0; i < c.cylinders[k].bases.size(); ++i) {
                for (auto cell : c.cylinders[k].bases[i].cells) {
                    double cells = 1.0;
                    for (int d = 0; d < c.grid->dim; ++d) cells *= c.grid->cells_per_axis;
                    if (static_cast<double>(cell) >= cells) {
                        r.fail("/cylinders/" + std::to_string(k) + "/bases/" + std::to_string(i) + "/cells",
                               "cell " + std::to_string(cell) + " is outside the grid");
                    }
                }
            }
        }
    }
    if (s == "theorem4-weak" && c.T && *c.T < 2.0) r.fail("/T", "must be at least 2 to reach the weak times 0.5, 1 and 2");
}

// ---------------------------------------------------------------------------
// Helpers shared by the scenarios

std::string csv_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { os_ << join(header, ",") << '\n'; }

    template <class... T>
    void row(const T&... cells) {
        std::vector<std::string> out;
        (out.push_back(cell(cells)), ...);
        os_ << join(out, ",") << '\n';
    }

    std::string str() const { return os_.str(); }

private:
    static std::string cell(double x) { return csv_number(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(const std::string& x) { return x; }
    static std::string cell(const char* x) { return x; }

    std::ostringstream os_;
};

Grid build_grid(const GridConfig& g) { return make_grid(g.dim, g.cells_per_axis, g.extent); }

BaseSet build_base(const Grid& g, const BaseConfig& b) {
    if (b.kind == "full") return BaseSet::full(g);
    if (b.kind == "cells") return BaseSet(g, b.cells);
    // Periodic interval along the first axis.
    const double L = g.extent();
    const double lo = b.lo - L * std::floor(b.lo / L);
    const double hi = lo + (b.hi - b.lo);
    if (hi - lo >= L) return BaseSet::full(g);
    if (hi <= L) return BaseSet::interval(g, lo, hi);
    return BaseSet::interval(g, lo, L) | BaseSet::interval(g, 0.0, hi - L);
}

StateVector bump(const Grid& g, double center, double width) {
    Vector v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t c = 0; c < g.size(); ++c) {
        const double d = g.center(c) - center;
        v[static_cast<Eigen::Index>(c)] = std::exp(-d * d / (2.0 * width * width));
    }
    return StateVector(g, v);
}

Artifact json_artifact(const std::string& name, const json& j) { return {name, j.dump(2) + "\n"}; }

json base_summary(const RunConfig& c) { return {{"scenario", c.scenario}, {"seed", c.seed}}; }

// ---------------------------------------------------------------------------
// Scenarios

ScenarioOutcome run_remark7(const RunConfig& c) {
    const auto xi = make_family(make_scalar_grid(), {"scalar_pair", {}, Mode::unitary}, {1.0, -1.0});
    std::vector<double> times = time_grid(*c.T, *c.budgets.time_samples);
    for (double t : {pi / 4, pi / 2, 3 * pi / 4, pi}) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }), times.end());

    const auto me = mean_evolution(xi, ParamMeasure::uniform(xi.parameters()), times);
    Csv evolution({"t", "re", "im", "cos_t", "abs_error"});
    double max_error = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Complex m = me.matrices[k](0, 0);
        const double err = std::abs(m - std::cos(times[k]));
        max_error = std::max(max_error, err);
        evolution.row(times[k], m.real(), m.imag(), std::cos(times[k]), err);
    }

    Csv defects({"t", "s", "defect", "sin_t_sin_s", "abs_error"});
    double defect_error = 0.0, defect_half_pi = 0.0;
    const std::vector<std::pair<double, double>> pairs{{0.0, pi}, {pi / 4, pi / 4}, {pi / 4, pi / 2}, {pi / 4, 3 * pi / 4}, {pi / 2, pi / 2}};
    for (const auto& [t, s] : pairs) {
        const double d = memory_defect(me, t, s);
        const double expected = std::abs(std::sin(t) * std::sin(s));
        defect_error = std::max(defect_error, std::abs(d - expected));
        if (t == pi / 2 && s == pi / 2) defect_half_pi = d;
        defects.row(t, s, d, expected, std::abs(d - expected));
    }

    const std::vector<MarkovSample> samples{{{0.0, pi / 2, pi}, {BaseSet::full(xi.grid())}, 1}};
    double member_residual = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        member_residual = std::max(member_residual, check_markov(from_semigroup(xi.member(i)), samples).max_residual);
    }
    const auto mean_markov = check_markov(mean_pseudomeasure(xi, ParamMeasure::uniform(xi.parameters())), samples);

    ScenarioOutcome out;
    out.passed = max_error < 1e-12 && std::abs(defect_half_pi - 1.0) < 1e-9 && defect_error < 1e-9 &&
                 mean_markov.max_residual >= 0.5 && member_residual < 1e-9;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"max_cos_error", max_error},
                        {"defect_at_half_pi", defect_half_pi},
                        {"max_defect_error", defect_error},
                        {"member_markov_residual", member_residual},
                        {"mean_markov", mean_markov.to_json()}});
    out.artifacts = {{"remark7_mean_evolution.csv", evolution.str()},
                     {"remark7_memory_defect.csv", defects.str()},
                     json_artifact("remark7_report.json", out.summary)};
    return out;
}

std::vector<CylinderConfig> random_cylinders(std::uint64_t seed, std::size_t count, double L) {
    auto rng = substream(seed, "wiener-validate/cylinders");
    std::uniform_int_distribution<int> arity(2, 3);
    std::uniform_real_distribution<double> gap(0.02, 0.2), start(0.0, L), length(0.25 * L, 0.75 * L);
    std::vector<CylinderConfig> out(count);
    for (auto& cyl : out) {
        const int m = arity(rng);
        double t = 0.0;
        for (int j = 0; j < m; ++j) {
            if (j) t += gap(rng);
            const double lo = start(rng);
            cyl.times.push_back(t);
            cyl.bases.push_back({"interval", lo, lo + length(rng), {}});
        }
    }
    return out;
}

ScenarioOutcome run_wiener_validate(const RunConfig& c) {
    const Grid g = build_grid(*c.grid);
    const GridConfig fine_config{c.grid->dim, 2 * c.grid->cells_per_axis, c.grid->extent};
    const Grid fine = build_grid(fine_config);
    const auto fine_mu = from_semigroup(Semigroup(build_generator(fine, GeneratorSpec::laplacian()), Mode::heat));
    const auto cylinders = c.cylinders.empty() ? random_cylinders(c.seed, *c.budgets.trials, g.extent()) : c.cylinders;

    Csv table({"index", "arity", "eval", "mc_value", "mc_stderr", "z_score", "refined_eval", "drift_sigma"});
    json rows = json::array();
    std::size_t within = 0;
    double max_z = 0.0, max_drift = 0.0;
    for (std::size_t k = 0; k < cylinders.size(); ++k) {
        std::vector<BaseSet> bases, refined;
        for (const auto& b : cylinders[k].bases) {
            bases.push_back(build_base(g, b));
            refined.push_back(refine_base(bases.back()));
        }
        const auto cmp = compare_heat_with_wiener(g, cylinders[k].times, bases, *c.budgets.n_paths,
                                                  substream_seed(c.seed, "wiener-validate/mc/" + std::to_string(k)));
        const double fine_eval = fine_mu.eval(make_cylinder(cylinders[k].times, refined)).real();
        const double drift = cmp.mc.std_error > 0.0 ? std::abs(fine_eval - cmp.eval) / cmp.mc.std_error
                                                     : (std::abs(fine_eval - cmp.eval) > 1e-9 ? INFINITY : 0.0);
        within += std::abs(cmp.z_score) <= 3.0;
        max_z = std::max(max_z, std::abs(cmp.z_score));
        max_drift = std::max(max_drift, drift);
        table.row(k, cylinders[k].times.size(), cmp.eval, cmp.mc.value, cmp.mc.std_error, cmp.z_score, fine_eval, drift);
        auto row = cmp.to_json();
        row["times"] = cylinders[k].times;
        row["refined_eval"] = fine_eval;
        row["drift_sigma"] = drift;
        rows.push_back(row);
    }

    ScenarioOutcome out;
    out.passed = within == cylinders.size() && max_drift < 1.0;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"cells_per_axis", g.cells_per_axis()},
                        {"n_paths", *c.budgets.n_paths},
                        {"cylinders", cylinders.size()},
                        {"within_3_sigma", within},
                        {"max_abs_z", max_z},
                        {"max_drift_sigma", max_drift},
                        {"comparisons", rows}});
    out.artifacts = {{"wiener_validate.csv", table.str()}, json_artifact("wiener_validate_report.json", out.summary)};
    return out;
}

double drop_ratio(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*field) {
    const double last = rows.back().*field;
    return last > 0.0 ? rows.front().*field / last : INFINITY;
}

ScenarioOutcome run_theorem3(const RunConfig& c) {
    const Grid g = build_grid(*c.grid);
    const auto& f = *c.family;
    const auto fam = make_family(g, {f.family, f.params, f.mode}, f.parameters);
    const double L = g.extent();
    ConvergenceProbes probes;
    probes.vectors = {bump(g, 0.5 * L, 0.1 * L)};
    probes.pairs = {{bump(g, 0.5 * L, 0.1 * L), bump(g, 0.4 * L, 0.1 * L)}};
    probes.time_samples = *c.budgets.time_samples;
    const auto report = convergence_report(fam, fam.build(0.0), *c.T, probes);

    const double strong_drop = drop_ratio(report.rows, &ConvergenceRow::strong_distance);
    const double seminorm_drop = drop_ratio(report.rows, &ConvergenceRow::seminorm_distance);
    ScenarioOutcome out;
    out.passed = report.spearman_strong_seminorm >= 1.0 - 1e-12 && strong_drop >= 4.0 && seminorm_drop >= 4.0;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"report", report.verdict_json()},
                        {"strong_drop", strong_drop},
                        {"seminorm_drop", seminorm_drop}});
    out.artifacts = {{"theorem3_convergence.csv", report.to_csv()}, json_artifact("theorem3_report.json", out.summary)};
    return out;
}

ScenarioOutcome run_theorem4(const RunConfig& c) {
    const Grid g = build_grid(*c.grid);
    const auto& f = *c.family;
    const double a = f.params.at(0);
    const auto fam = make_family(g, {f.family, f.params, f.mode}, f.parameters);
    const auto n = static_cast<Eigen::Index>(g.size());
    const OperatorFamily limit = [a, n](double t) { return Matrix(Matrix::Identity(n, n) * bessel_oracle(a * t)); };
    const double L = g.extent();

    ConvergenceProbes probes;
    probes.vectors = {indicator(BaseSet::full(g))};
    probes.pairs = {{bump(g, 0.45 * L, 0.1 * L), bump(g, 0.55 * L, 0.12 * L)}};
    probes.weak_times = {0.5, 1.0, 2.0};
    probes.time_samples = *c.budgets.time_samples;
    const auto report = convergence_report(fam, limit, *c.T, probes);

    const double defect = semigroup_defect(limit, 1.0, 1.0);
    const double expected_defect = std::abs(bessel_oracle(2.0 * a) - std::pow(bessel_oracle(a), 2));

    const auto mu = from_semigroup(fam.member(fam.size() - 1));
    const auto v = BaseSet::interval(g, 0.1 * L, 0.7 * L), w = BaseSet::interval(g, 0.2 * L, 0.9 * L),
               y = BaseSet::interval(g, 0.05 * L, 0.8 * L);
    const double j1 = bessel_oracle(a);
    const double two_gap = std::abs(mu.eval(make_cylinder({0.0, 1.0}, {v, w})) - j1 * lebesgue(v & w));
    const double three_gap = std::abs(mu.eval(make_cylinder({0.0, 1.0, 2.0}, {v, w, y})) - j1 * j1 * lebesgue(v & w & y));

    double min_strong = INFINITY;
    for (const auto& row : report.rows) min_strong = std::min(min_strong, row.strong_distance);
    const double last_weak = report.rows.back().weak_gap;

    ScenarioOutcome out;
    out.passed = last_weak < 2e-2 && min_strong > 0.5 && std::abs(defect - expected_defect) < 1e-3 && three_gap > 10.0 * two_gap;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"report", report.verdict_json()},
                        {"final_weak_gap", last_weak},
                        {"min_strong_distance", min_strong},
                        {"limit_defect", defect},
                        {"expected_defect", expected_defect},
                        {"two_time_gap", two_gap},
                        {"three_time_gap", three_gap}});
    out.artifacts = {{"theorem4_convergence.csv", report.to_csv()}, json_artifact("theorem4_report.json", out.summary)};
    return out;
}

ScenarioOutcome run_theorem1(const RunConfig& c) {
    const std::size_t len = *c.budgets.sequence_length;
    auto rng = substream(c.seed, "theorem1-limits/vectors");
    std::normal_distribution<double> normal;
    Vector v(4), w(4);
    for (auto& x : v) x = Complex(normal(rng), normal(rng));
    for (auto& x : w) x = Complex(normal(rng), normal(rng));

    std::vector<double> e(len);
    std::vector<Vector> alternating(len), convergent(len);
    for (std::size_t k = 0; k < len; ++k) {
        e[k] = static_cast<double>(k);
        alternating[k] = k % 2 ? Vector(-v) : v;
        convergent[k] = v + std::ldexp(1.0, -static_cast<int>(k)) * w;
    }

    const auto alt = limit_points(alternating, {ParamMeasure::tail_selector(e, 2, 0), ParamMeasure::tail_selector(e, 2, 1),
                                                ParamMeasure::uniform(e), ParamMeasure::cesaro(e, len / 2)});
    const auto conv = limit_points(convergent, {ParamMeasure::tail_selector(e, 2, 0), ParamMeasure::tail_selector(e, 2, 1),
                                                ParamMeasure::tail_selector(e, 3, 1, 2), ParamMeasure::cesaro(e, 4)});

    // Distinct accumulation-point means among the selectors.
    std::vector<Vector> distinct;
    for (const auto& p : alt.points) {
        if (!p.accumulation_point) continue;
        if (std::none_of(distinct.begin(), distinct.end(), [&](const Vector& d) { return (d - p.mean).norm() <= 1e-12; })) {
            distinct.push_back(p.mean);
        }
    }
    const double even_error = (alt.points[0].mean - v).norm(), odd_error = (alt.points[1].mean + v).norm();
    const bool alternating_ok = alt.points[0].accumulation_point && alt.points[1].accumulation_point && even_error <= 1e-12 &&
                                odd_error <= 1e-12 && !alt.points[2].accumulation_point && distinct.size() == 2;
    bool convergent_ok = conv.spread < 1e-9;
    for (const auto& p : conv.points) convergent_ok = convergent_ok && p.accumulation_point;

    ScenarioOutcome out;
    out.passed = alternating_ok && convergent_ok;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"sequence_length", len},
                        {"alternating", alt.to_json()},
                        {"alternating_distinct_limits", distinct.size()},
                        {"even_error", even_error},
                        {"odd_error", odd_error},
                        {"convergent", conv.to_json()}});
    out.artifacts = {json_artifact("theorem1_limits_report.json", out.summary)};
    return out;
}

ScenarioOutcome run_young(const RunConfig& c) {
    const Grid g = build_grid(*c.grid);
    const auto& f = *c.family;
    const double a = f.params.at(0);
    const auto xi = make_family(g, {f.family, f.params, f.mode}, f.parameters);
    const auto nu = make_param_measure(xi.parameters(), *c.measure);
    const auto field = semigroup_field(xi, indicator(BaseSet::full(g)));
    const std::size_t N = g.size();
    const std::vector<SpaceTimeProbe> probes{{0.5, N / 8}, {1.0, 3 * N / 8}, {2.0, 5 * N / 8}};
    const auto ym = young_measure(field, nu, probes, {*c.budgets.bins, {}});

    const std::vector<std::pair<std::string, std::function<Complex(Complex)>>> tests{
        {"z", [](Complex z) { return z; }},
        {"z^2", [](Complex z) { return z * z; }},
        {"|z|^2", [](Complex z) { return Complex(std::norm(z)); }},
        {"cos(re z) + i im z", [](Complex z) { return std::cos(z.real()) + Complex(0.0, 1.0) * z.imag(); }},
        {"exp(-|z - 1/2|^2)", [](Complex z) { return Complex(std::exp(-std::norm(z - 0.5))); }},
    };
    Csv identity({"t", "cell", "test", "histogram_re", "histogram_im", "direct_re", "direct_im", "abs_error"});
    Csv means({"t", "cell", "mean_re", "mean_im", "bessel", "abs_error"});
    double identity_error = 0.0, mean_error = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto& h = ym.histograms[p];
        for (const auto& [name, fn] : tests) {
            const Complex hist = h.integrate(fn), direct = young_average(field, nu, probes[p], fn);
            identity_error = std::max(identity_error, std::abs(hist - direct));
            identity.row(probes[p].t, probes[p].cell, "\"" + name + "\"", hist.real(), hist.imag(), direct.real(), direct.imag(),
                         std::abs(hist - direct));
        }
        const double j0 = bessel_oracle(a * probes[p].t);
        const Complex mean = h.mean();
        mean_error = std::max(mean_error, std::abs(mean - j0));
        means.row(probes[p].t, probes[p].cell, mean.real(), mean.imag(), j0, std::abs(mean - j0));
    }

    ScenarioOutcome out;
    out.passed = identity_error < 2e-2 && mean_error < 2e-2;
    out.summary = base_summary(c);
    out.summary.update({{"passed", out.passed},
                        {"members", xi.size()},
                        {"measure", nu.describe()},
                        {"bins", *c.budgets.bins},
                        {"max_identity_error", identity_error},
                        {"max_mean_error", mean_error}});
    out.artifacts = {{"young_identity.csv", identity.str()},
                     {"young_mean.csv", means.str()},
                     json_artifact("young_histograms.json", ym.to_json()),
                     json_artifact("young_report.json", out.summary)};
    return out;
}

ScenarioOutcome run_suite(const RunConfig& c) {
    const auto result = run_property_suite(c.seed, c.filter);
    ScenarioOutcome out;
    out.passed = result.passed;
    out.summary = base_summary(c);
    out.summary.update({{"passed", result.passed},
                        {"filter", c.filter},
                        {"checks_run", result.checks.size()},
                        {"pseudomeasure_functionals_samples",
                         result.samples_with_prefix("pseudomeasure/") + result.samples_with_prefix("functionals/")},
                        {"result", result.to_json()}});
    out.artifacts = {json_artifact("property_suite_report.json", out.summary)};
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid run configuration:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

const std::vector<ScenarioInfo>& scenario_catalog() {
    static const std::vector<ScenarioInfo> catalog = [] {
        const std::vector<std::pair<std::string, std::string>> described{
            {"remark7", "mean of two opposite-frequency scalar evolutions: cosine mean and memory defect"},
            {"wiener-validate", "heat pseudomeasure against Monte Carlo Brownian paths, with z-scores and refinement drift"},
            {"theorem3-strong", "regularized potentials: strong and seminorm distances fall together"},
            {"theorem4-weak", "oscillating multipliers: weak convergence to a Bessel multiple of the identity only"},
            {"theorem1-limits", "limit points of alternating and convergent sequences under tail selectors"},
            {"young-oscillation", "value distributions of oscillating fields and their integral identity"},
            {"property-suite", "every module's sampled invariants, stopping at the first violated bound"},
        };
        const std::map<std::string, std::vector<std::string>> extra{
            {"remark7", {"T", "budgets"}},
            {"wiener-validate", {"grid", "cylinders", "budgets"}},
            {"theorem3-strong", {"grid", "family", "T", "budgets"}},
            {"theorem4-weak", {"grid", "family", "T", "budgets"}},
            {"theorem1-limits", {"budgets"}},
            {"young-oscillation", {"grid", "family", "measure", "budgets"}},
            {"property-suite", {"filter"}},
        };
        std::vector<ScenarioInfo> out;
        for (const auto& [name, text] : described) {
            auto keys = kCommonKeys;
            keys.insert(keys.end(), extra.at(name).begin(), extra.at(name).end());
            out.push_back({name, text, keys});
        }
        return out;
    }();
    return catalog;
}

RunConfig parse_run_config(const json& doc) {
    Reader r;
    RunConfig c;
    if (!r.object(doc, "")) throw ConfigError(r.problems);

    for (const char* key : {"schema_version", "scenario", "seed", "output_dir"}) {
        if (!doc.contains(key)) r.fail(std::string("/") + key, "required");
    }
    if (doc.contains("schema_version")) {
        if (auto v = r.integer(doc["schema_version"], "/schema_version", 0, 1u << 20); v && *v != 1) {
            r.fail("/schema_version", "unsupported version " + std::to_string(*v) + " (expected 1)");
        }
    }
    if (doc.contains("seed")) {
        if (auto s = r.integer(doc["seed"], "/seed", 0, UINT64_MAX)) c.seed = *s;
    }
    if (doc.contains("output_dir")) {
        if (auto d = r.string(doc["output_dir"], "/output_dir")) {
            if (d->empty()) r.fail("/output_dir", "must not be empty");
            c.output_dir = *d;
        }
    }

    const ScenarioInfo* info = nullptr;
    if (doc.contains("scenario")) {
        if (auto s = r.string(doc["scenario"], "/scenario")) {
            for (const auto& entry : scenario_catalog()) {
                if (entry.name == *s) info = &entry;
            }
            if (!info) {
                std::vector<std::string> names;
                for (const auto& entry : scenario_catalog()) names.push_back(entry.name);
                r.fail("/scenario", "unknown scenario '" + *s + "' (expected one of " + join(names, ", ") + ")");
            }
        }
    }
    if (!info) {
        r.keys(doc, "", {"schema_version", "scenario", "seed", "output_dir", "grid", "family", "measure", "cylinders", "T",
                         "budgets", "filter"});
        throw ConfigError(r.problems);
    }
    c.scenario = info->name;
    r.keys(doc, "", info->config_keys,
           {"grid", "family", "measure", "cylinders", "T", "budgets", "filter"}, c.scenario);
    auto uses = [&](const char* key) {
        return doc.contains(key) && std::find(info->config_keys.begin(), info->config_keys.end(), key) != info->config_keys.end();
    };

    if (uses("grid")) c.grid = parse_grid(r, doc["grid"]);
    if (uses("family")) c.family = parse_family(r, doc["family"], kScenarioFamily.at(c.scenario));
    if (uses("measure")) c.measure = parse_measure(r, doc["measure"]);
    if (uses("cylinders")) c.cylinders = parse_cylinders(r, doc["cylinders"]);
    if (uses("T")) {
        if (auto t = r.number(doc["T"], "/T", 0.0, 1e3, true)) c.T = *t;
    }
    if (uses("filter")) {
        if (auto f = r.string(doc["filter"], "/filter")) c.filter = *f;
    }
    if (uses("budgets") && r.object(doc["budgets"], "/budgets")) {
        const auto& b = doc["budgets"];
        r.keys(b, "/budgets", kBudgetKeys.at(c.scenario), {"n_paths", "time_samples", "trials", "bins", "sequence_length"},
               c.scenario);
        auto read = [&](const char* key, std::uint64_t lo, std::uint64_t hi) -> std::optional<std::uint64_t> {
            const auto& allowed = kBudgetKeys.at(c.scenario);
            if (!b.contains(key) || std::find(allowed.begin(), allowed.end(), key) == allowed.end()) return std::nullopt;
            return r.integer(b[key], std::string("/budgets/") + key, lo, hi);
        };
        if (auto x = read("n_paths", 1000, 10000000)) c.budgets.n_paths = *x;
        if (auto x = read("time_samples", 2, 4096)) c.budgets.time_samples = static_cast<int>(*x);
        if (auto x = read("trials", 1, 1000)) c.budgets.trials = *x;
        if (auto x = read("bins", 2, 1024)) c.budgets.bins = static_cast<int>(*x);
        if (auto x = read("sequence_length", 8, 1000000)) {
            if (*x % 2) r.fail("/budgets/sequence_length", "must be even");
            c.budgets.sequence_length = *x;
        }
    }
    if (r.problems.empty()) resolve_defaults(c, r);
    if (!r.problems.empty()) throw ConfigError(r.problems);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot be read"});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path.string() + ": malformed JSON (" + e.what() + ")"});
    }
    return parse_run_config(doc);
}

ScenarioOutcome run_scenario(const RunConfig& config) {
    static const std::map<std::string, std::function<ScenarioOutcome(const RunConfig&)>> runners{
        {"remark7", run_remark7},           {"wiener-validate", run_wiener_validate}, {"theorem3-strong", run_theorem3},
        {"theorem4-weak", run_theorem4},    {"theorem1-limits", run_theorem1},        {"young-oscillation", run_young},
        {"property-suite", run_suite},
    };
    const auto it = runners.find(config.scenario);
    if (it == runners.end()) throw ConfigError({"/scenario: unknown scenario '" + config.scenario + "'"});
    return it->second(config);
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
    namespace fs = std::filesystem;
    const bool existed = fs::exists(dir);
    std::vector<fs::path> written;
    try {
        fs::create_directories(dir);
        for (const auto& a : artifacts) {
            const fs::path target = dir / a.name;
            std::ofstream out(target, std::ios::binary | std::ios::trunc);
            written.push_back(target);
            out << a.content;
            out.close();
            if (!out) throw std::runtime_error("cannot write " + target.string());
        }
    } catch (...) {
        std::error_code ignored;
        for (const auto& p : written) fs::remove(p, ignored);
        if (!existed) fs::remove(dir, ignored);
        throw;
    }
}

}  // namespace pml
