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

#include "pml/pseudomeasure.hpp"

#include <cmath>
#include <sstream>

namespace pml {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string describe(const CylinderSet& a) {
    std::ostringstream os;
    os << "A^{";
    for (std::size_t j = 0; j < a.arity(); ++j) os << (j ? "," : "") << a.times()[j];
    os << "} with base sizes (";
    for (std::size_t j = 0; j < a.arity(); ++j) os << (j ? "," : "") << a.bases()[j].count();
    os << ")";
    return os.str();
}

Complex eval_semigroup(const Semigroup& sg, const CylinderSet& a) {
    const auto& times = a.times();
    const auto& bases = a.bases();
    if (a.arity() == 1) return lebesgue(bases[0]);

    Vector x = indicator(bases.front()).values();
    for (std::size_t j = 1; j < a.arity(); ++j) {
        x = sg.apply(times[j] - times[j - 1], x);
        if (j + 1 < a.arity()) {
            const auto& mask = bases[j].mask();
            for (Eigen::Index c = 0; c < x.size(); ++c) {
                if (!mask[static_cast<std::size_t>(c)]) x[c] = 0.0;
            }
        }
    }
    return inner(sg.grid(), x, indicator(bases.back()).values());
}

void validate_times(const Grid& grid, const std::vector<double>& times, const std::vector<BaseSet>& mid_bases) {
    if (times.size() < 2) throw InvalidArgument("operator reconstruction needs at least two times");
    if (mid_bases.size() != times.size() - 2) {
        throw InvalidArgument("operator reconstruction needs one base per interior time");
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!(times[j] >= 0.0) || !std::isfinite(times[j])) throw InvalidArgument("times must be nonnegative");
        if (j > 0 && times[j] < times[j - 1]) throw InvalidArgument("times must be nondecreasing");
    }
    for (const auto& b : mid_bases) {
        if (!(b.grid() == grid)) throw GridMismatch();
    }
}

void zero_rows_outside(Matrix& m, const BaseSet& base) {
    const auto& mask = base.mask();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (!mask[static_cast<std::size_t>(r)]) m.row(r).setZero();
    }
}

}  // namespace

Pseudomeasure from_semigroup(const Semigroup& sg) {
    return Pseudomeasure(std::make_shared<const Pseudomeasure::Node>(
        Pseudomeasure::Node{sg.grid(), Pseudomeasure::SemigroupBacked{sg}}));
}

Pseudomeasure combine(const std::vector<Complex>& coeffs, const std::vector<Pseudomeasure>& parts) {
    if (coeffs.empty() || coeffs.size() != parts.size()) {
        throw InvalidArgument("combine needs equally long, nonempty coefficient and part lists");
    }
    for (const auto& p : parts) {
        if (!(p.grid() == parts.front().grid())) throw GridMismatch();
    }
    return Pseudomeasure(std::make_shared<const Pseudomeasure::Node>(
        Pseudomeasure::Node{parts.front().grid(), Pseudomeasure::LinearCombination{coeffs, parts}}));
}

Pseudomeasure Pseudomeasure::zero(const Grid& grid) {
    return Pseudomeasure(std::make_shared<const Node>(Node{grid, LinearCombination{}}));
}

Pseudomeasure Pseudomeasure::table(const Grid& grid, std::vector<std::pair<CylinderSet, Complex>> entries) {
    for (const auto& [set, value] : entries) {
        if (!(set.grid() == grid)) throw GridMismatch();
    }
    return Pseudomeasure(std::make_shared<const Node>(Node{grid, TableBacked{std::move(entries)}}));
}

Complex Pseudomeasure::eval(const CylinderSet& a) const {
    if (!(a.grid() == grid())) throw GridMismatch();
    if (a.is_empty()) return 0.0;
    return std::visit(overloaded{
                          [&](const SemigroupBacked& s) { return eval_semigroup(s.semigroup, a); },
                          [&](const LinearCombination& lc) {
                              Complex sum = 0.0;
                              for (std::size_t i = 0; i < lc.parts.size(); ++i) {
                                  if (lc.coeffs[i] != 0.0) sum += lc.coeffs[i] * lc.parts[i].eval(a);
                              }
                              return sum;
                          },
                          [&](const TableBacked& t) {
                              for (const auto& [set, value] : t.entries) {
                                  if (set.same_as(a)) return value;
                              }
                              throw Unevaluable("table-backed pseudomeasure has no entry for " + describe(a));
                          },
                      },
                      node_->variant);
}

Complex eval(const Pseudomeasure& mu, const CylinderSet& a) { return mu.eval(a); }

Complex eval(const Pseudomeasure& mu, const RingElement& a) {
    Complex sum = 0.0;
    for (const auto& part : a.parts) sum += mu.eval(part);
    return a.complemented ? Complex(1.0) - sum : sum;
}

Complex sesquilinear_eval(const SesquilinearForm& form, const StateVector& f, const StateVector& g) {
    const Grid& grid = form.mu.grid();
    if (!(f.grid() == grid) || !(g.grid() == grid)) throw GridMismatch();
    validate_times(grid, form.times, form.mid_bases);

    Complex sum = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (f[k] == 0.0) continue;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (g[j] == 0.0) continue;
            std::vector<BaseSet> bases;
            bases.reserve(form.times.size());
            bases.emplace_back(grid, std::vector<std::size_t>{k});
            bases.insert(bases.end(), form.mid_bases.begin(), form.mid_bases.end());
            bases.emplace_back(grid, std::vector<std::size_t>{j});
            sum += f[k] * std::conj(g[j]) * form.mu.eval(make_cylinder(form.times, std::move(bases)));
        }
    }
    return sum;
}

Matrix reconstruct_operator_by_probes(const Pseudomeasure& mu, const std::vector<double>& times,
                                      const std::vector<BaseSet>& mid_bases) {
    const Grid& grid = mu.grid();
    validate_times(grid, times, mid_bases);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Matrix m(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index row = 0; row < n; ++row) {
            std::vector<BaseSet> bases;
            bases.reserve(times.size());
            bases.emplace_back(grid, std::vector<std::size_t>{static_cast<std::size_t>(col)});
            bases.insert(bases.end(), mid_bases.begin(), mid_bases.end());
            bases.emplace_back(grid, std::vector<std::size_t>{static_cast<std::size_t>(row)});
            m(row, col) = mu.eval(make_cylinder(times, std::move(bases))) / grid.cell_volume();
        }
    }
    return m;
}

Matrix reconstruct_operator(const Pseudomeasure& mu, const std::vector<double>& times,
                            const std::vector<BaseSet>& mid_bases) {
    const Grid& grid = mu.grid();
    validate_times(grid, times, mid_bases);
    const auto n = static_cast<Eigen::Index>(grid.size());
    return std::visit(overloaded{
                          [&](const Pseudomeasure::SemigroupBacked& s) {
                              Matrix m = s.semigroup.propagate(times[1] - times[0]);
                              for (std::size_t k = 1; k + 1 < times.size(); ++k) {
                                  zero_rows_outside(m, mid_bases[k - 1]);
                                  m = s.semigroup.propagate(times[k + 1] - times[k]) * m;
                              }
                              return m;
                          },
                          [&](const Pseudomeasure::LinearCombination& lc) {
                              Matrix m = Matrix::Zero(n, n);
                              for (std::size_t i = 0; i < lc.parts.size(); ++i) {
                                  if (lc.coeffs[i] != 0.0) {
                                      m += lc.coeffs[i] * reconstruct_operator(lc.parts[i], times, mid_bases);
                                  }
                              }
                              return m;
                          },
                          [&](const Pseudomeasure::TableBacked&) {
                              return reconstruct_operator_by_probes(mu, times, mid_bases);
                          },
                      },
                      mu.variant());
}

nlohmann::json PropertyReport::to_json() const {
    return {{"property", property},
            {"max_residual", max_residual},
            {"n_samples", samples},
            {"n_skipped", skipped},
            {"witness", witness}};
}

PropertyReport check_markov(const Pseudomeasure& mu, const std::vector<MarkovSample>& samples) {
    PropertyReport report{"markov", 0.0, 0, 0, nullptr};
    for (const auto& s : samples) {
        const std::size_t n = s.times.size();
        if (n < 3 || s.split < 1 || s.split > n - 2 || s.mid_bases.size() != n - 2) {
            throw InvalidArgument("malformed Markov sample");
        }
        const std::vector<double> early_t(s.times.begin(), s.times.begin() + static_cast<long>(s.split) + 1);
        const std::vector<double> late_t(s.times.begin() + static_cast<long>(s.split), s.times.end());
        const std::vector<BaseSet> early_b(s.mid_bases.begin(), s.mid_bases.begin() + static_cast<long>(s.split) - 1);
        const std::vector<BaseSet> late_b(s.mid_bases.begin() + static_cast<long>(s.split), s.mid_bases.end());

        Matrix early = reconstruct_operator(mu, early_t, early_b);
        zero_rows_outside(early, s.mid_bases[s.split - 1]);
        const Matrix composed = reconstruct_operator(mu, late_t, late_b) * early;
        const double residual = operator_norm(composed - reconstruct_operator(mu, s.times, s.mid_bases));

        ++report.samples;
        if (residual > report.max_residual || report.witness.is_null()) {
            report.max_residual = std::max(report.max_residual, residual);
            report.witness = {{"times", s.times}, {"split", s.split}, {"residual", residual}};
        }
    }
    return report;
}

CylinderSet shift_times(const CylinderSet& a, double shift) {
    if (a.is_empty()) return a;
    std::vector<double> times = a.times();
    for (double& t : times) t += shift;
    return make_cylinder(std::move(times), a.bases());
}

PropertyReport check_stationary(const Pseudomeasure& mu, double shift, const std::vector<CylinderSet>& samples) {
    if (shift < 0.0) throw InvalidArgument("stationarity shift must be nonnegative");
    PropertyReport report{"stationary", 0.0, 0, 0, nullptr};
    for (const auto& a : samples) {
        ++report.samples;
        if (shift == 0.0) continue;
        const double residual = std::abs(mu.eval(a) - mu.eval(shift_times(a, shift)));
        if (residual > report.max_residual || report.witness.is_null()) {
            report.max_residual = std::max(report.max_residual, residual);
            report.witness = {{"times", a.times()}, {"shift", shift}, {"residual", residual}};
        }
    }
    return report;
}

double continuity_constant_a(const Pseudomeasure& mu, const std::vector<double>& times,
                             const std::vector<BaseSet>& mid_bases) {
    return operator_norm(reconstruct_operator(mu, times, mid_bases));
}

ContinuityBound continuity_constant_b(const Pseudomeasure& mu, const std::vector<double>& times,
                                      const std::vector<std::vector<BaseSet>>& base_samples) {
    if (times.size() < 2) throw InvalidArgument("continuity bound needs at least two times");
    const double arity = static_cast<double>(times.size() - 1);
    ContinuityBound bound;
    for (const auto& bases : base_samples) {
        if (bases.size() != times.size()) throw InvalidArgument("continuity sample needs one base per time");
        double volume = 1.0;
        for (const auto& b : bases) volume *= lebesgue(b);
        if (volume == 0.0) {
            ++bound.skipped;
            continue;
        }
        ++bound.samples;
        const double ratio = std::abs(mu.eval(make_cylinder(times, bases))) / volume;
        bound.constant = std::max(bound.constant, std::pow(ratio, 1.0 / arity));
    }
    return bound;
}

}  // namespace pml
