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

#include "pml/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pml/parallel.hpp"
#include "pml/random.hpp"

namespace pml {

DensityState DensityState::pure(const StateVector& u) {
    const double n = u.norm();
    if (n == 0.0) throw InvalidArgument("pure state needs a nonzero vector");
    const Vector q = u.values() * (std::sqrt(u.grid().cell_volume()) / n);
    return DensityState(u.grid(), q * q.adjoint());
}

DensityState DensityState::mixture(const std::vector<double>& weights, const std::vector<StateVector>& states) {
    if (weights.empty() || weights.size() != states.size()) {
        throw InvalidArgument("mixture needs one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InvalidArgument("mixture weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(states[0].grid().size()),
                              static_cast<Eigen::Index>(states[0].grid().size()));
    for (std::size_t j = 0; j < states.size(); ++j) rho += weights[j] * pure(states[j]).matrix();
    return DensityState(states[0].grid(), std::move(rho));
}

DensityState DensityState::from_matrix(const Grid& grid, Matrix rho) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (rho.rows() != n || rho.cols() != n) throw InvalidArgument("density matrix does not match the grid");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidArgument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw InvalidArgument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("density matrix is not positive");
    return DensityState(grid, std::move(rho));
}

Complex p_cyl(const Pseudomeasure& mu, const RingElement& a) { return eval(mu, a); }

double p_stvw(const Pseudomeasure& mu, double s, double t, const StateVector& v, const StateVector& w) {
    if (!(s >= 0.0 && s < t)) throw InvalidArgument("two-time functional needs 0 <= s < t");
    if (!(v.grid() == mu.grid()) || !(w.grid() == mu.grid())) throw GridMismatch();
    const Matrix op = reconstruct_operator(mu, {s, t});
    return std::abs(inner(mu.grid(), op * v.values(), w.values()));
}

std::vector<double> time_grid(double T, int samples) {
    if (T < 0.0) throw InvalidArgument("time window must be nonnegative");
    if (samples < 2) throw InvalidArgument("time grid needs at least two samples");
    std::vector<double> ts(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) ts[static_cast<std::size_t>(k)] = T * k / (samples - 1);
    return ts;
}

double p_vT(const Pseudomeasure& mu, const StateVector& v, double T, int samples) {
    if (!(v.grid() == mu.grid())) throw GridMismatch();
    double sup = 0.0;
    const double weight = std::sqrt(mu.grid().cell_volume());
    for (double t : time_grid(T, samples)) {
        sup = std::max(sup, weight * (reconstruct_operator(mu, {0.0, t}) * v.values()).norm());
    }
    return sup;
}

double check_eq15(const Semigroup& sg, const StateVector& v, double T, int samples) {
    const double lhs = p_vT(from_semigroup(sg), v, T, samples);
    double rhs = 0.0;
    for (double t : time_grid(T, samples)) rhs = std::max(rhs, sg.apply(t, v).norm());
    return std::abs(lhs - rhs);
}

namespace {

void require_observable(const Grid& grid, const Matrix& obs) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (obs.rows() != n || obs.cols() != n) throw InvalidArgument("observable does not match the grid");
    if ((obs - obs.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidArgument("observable is not Hermitian");
}

Matrix two_time_operator(const Pseudomeasure& mu, double t1, double t2) {
    if (t2 < t1) throw InvalidArgument("state functional needs t1 <= t2");
    return reconstruct_operator(mu, {t1, t2});
}

}  // namespace

double f_state(const Pseudomeasure& mu, const DensityState& rho, const Matrix& obs, double t1, double t2) {
    require_observable(mu.grid(), obs);
    if (!(rho.grid() == mu.grid())) throw GridMismatch();
    const Matrix v = two_time_operator(mu, t1, t2);
    return (rho.matrix() * v * obs * v.adjoint()).trace().real();
}

double f_state_eigensum(const Pseudomeasure& mu, const DensityState& rho, const Matrix& obs, double t1, double t2) {
    require_observable(mu.grid(), obs);
    if (!(rho.grid() == mu.grid())) throw GridMismatch();
    const Grid& grid = mu.grid();
    const Matrix v = two_time_operator(mu, t1, t2);
    const double scale = 1.0 / std::sqrt(grid.cell_volume());

    Eigen::SelfAdjointEigenSolver<Matrix> obs_eig(0.5 * (obs + obs.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> rho_eig(0.5 * (rho.matrix() + rho.matrix().adjoint()));
    double total = 0.0;
    for (Eigen::Index j = 0; j < rho_eig.eigenvalues().size(); ++j) {
        const double p = rho_eig.eigenvalues()[j];
        if (std::abs(p) < 1e-15) continue;
        const Vector u = rho_eig.eigenvectors().col(j) * scale;
        double sum = 0.0;
        for (Eigen::Index k = 0; k < obs_eig.eigenvalues().size(); ++k) {
            const Vector psi = obs_eig.eigenvectors().col(k) * scale;
            sum += obs_eig.eigenvalues()[k] * std::norm(inner(grid, v * psi, u));
        }
        total += p * sum;
    }
    return total;
}

SeminormEstimate seminorm_V(const Pseudomeasure& mu, std::size_t probe_budget, std::uint64_t seed, double window) {
    if (probe_budget < 1) throw InvalidArgument("seminorm needs at least one probe");
    const Grid& grid = mu.grid();
    const auto n = static_cast<Eigen::Index>(grid.size());
    auto rng = substream(seed, "seminorm_V");
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, window);

    auto random_vector = [&] {
        Vector v(n);
        for (Eigen::Index k = 0; k < n; ++k) v[k] = Complex(gauss(rng), gauss(rng));
        return v;
    };

    SeminormEstimate est;
    for (std::size_t probe = 0; probe < probe_budget; ++probe) {
        Matrix obs;
        if (probe == 0) {
            obs = Matrix::Identity(n, n);
        } else {
            Matrix g(n, n);
            for (Eigen::Index c = 0; c < n; ++c) g.col(c) = random_vector();
            obs = g + g.adjoint();
            obs /= operator_norm(obs);
        }
        double t1 = unif(rng), t2 = unif(rng);
        if (t2 < t1) std::swap(t1, t2);
        const auto rho = DensityState::pure(StateVector(grid, random_vector()));
        const double value = std::abs(f_state(mu, rho, obs, t1, t2));
        ++est.probes;
        if (value > est.value || est.witness.is_null()) {
            est.value = std::max(est.value, value);
            est.witness = {{"probe", probe}, {"t1", t1}, {"t2", t2}, {"value", value}};
        }
    }
    return est;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman needs two equal series of length >= 2");
    auto ranks = [](const std::vector<double>& x) {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
        std::vector<double> r(x.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(ra.size());
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(rb.size());
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da == 0.0 || db == 0.0) return da == db ? 1.0 : 0.0;
    return num / std::sqrt(da * db);
}

std::string ConvergenceReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "index,parameter,strong_distance,weak_gap,seminorm_distance\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << i << ',' << rows[i].parameter << ',' << rows[i].strong_distance << ',' << rows[i].weak_gap << ','
           << rows[i].seminorm_distance << '\n';
    }
    return os.str();
}

nlohmann::json ConvergenceReport::verdict_json() const {
    return {{"verdict", verdict},
            {"spearman_strong_seminorm", spearman_strong_seminorm},
            {"refinement_change", refinement_change},
            {"n_rows", rows.size()}};
}

namespace {

StateVector normalized(const StateVector& v) {
    const double n = v.norm();
    if (n == 0.0) throw InvalidArgument("probe vectors must be nonzero");
    return v * Complex(1.0 / n);
}

using ReferenceApply = std::function<Vector(double, const Vector&)>;
using SeminormDistance = std::function<double(std::size_t, const StateVector&, int)>;

bool nonincreasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] > x[i - 1] * (1.0 + 1e-9) + 1e-12) return false;
    }
    return true;
}

ConvergenceReport build_report(const RandomSemigroup& family, double T, const ConvergenceProbes& probes,
                               const ReferenceApply& ref_apply, const SeminormDistance& seminorm) {
    if (!(T > 0.0)) throw InvalidArgument("convergence window must be positive");
    if (probes.vectors.empty()) throw InvalidArgument("convergence report needs probe vectors");
    std::vector<StateVector> vs;
    for (const auto& v : probes.vectors) vs.push_back(normalized(v));
    std::vector<std::pair<StateVector, StateVector>> pairs;
    for (const auto& [v, w] : probes.pairs) pairs.emplace_back(normalized(v), normalized(w));

    const auto ts = time_grid(T, probes.time_samples);
    const auto fine_ts = time_grid(T, 2 * probes.time_samples - 1);
    const auto& weak_ts = probes.weak_times.empty() ? ts : probes.weak_times;
    const double weight = std::sqrt(family.grid().cell_volume());

    ConvergenceReport report;
    report.rows.resize(family.size());
    std::vector<double> refinement(family.size(), 0.0);
    parallel_for(family.size(), [&](std::size_t i) {
        const Semigroup& sg = family.member(i);
        ConvergenceRow row;
        row.parameter = family.parameters()[i];
        auto strong_sup = [&](const std::vector<double>& grid_ts) {
            double sup = 0.0;
            for (double t : grid_ts) {
                for (const auto& v : vs) {
                    sup = std::max(sup, weight * (sg.apply(t, v.values()) - ref_apply(t, v.values())).norm());
                }
            }
            return sup;
        };
        row.strong_distance = strong_sup(ts);
        refinement[i] = std::abs(strong_sup(fine_ts) - row.strong_distance);
        for (double t : weak_ts) {
            for (const auto& [v, w] : pairs) {
                const Vector diff = sg.apply(t, v.values()) - ref_apply(t, v.values());
                row.weak_gap = std::max(row.weak_gap, std::abs(inner(family.grid(), diff, w.values())));
            }
        }
        for (const auto& v : vs) row.seminorm_distance = std::max(row.seminorm_distance, seminorm(i, v, probes.time_samples));
        report.rows[i] = row;
    });
    report.refinement_change = *std::max_element(refinement.begin(), refinement.end());

    std::vector<double> strong, semi, weak;
    for (const auto& r : report.rows) {
        strong.push_back(r.strong_distance);
        semi.push_back(r.seminorm_distance);
        weak.push_back(r.weak_gap);
    }
    report.spearman_strong_seminorm = strong.size() >= 2 ? spearman(strong, semi) : 1.0;

    const bool strong_small = strong.back() < 1e-10;
    const bool strong_falls = strong_small || (nonincreasing(strong) && strong.back() <= 0.5 * strong.front());
    const bool semi_falls = semi.back() < 1e-10 || (nonincreasing(semi) && semi.back() <= 0.5 * semi.front());
    const bool weak_falls = weak.back() < 1e-10 || weak.back() <= 0.5 * weak.front();
    if (strong_falls && semi_falls) {
        report.verdict = "strong+seminorm co-converge";
    } else if (weak_falls) {
        report.verdict = "weak-only";
    } else {
        report.verdict = "no convergence observed";
    }
    return report;
}

}  // namespace

ConvergenceReport convergence_report(const RandomSemigroup& family, const Semigroup& reference, double T,
                                     const ConvergenceProbes& probes) {
    if (!(reference.grid() == family.grid())) throw GridMismatch();
    const Pseudomeasure mu_ref = from_semigroup(reference);
    return build_report(
        family, T, probes, [&](double t, const Vector& v) { return reference.apply(t, v); },
        [&](std::size_t i, const StateVector& v, int samples) {
            return p_vT(combine({1.0, -1.0}, {from_semigroup(family.member(i)), mu_ref}), v, T, samples);
        });
}

ConvergenceReport convergence_report(const RandomSemigroup& family, const OperatorFamily& reference, double T,
                                     const ConvergenceProbes& probes) {
    const double weight = std::sqrt(family.grid().cell_volume());
    return build_report(
        family, T, probes, [&](double t, const Vector& v) -> Vector { return reference(t) * v; },
        [&](std::size_t i, const StateVector& v, int samples) {
            const Pseudomeasure mu = from_semigroup(family.member(i));
            double sup = 0.0;
            for (double t : time_grid(T, samples)) {
                const Matrix diff = reconstruct_operator(mu, {0.0, t}) - reference(t);
                sup = std::max(sup, weight * (diff * v.values()).norm());
            }
            return sup;
        });
}

}  // namespace pml
