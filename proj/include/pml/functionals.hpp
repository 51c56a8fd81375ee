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

/// Density matrix in cell coordinates, normalized so that the expectation
/// of an operator X is trace(rho X).
class DensityState {
public:
    /// Projector onto span{u}; u need not be normalized but must be nonzero.
    static DensityState pure(const StateVector& u);
    /// sum_j weights[j] |u_j><u_j| for unit-normalized u_j; weights are a
    /// probability vector.
    static DensityState mixture(const std::vector<double>& weights, const std::vector<StateVector>& states);
    /// Throws InvalidArgument unless the matrix is Hermitian, unit trace and
    /// positive semidefinite (tolerance 1e-10).
    static DensityState from_matrix(const Grid& grid, Matrix rho);

    const Grid& grid() const { return grid_; }
    const Matrix& matrix() const { return rho_; }

private:
    DensityState(Grid grid, Matrix rho) : grid_(std::move(grid)), rho_(std::move(rho)) {}

    Grid grid_;
    Matrix rho_;
};

/// P_A(mu) = mu(A).
Complex p_cyl(const Pseudomeasure& mu, const RingElement& a);

/// |beta^{s,t}_mu(v, w)| = |(A^{s,t}_mu v, w)|. Throws unless 0 <= s < t.
double p_stvw(const Pseudomeasure& mu, double s, double t, const StateVector& v, const StateVector& w);

/// Uniform time grid t_k = k T / (samples - 1), k = 0..samples-1.
std::vector<double> time_grid(double T, int samples);

/// sup over the time grid on [0, T] of ||A^{0,t}_mu v||, which is the sup over
/// unit w of the two-time functional. Throws for T < 0 or samples < 2.
double p_vT(const Pseudomeasure& mu, const StateVector& v, double T, int samples = 64);

/// |p_vT(mu_U, v, T) - sup_t ||U(t) v|||, the right side computed by direct
/// propagation of v.
double check_eq15(const Semigroup& sg, const StateVector& v, double T, int samples = 64);

/// trace(rho V A V^*) with V = A^{t1,t2}_mu. Throws for non-Hermitian obs or t2 < t1.
double f_state(const Pseudomeasure& mu, const DensityState& rho, const Matrix& obs, double t1, double t2);

/// Same quantity from the spectral forms: sum_j p_j sum_k a_k |(V psi_k, u_j)|^2
/// over the eigenpairs of rho and obs.
double f_state_eigensum(const Pseudomeasure& mu, const DensityState& rho, const Matrix& obs, double t1, double t2);

struct SeminormEstimate {
    double value = 0.0;
    std::size_t probes = 0;
    nlohmann::json witness;
};

/// Sampled lower bound for sup |F_{rho,A}(mu)| over unit-norm observables,
/// pure states and times 0 <= t1 <= t2 <= window. Probe 0 uses the identity
/// observable; the rest are random.
SeminormEstimate seminorm_V(const Pseudomeasure& mu, std::size_t probe_budget, std::uint64_t seed,
                            double window = 1.0);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct ConvergenceProbes {
    /// Vectors for the strong and seminorm distances (normalized internally).
    std::vector<StateVector> vectors;
    /// (v, w) pairs for weak matrix-element gaps (normalized internally).
    std::vector<std::pair<StateVector, StateVector>> pairs;
    /// Times for weak gaps; empty means the uniform time grid.
    std::vector<double> weak_times;
    int time_samples = 64;
};

struct ConvergenceRow {
    double parameter = 0.0;
    double strong_distance = 0.0;
    double weak_gap = 0.0;
    double seminorm_distance = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::string verdict;
    double spearman_strong_seminorm = 0.0;
    /// Largest change of a strong distance when the time grid is doubled.
    double refinement_change = 0.0;

    std::string to_csv() const;
    nlohmann::json verdict_json() const;
};

/// Distances of each family member from a limit semigroup: the strong one by
/// direct propagation, the seminorm one through P_{v,T}(mu_n - mu_ref).
ConvergenceReport convergence_report(const RandomSemigroup& family, const Semigroup& reference, double T,
                                     const ConvergenceProbes& probes);

/// Same against a declared limit operator function F (which need not be a
/// semigroup); the seminorm distance uses the two-time operators of mu_n.
ConvergenceReport convergence_report(const RandomSemigroup& family, const OperatorFamily& reference, double T,
                                     const ConvergenceProbes& probes);

}  // namespace pml
