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

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pml/grid.hpp"

namespace pml {

/// unitary: U(t) = exp(-i t L), any real t.  heat: U(t) = exp(t L), t >= 0.
enum class Mode { unitary, heat };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct GeneratorSpec {
    enum class Kind { laplacian, laplacian_plus_potential, multiplication, explicit_hermitian };

    Kind kind = Kind::laplacian;
    /// Potential V (for Delta - V) or multiplier phi, one real value per cell.
    std::vector<double> field;
    Matrix matrix;

    static GeneratorSpec laplacian() { return {}; }
    static GeneratorSpec laplacian_plus_potential(std::vector<double> potential) {
        return {Kind::laplacian_plus_potential, std::move(potential), {}};
    }
    static GeneratorSpec multiplication(std::vector<double> multiplier) {
        return {Kind::multiplication, std::move(multiplier), {}};
    }
    static GeneratorSpec explicit_hermitian(Matrix m) { return {Kind::explicit_hermitian, {}, std::move(m)}; }
};

/// Self-adjoint generator with a cached spectral decomposition L = Q diag(lambda) Q^*.
///
/// Multiplication generators are stored by their diagonal only; their
/// eigenbasis is the cell basis and no dense matrix is kept.
class Generator {
public:
    const Grid& grid() const { return grid_; }
    GeneratorSpec::Kind kind() const { return kind_; }
    bool is_diagonal() const { return kind_ == GeneratorSpec::Kind::multiplication; }

    /// Dense matrix of L (materialized on demand for diagonal generators).
    Matrix matrix() const;
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    /// Columns are orthonormal eigenvectors; empty for diagonal generators.
    const Matrix& eigenvectors() const { return eigenvectors_; }

    /// ||L - Q Lambda Q^*||_F / ||L||_F as measured at construction.
    double reconstruction_residual() const { return residual_; }

    /// Q diag(f) Q^* v.
    Vector apply_spectral(const Eigen::VectorXcd& f, const Vector& v) const;
    /// Q diag(f) Q^*.
    Matrix spectral_matrix(const Eigen::VectorXcd& f) const;

private:
    friend std::shared_ptr<const Generator> build_generator(const Grid& grid, const GeneratorSpec& spec);

    Grid grid_;
    GeneratorSpec::Kind kind_ = GeneratorSpec::Kind::laplacian;
    Matrix matrix_;
    Eigen::VectorXd eigenvalues_;
    Matrix eigenvectors_;
    double residual_ = 0.0;
};

/// Periodic second-difference Laplacian on `grid` (sum over axes).
Matrix periodic_laplacian(const Grid& grid);

/// Throws InvalidArgument on a field of the wrong length or a non-Hermitian
/// explicit matrix (max |L - L^*| >= 1e-10).
std::shared_ptr<const Generator> build_generator(const Grid& grid, const GeneratorSpec& spec);

class Semigroup {
public:
    Semigroup(std::shared_ptr<const Generator> generator, Mode mode);

    const Generator& generator() const { return *generator_; }
    const Grid& grid() const { return generator_->grid(); }
    Mode mode() const { return mode_; }

    /// Dense propagator U(t). Throws InvalidArgument for t < 0 in heat mode.
    Matrix propagate(double t) const;
    /// U(t) v without forming U(t).
    Vector apply(double t, const Vector& v) const;
    StateVector apply(double t, const StateVector& v) const;

private:
    Eigen::VectorXcd spectral_factor(double t) const;

    std::shared_ptr<const Generator> generator_;
    Mode mode_;
};

Matrix propagate(const Semigroup& sg, double t);

/// Largest singular value.
double operator_norm(const Matrix& m);

using OperatorFamily = std::function<Matrix(double)>;

/// ||U(t) U(s) - U(t + s)||_op.
double semigroup_defect(const Semigroup& sg, double t, double s);
double semigroup_defect(const OperatorFamily& family, double t, double s);

struct FamilySpec {
    /// "scalar_pair" | "oscillating_multiplier" | "regularized_potential"
    std::string family;
    /// Family-level constants: amplitude a for oscillating_multiplier, V0 for
    /// regularized_potential; unused for scalar_pair.
    std::vector<double> params;
    Mode mode = Mode::unitary;
};

/// Parameter list E together with the map eps -> Semigroup.
///
/// Members are materialized on first access; concurrent first access to
/// one index builds it exactly once.
class RandomSemigroup {
public:
    using Builder = std::function<Semigroup(double)>;

    RandomSemigroup(Grid grid, Mode mode, std::vector<double> parameters, Builder builder);

    const Grid& grid() const { return state_->grid; }
    Mode mode() const { return state_->mode; }
    const std::vector<double>& parameters() const { return state_->parameters; }
    std::size_t size() const { return state_->parameters.size(); }

    const Semigroup& member(std::size_t index) const;
    /// Semigroup for an arbitrary parameter value; not memoized.
    Semigroup build(double parameter) const { return state_->builder(parameter); }

private:
    struct State {
        Grid grid;
        Mode mode;
        std::vector<double> parameters;
        Builder builder;
        std::vector<std::once_flag> once;
        std::vector<std::unique_ptr<Semigroup>> members;
    };
    std::shared_ptr<State> state_;
};

/// Built-in families:
///   scalar_pair             L_eps = eps * I, so U_eps(t) = e^{-i eps t}.
///   oscillating_multiplier  L_n = a sin(2 pi n x / L) (multiplication), parameters are n.
///   regularized_potential   L_eps = Delta - V_eps, V_eps(x) = V0 sqrt((x - L/2)^2 + eps^2),
///                           converging pointwise to V0 |x - L/2| at eps = 0.
/// Throws InvalidArgument for an empty parameter list or an unknown family.
RandomSemigroup make_family(const Grid& grid, const FamilySpec& spec, std::vector<double> parameters);

}  // namespace pml
