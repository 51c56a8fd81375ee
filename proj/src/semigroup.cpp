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

#include "pml/semigroup.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pml {

const char* to_string(Mode mode) { return mode == Mode::unitary ? "unitary" : "heat"; }

Mode mode_from_string(const std::string& name) {
    if (name == "unitary") return Mode::unitary;
    if (name == "heat") return Mode::heat;
    throw InvalidArgument("unknown semigroup mode '" + name + "'");
}

Matrix periodic_laplacian(const Grid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const int m = grid.cells_per_axis();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Matrix lap = Matrix::Zero(n, n);
    if (m == 1) return lap;

    // 1D periodic stencil along one axis with stride `stride` inside blocks of size m * stride.
    auto add_axis = [&](Eigen::Index stride) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const Eigen::Index pos = (c / stride) % m;
            const Eigen::Index base = c - pos * stride;
            const Eigen::Index left = base + ((pos + m - 1) % m) * stride;
            const Eigen::Index right = base + ((pos + 1) % m) * stride;
            lap(c, c) -= 2.0 * inv_h2;
            lap(c, left) += inv_h2;
            lap(c, right) += inv_h2;
        }
    };
    add_axis(1);
    if (grid.dim() == 2) add_axis(m);
    return lap;
}

namespace {

double hermitian_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

void require_field_size(const Grid& grid, const std::vector<double>& field) {
    if (field.size() != grid.size()) {
        throw InvalidArgument("generator field has " + std::to_string(field.size()) + " entries, grid has " +
                              std::to_string(grid.size()) + " cells");
    }
}

}  // namespace

std::shared_ptr<const Generator> build_generator(const Grid& grid, const GeneratorSpec& spec) {
    auto gen = std::make_shared<Generator>();
    gen->grid_ = grid;
    gen->kind_ = spec.kind;
    const auto n = static_cast<Eigen::Index>(grid.size());

    switch (spec.kind) {
        case GeneratorSpec::Kind::multiplication: {
            require_field_size(grid, spec.field);
            gen->eigenvalues_ = Eigen::Map<const Eigen::VectorXd>(spec.field.data(), n);
            return gen;
        }
        case GeneratorSpec::Kind::laplacian:
            gen->matrix_ = periodic_laplacian(grid);
            break;
        case GeneratorSpec::Kind::laplacian_plus_potential: {
            require_field_size(grid, spec.field);
            gen->matrix_ = periodic_laplacian(grid);
            for (Eigen::Index c = 0; c < n; ++c) gen->matrix_(c, c) -= spec.field[static_cast<std::size_t>(c)];
            break;
        }
        case GeneratorSpec::Kind::explicit_hermitian: {
            if (spec.matrix.rows() != n || spec.matrix.cols() != n) {
                throw InvalidArgument("explicit generator matrix does not match the grid size");
            }
            if (hermitian_defect(spec.matrix) >= 1e-10) {
                throw InvalidArgument("explicit generator matrix is not Hermitian");
            }
            gen->matrix_ = spec.matrix;
            break;
        }
    }

    // Symmetrize so the solver sees an exactly Hermitian input.
    const Matrix herm = 0.5 * (gen->matrix_ + gen->matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
    gen->eigenvalues_ = solver.eigenvalues();
    gen->eigenvectors_ = solver.eigenvectors();
    const double spectral_radius = gen->eigenvalues_.cwiseAbs().maxCoeff();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * spectral_radius;
    for (auto& lambda : gen->eigenvalues_) {
        if (std::abs(lambda) <= floor) lambda = 0.0;
    }

    const Matrix rebuilt = gen->eigenvectors_ * gen->eigenvalues_.cast<Complex>().asDiagonal() *
                           gen->eigenvectors_.adjoint();
    const double scale = gen->matrix_.norm();
    gen->residual_ = scale > 0.0 ? (gen->matrix_ - rebuilt).norm() / scale : (gen->matrix_ - rebuilt).norm();
    if (gen->residual_ >= 1e-8) {
        throw std::runtime_error("eigendecomposition residual " + std::to_string(gen->residual_) + " exceeds 1e-8");
    }
    return gen;
}

Matrix Generator::matrix() const {
    if (is_diagonal()) return eigenvalues_.cast<Complex>().asDiagonal();
    return matrix_;
}

Vector Generator::apply_spectral(const Eigen::VectorXcd& f, const Vector& v) const {
    if (is_diagonal()) return f.cwiseProduct(v);
    return eigenvectors_ * f.cwiseProduct(eigenvectors_.adjoint() * v);
}

Matrix Generator::spectral_matrix(const Eigen::VectorXcd& f) const {
    if (is_diagonal()) return f.asDiagonal();
    return eigenvectors_ * f.asDiagonal() * eigenvectors_.adjoint();
}

Semigroup::Semigroup(std::shared_ptr<const Generator> generator, Mode mode)
    : generator_(std::move(generator)), mode_(mode) {
    if (!generator_) throw InvalidArgument("semigroup needs a generator");
}

Eigen::VectorXcd Semigroup::spectral_factor(double t) const {
    if (mode_ == Mode::heat && t < 0.0) {
        throw InvalidArgument("heat semigroup is only defined for t >= 0");
    }
    const auto& lambda = generator_->eigenvalues();
    Eigen::VectorXcd f(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        f[k] = mode_ == Mode::unitary ? std::exp(Complex(0.0, -t * lambda[k])) : Complex(std::exp(t * lambda[k]));
    }
    return f;
}

Matrix Semigroup::propagate(double t) const {
    if (t == 0.0) {
        const auto n = static_cast<Eigen::Index>(grid().size());
        return Matrix::Identity(n, n);
    }
    return generator_->spectral_matrix(spectral_factor(t));
}

Vector Semigroup::apply(double t, const Vector& v) const {
    if (t == 0.0) return v;
    return generator_->apply_spectral(spectral_factor(t), v);
}

StateVector Semigroup::apply(double t, const StateVector& v) const {
    if (!(v.grid() == grid())) throw GridMismatch();
    return StateVector(grid(), apply(t, v.values()));
}

Matrix propagate(const Semigroup& sg, double t) { return sg.propagate(t); }

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()[0];
}

double semigroup_defect(const Semigroup& sg, double t, double s) {
    return operator_norm(sg.propagate(t) * sg.propagate(s) - sg.propagate(t + s));
}

double semigroup_defect(const OperatorFamily& family, double t, double s) {
    return operator_norm(family(t) * family(s) - family(t + s));
}

RandomSemigroup::RandomSemigroup(Grid grid, Mode mode, std::vector<double> parameters, Builder builder)
    : state_(std::make_shared<State>()) {
    if (parameters.empty()) throw InvalidArgument("random semigroup needs a nonempty parameter list");
    state_->grid = std::move(grid);
    state_->mode = mode;
    state_->parameters = std::move(parameters);
    state_->builder = std::move(builder);
    state_->once = std::vector<std::once_flag>(state_->parameters.size());
    state_->members.resize(state_->parameters.size());
}

const Semigroup& RandomSemigroup::member(std::size_t index) const {
    if (index >= size()) throw InvalidArgument("random semigroup member index out of range");
    std::call_once(state_->once[index], [&] {
        auto sg = std::make_unique<Semigroup>(state_->builder(state_->parameters[index]));
        if (!(sg->grid() == state_->grid) || sg->mode() != state_->mode) {
            throw InvalidArgument("family member disagrees with the family grid or mode");
        }
        state_->members[index] = std::move(sg);
    });
    return *state_->members[index];
}

namespace {

double family_param(const FamilySpec& spec, std::size_t i, double fallback) {
    return spec.params.size() > i ? spec.params[i] : fallback;
}

}  // namespace

RandomSemigroup make_family(const Grid& grid, const FamilySpec& spec, std::vector<double> parameters) {
    if (parameters.empty()) throw InvalidArgument("family needs a nonempty parameter list");
    const Mode mode = spec.mode;

    if (spec.family == "scalar_pair") {
        return RandomSemigroup(grid, mode, std::move(parameters), [grid, mode](double eps) {
            return Semigroup(build_generator(grid, GeneratorSpec::multiplication(std::vector<double>(grid.size(), eps))),
                             mode);
        });
    }
    if (spec.family == "oscillating_multiplier") {
        const double amplitude = family_param(spec, 0, 1.0);
        return RandomSemigroup(grid, mode, std::move(parameters), [grid, mode, amplitude](double n) {
            std::vector<double> phi(grid.size());
            for (std::size_t c = 0; c < grid.size(); ++c) {
                phi[c] = amplitude * std::sin(2.0 * std::numbers::pi * n * grid.center(c, 0) / grid.extent());
            }
            return Semigroup(build_generator(grid, GeneratorSpec::multiplication(std::move(phi))), mode);
        });
    }
    if (spec.family == "regularized_potential") {
        const double strength = family_param(spec, 0, 50.0);
        return RandomSemigroup(grid, mode, std::move(parameters), [grid, mode, strength](double eps) {
            std::vector<double> potential(grid.size());
            for (std::size_t c = 0; c < grid.size(); ++c) {
                const double y = grid.center(c, 0) - 0.5 * grid.extent();
                potential[c] = strength * std::sqrt(y * y + eps * eps);
            }
            return Semigroup(build_generator(grid, GeneratorSpec::laplacian_plus_potential(std::move(potential))),
                             mode);
        });
    }
    throw InvalidArgument("unknown family '" + spec.family + "'");
}

}  // namespace pml
