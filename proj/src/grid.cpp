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

#include "pml/grid.hpp"

#include <cmath>
#include <string>

namespace pml {

double Grid::center(std::size_t cell, int axis) const {
    std::size_t index = cell;
    if (dim_ == 2) {
        const auto n = static_cast<std::size_t>(cells_per_axis_);
        index = axis == 0 ? cell / n : cell % n;
    }
    return (static_cast<double>(index) + 0.5) * spacing_;
}

Grid make_grid(int dim, int cells_per_axis, double extent) {
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (cells_per_axis < 2) {
        throw InvalidArgument("cells_per_axis must be >= 2, got " + std::to_string(cells_per_axis));
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw InvalidArgument("grid extent must be positive");
    }
    Grid g;
    g.dim_ = dim;
    g.cells_per_axis_ = cells_per_axis;
    g.extent_ = extent;
    g.spacing_ = extent / cells_per_axis;
    g.cell_volume_ = std::pow(g.spacing_, dim);
    g.size_ = static_cast<std::size_t>(cells_per_axis);
    if (dim == 2) g.size_ *= static_cast<std::size_t>(cells_per_axis);
    return g;
}

Grid make_scalar_grid(double extent) {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw InvalidArgument("grid extent must be positive");
    }
    Grid g;
    g.dim_ = 1;
    g.cells_per_axis_ = 1;
    g.extent_ = extent;
    g.spacing_ = extent;
    g.cell_volume_ = extent;
    g.size_ = 1;
    return g;
}

BaseSet::BaseSet(const Grid& grid) : grid_(grid), mask_(grid.size(), false) {}

BaseSet::BaseSet(const Grid& grid, const std::vector<std::size_t>& cells) : BaseSet(grid) {
    for (auto c : cells) {
        if (c >= grid.size()) {
            throw InvalidArgument("cell index " + std::to_string(c) + " out of range");
        }
        mask_[c] = true;
    }
}

BaseSet BaseSet::full(const Grid& grid) {
    BaseSet b(grid);
    b.mask_.assign(grid.size(), true);
    return b;
}

BaseSet BaseSet::interval(const Grid& grid, double lo, double hi) {
    BaseSet b(grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const double x = grid.center(c, 0);
        b.mask_[c] = x >= lo && x < hi;
    }
    return b;
}

std::size_t BaseSet::count() const {
    std::size_t n = 0;
    for (bool bit : mask_) n += bit ? 1 : 0;
    return n;
}

std::vector<std::size_t> BaseSet::cells() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < mask_.size(); ++c) {
        if (mask_[c]) out.push_back(c);
    }
    return out;
}

BaseSet BaseSet::complement() const {
    BaseSet b(*this);
    b.mask_.flip();
    return b;
}

void BaseSet::require_same_grid(const BaseSet& other) const {
    if (!(grid_ == other.grid_)) throw GridMismatch();
}

BaseSet BaseSet::operator&(const BaseSet& other) const {
    require_same_grid(other);
    BaseSet b(grid_);
    for (std::size_t c = 0; c < mask_.size(); ++c) b.mask_[c] = mask_[c] && other.mask_[c];
    return b;
}

BaseSet BaseSet::operator|(const BaseSet& other) const {
    require_same_grid(other);
    BaseSet b(grid_);
    for (std::size_t c = 0; c < mask_.size(); ++c) b.mask_[c] = mask_[c] || other.mask_[c];
    return b;
}

BaseSet BaseSet::operator-(const BaseSet& other) const {
    require_same_grid(other);
    BaseSet b(grid_);
    for (std::size_t c = 0; c < mask_.size(); ++c) b.mask_[c] = mask_[c] && !other.mask_[c];
    return b;
}

StateVector::StateVector(const Grid& grid)
    : grid_(grid), values_(Vector::Zero(static_cast<Eigen::Index>(grid.size()))) {}

StateVector::StateVector(const Grid& grid, Vector values) : grid_(grid), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid.size()) {
        throw InvalidArgument("state vector length does not match the grid");
    }
}

StateVector::StateVector(const Grid& grid, std::initializer_list<Complex> values)
    : StateVector(grid, Eigen::Map<const Vector>(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

double StateVector::norm() const { return std::sqrt(grid_.cell_volume()) * values_.norm(); }

StateVector StateVector::operator+(const StateVector& other) const {
    if (!(grid_ == other.grid_)) throw GridMismatch();
    return StateVector(grid_, values_ + other.values_);
}

StateVector StateVector::operator-(const StateVector& other) const {
    if (!(grid_ == other.grid_)) throw GridMismatch();
    return StateVector(grid_, values_ - other.values_);
}

StateVector StateVector::operator*(Complex scale) const { return StateVector(grid_, values_ * scale); }

StateVector indicator(const BaseSet& base) {
    StateVector v(base.grid());
    for (std::size_t c = 0; c < base.grid().size(); ++c) {
        if (base.contains(c)) v.values()[static_cast<Eigen::Index>(c)] = 1.0;
    }
    return v;
}

Complex inner(const Grid& grid, const Vector& u, const Vector& v) {
    // Eigen's dot() conjugates its left operand.
    return grid.cell_volume() * v.dot(u);
}

Complex inner(const StateVector& u, const StateVector& v) {
    if (!(u.grid() == v.grid())) throw GridMismatch();
    return inner(u.grid(), u.values(), v.values());
}

double lebesgue(const BaseSet& base) {
    return base.grid().cell_volume() * static_cast<double>(base.count());
}

StateVector project(const BaseSet& base, const StateVector& v) {
    if (!(base.grid() == v.grid())) throw GridMismatch();
    StateVector out(v.grid());
    for (std::size_t c = 0; c < v.grid().size(); ++c) {
        if (base.contains(c)) out.values()[static_cast<Eigen::Index>(c)] = v[c];
    }
    return out;
}

BaseSet refine_base(const BaseSet& base) {
    const Grid& coarse = base.grid();
    const Grid fine = make_grid(coarse.dim(), 2 * coarse.cells_per_axis(), coarse.extent());
    const auto n = static_cast<std::size_t>(coarse.cells_per_axis());
    std::vector<std::size_t> cells;
    for (auto c : base.cells()) {
        if (coarse.dim() == 1) {
            cells.push_back(2 * c);
            cells.push_back(2 * c + 1);
        } else {
            const std::size_t i = c / n, j = c % n;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) cells.push_back((2 * i + a) * 2 * n + 2 * j + b);
            }
        }
    }
    return BaseSet(fine, cells);
}

Matrix projector(const BaseSet& base) {
    const auto n = static_cast<Eigen::Index>(base.grid().size());
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        if (base.contains(static_cast<std::size_t>(c))) p(c, c) = 1.0;
    }
    return p;
}

}  // namespace pml
