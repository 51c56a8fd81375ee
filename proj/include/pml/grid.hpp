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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "pml/error.hpp"

namespace pml {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Uniform periodic grid on the box [0, extent)^dim.
///
/// Cells are indexed in row-major order; for dim == 2 the flat index of
/// cell (i, j) is i * cells_per_axis + j, with i along axis 0.
class Grid {
public:
    Grid() = default;

    int dim() const { return dim_; }
    int cells_per_axis() const { return cells_per_axis_; }
    double extent() const { return extent_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return size_; }

    /// Volume of one cell, h^d.
    double cell_volume() const { return cell_volume_; }

    /// Coordinate of the cell center along `axis`.
    double center(std::size_t cell, int axis = 0) const;

    bool operator==(const Grid& other) const = default;

private:
    friend Grid make_grid(int dim, int cells_per_axis, double extent);
    friend Grid make_scalar_grid(double extent);

    int dim_ = 1;
    int cells_per_axis_ = 1;
    double extent_ = 1.0;
    double spacing_ = 1.0;
    double cell_volume_ = 1.0;
    std::size_t size_ = 1;
};

/// Throws InvalidArgument unless dim is 1 or 2, cells_per_axis >= 2 and
/// extent > 0.
Grid make_grid(int dim, int cells_per_axis, double extent);

/// One-cell grid carrying a one-dimensional Hilbert space C. Used for the
/// scalar semigroups e^{-i eps t}.
Grid make_scalar_grid(double extent = 1.0);

/// A subset of grid cells, standing in for a bounded Borel set.
class BaseSet {
public:
    BaseSet() = default;
    explicit BaseSet(const Grid& grid);
    BaseSet(const Grid& grid, const std::vector<std::size_t>& cells);

    static BaseSet empty(const Grid& grid) { return BaseSet(grid); }
    static BaseSet full(const Grid& grid);
    /// Cells whose centers lie in [lo, hi) along axis 0.
    static BaseSet interval(const Grid& grid, double lo, double hi);

    const Grid& grid() const { return grid_; }
    bool contains(std::size_t cell) const { return mask_[cell]; }
    std::size_t count() const;
    bool is_empty() const { return count() == 0; }
    bool is_full() const { return count() == grid_.size(); }
    std::vector<std::size_t> cells() const;
    const std::vector<bool>& mask() const { return mask_; }

    BaseSet complement() const;
    BaseSet operator&(const BaseSet& other) const;
    BaseSet operator|(const BaseSet& other) const;
    /// Set difference this \ other.
    BaseSet operator-(const BaseSet& other) const;

    bool operator==(const BaseSet& other) const = default;
    bool operator<(const BaseSet& other) const { return mask_ < other.mask_; }

private:
    void require_same_grid(const BaseSet& other) const;

    Grid grid_;
    std::vector<bool> mask_;
};

/// Element of the discretized L2 space: one complex amplitude per cell.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(const Grid& grid);
    StateVector(const Grid& grid, Vector values);
    StateVector(const Grid& grid, std::initializer_list<Complex> values);

    const Grid& grid() const { return grid_; }
    const Vector& values() const { return values_; }
    Vector& values() { return values_; }
    Complex operator[](std::size_t cell) const { return values_[static_cast<Eigen::Index>(cell)]; }

    /// Norm induced by the volume-weighted inner product.
    double norm() const;

    StateVector operator+(const StateVector& other) const;
    StateVector operator-(const StateVector& other) const;
    StateVector operator*(Complex scale) const;

private:
    Grid grid_;
    Vector values_;
};

StateVector indicator(const BaseSet& base);

/// h^d * sum_k u_k conj(v_k); linear in u, conjugate-linear in v.
Complex inner(const StateVector& u, const StateVector& v);

/// Raw coefficient form of `inner` for vectors already known to live on `grid`.
Complex inner(const Grid& grid, const Vector& u, const Vector& v);

double lebesgue(const BaseSet& base);

StateVector project(const BaseSet& base, const StateVector& v);

/// The same region on the grid with twice as many cells per axis.
BaseSet refine_base(const BaseSet& base);

/// Diagonal matrix of the orthogonal projector onto functions supported on `base`.
Matrix projector(const BaseSet& base);

}  // namespace pml
