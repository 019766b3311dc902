#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "opwave/errors.hpp"

namespace opwave {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Validated dilation matrix D = a*R (a > 1, R orthogonal) together with the
// derived lattice data: |det D|, coset representatives of Z^d / D Z^d, and
// dual-lattice generators 2*pi*(D^T)^{-j}.
class DilationMatrix {
public:
    static DilationMatrix from_integer_matrix(const IntMatrix& m);

    // Named catalog matrices: "2I", "3I" (any "aI" with a >= 2), "quincunx".
    static DilationMatrix named(const std::string& name, int dim = 2);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const IntMatrix& entries() const { return entries_; }
    double scale() const { return a_; }
    const Eigen::MatrixXd& rotation() const { return rotation_; }
    std::int64_t det_abs() const { return det_abs_; }

    // Coset representatives of Z^d modulo D*Z^d, lexicographically ordered,
    // first entry is the zero vector. For D = a*R the lattices D*Z^d and
    // D^T*Z^d coincide, so the same list serves both spatial and frequency
    // constructs; this identity is verified at construction.
    const std::vector<IntVector>& cosets() const { return cosets_; }

    // Smallest n >= 1 with D^n = a^n * I.
    int period_exponent() const { return period_exponent_; }

    // Generator of the dual lattice at scale j: B_j = 2*pi*(D^T)^{-j}.
    Eigen::MatrixXd dual_basis(int j) const;

    // |B_j k| = dual_scale(j) * |k| for integer k, since B_j is a scaled
    // rotation. dual_scale(j) = 2*pi*a^{-j}.
    double dual_scale(int j) const;

    // D^j as a dense matrix (j of either sign).
    Eigen::MatrixXd matrix_power(int j) const;

    // Coordinates u with omega = B_j u; lattice translates of omega differ
    // from u by integer vectors.
    Eigen::VectorXd to_dual_coords(int j, const Eigen::VectorXd& omega) const;

    // Maps omega into the fundamental cell B_j*[-1/2,1/2)^d.
    Eigen::VectorXd wrap_to_cell(int j, const Eigen::VectorXd& omega) const;

    // Exact membership test: v in D^s * Z^d (s >= 0).
    bool lattice_contains(int s, const IntVector& v) const;

    std::string description() const { return description_; }

private:
    DilationMatrix() = default;

    IntMatrix entries_;
    double a_ = 0.0;
    Eigen::MatrixXd rotation_;
    std::int64_t det_abs_ = 0;
    std::vector<IntVector> cosets_;
    int period_exponent_ = 0;
    Eigen::MatrixXd inv_transpose_; // (D^T)^{-1}
    std::string description_;
};

// Uniform sampling of one fundamental domain of the scale-j dual lattice,
// parameterized over the parallelepiped B_j*[-1/2,1/2)^d with N samples per
// dimension. With the half-sample offset (default), no sample lies on the
// dual lattice itself or on any measure-zero set symmetric about it.
class FrequencyGrid {
public:
    FrequencyGrid(const DilationMatrix& d, int j, int n, bool use_offset = true);

    const DilationMatrix& dilation() const { return dilation_; }
    int scale() const { return j_; }
    int samples_per_dim() const { return n_; }
    bool offset() const { return offset_; }
    int dim() const { return dilation_.dim(); }

    std::size_t size() const { return total_; }

    // Parameter coordinates in [-1/2, 1/2)^d for the flat row-major index.
    Eigen::VectorXd t_coord(std::size_t flat) const;
    Eigen::VectorXd point(std::size_t flat) const;

    // Quadrature weight of one cell: (2*pi)^d |det D|^{-j} / N^d.
    double cell_volume() const;

    std::vector<int> multi_index(std::size_t flat) const;

private:
    DilationMatrix dilation_;
    int j_;
    int n_;
    bool offset_;
    std::size_t total_;
    Eigen::MatrixXd basis_; // B_j
};

} // namespace opwave
