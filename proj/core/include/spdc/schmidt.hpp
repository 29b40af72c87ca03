#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "spdc/kernel.hpp"

namespace spdc {

// Discretization of a two-photon kernel and its Schmidt decomposition by SVD.
//
// The kernel K(x, y) is sampled as M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j);
// with this weight-symmetrization the singular vectors of M map back to
// L2-orthonormal sampled modes u_k(x_i) = v_ki / sqrt(w_i).

struct DiscretizedKernel {
    Eigen::MatrixXd matrix;  // N x N (dims = 1) or N^2 x N^2 (dims = 2)
    Grid grid;               // per-axis grid
    int dims = 1;
};

// 2D composite index (ix, iy) -> ix * N + iy; weights are products.
std::vector<double> quadrature_weights(const Grid& grid, int dims);

// Throws NumericalError on non-finite kernel values.
DiscretizedKernel discretize_1d(const Kernel1D& kernel, const Grid& grid);
DiscretizedKernel discretize_2d(const Kernel2D& kernel, const Grid& grid);

struct SchmidtDecomposition {
    // Full spectrum, descending, normalized to sum 1.
    std::vector<double> eigenvalues;
    // Retained modes as columns, weight-desymmetrized, orthonormal under the
    // grid inner product.  Sign fixed so the first entry with |u| > 1e-6 is
    // positive.
    Eigen::MatrixXd modes;
    Grid grid;
    int dims = 1;
    std::size_t truncation_count = 0;  // columns of `modes`
    double residual = 0.0;             // eigenvalue weight beyond the retained modes
};

// SVD of the discretized kernel; squared singular values, normalized to unit
// sum, are the Schmidt eigenvalues.  Modes are retained until the cumulative
// eigenvalue reaches 1 - truncation_tol.  truncation_tol must lie in (0, 1).
// Throws NumericalError for an all-zero kernel.
SchmidtDecomposition decompose(const DiscretizedKernel& dk, double truncation_tol = 1e-6);

struct SchmidtNumber {
    double value = 1.0;        // 1 / sum(lambda^2) over the full spectrum
    double upper_bound = 1.0;  // same with the residual treated as zero weight
};

// Effective mode count K = 1 / sum_k lambda_k^2.  Throws on empty spectrum.
SchmidtNumber schmidt_number(const SchmidtDecomposition& d);

// Uhlmann fidelity of two diagonal spectra, sum_k sqrt(a_k b_k), paired by
// index; the shorter list is zero-padded.  Inputs must be non-negative and
// sum to 1 within 1e-6 (they are renormalized); else std::invalid_argument.
double fidelity(std::span<const double> spec_a, std::span<const double> spec_b);

// Overlap table |<psi_n | u_k>|^2 between analytic basis modes (rows,
// n = 0..max_order) and retained numerical modes (columns).  1D only.
// Throws std::invalid_argument if the grid truncates the basis modes
// (mode norm on grid < 0.999).
Eigen::MatrixXd mode_overlap_matrix(const SchmidtDecomposition& d,
                                    const HGBasis& basis, int max_order);

// Grid sized in units of the basis mode width: extent_scaled mode-widths on
// each side, converted to the kernel's angular units.
Grid scaled_grid(const HGBasis& basis, double extent_scaled, int n_points);

}  // namespace spdc
