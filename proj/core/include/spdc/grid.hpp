#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spdc {

// Uniform symmetric quadrature grid with trapezoid weights.  One grid serves
// kernels, modes, scans and slit convolutions; positions are dimensionless
// transverse angles (mrad, or mode widths when the basis scale is 1).
struct Grid {
    std::vector<double> points;   // strictly increasing, symmetric about 0
    std::vector<double> weights;  // positive, sum = 2*extent
    double extent = 0.0;          // half-width W of [-W, W]

    std::size_t size() const { return points.size(); }
    double step() const { return points.size() > 1 ? points[1] - points[0] : 0.0; }
};

// Builds the trapezoid grid.  n_points must be odd (so 0 is a sample point)
// and >= 3; extent must be positive.  Throws std::invalid_argument.
Grid make_grid(double extent, int n_points);

// Discrete inner product  sum_i conj(f_i) g_i w_i.  Lengths must match the
// grid; throws std::invalid_argument on mismatch.
std::complex<double> inner_product(std::span<const std::complex<double>> f,
                                   std::span<const std::complex<double>> g,
                                   const Grid& grid);
double inner_product(std::span<const double> f, std::span<const double> g,
                     const Grid& grid);

// L2 norm under the grid measure.
double grid_norm(std::span<const double> f, const Grid& grid);

}  // namespace spdc
