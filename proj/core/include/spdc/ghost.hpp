#pragma once

#include "spdc/measurement.hpp"

namespace spdc {

// Ghost-imaging simulation: conditional mode of the unheralded photon, bucket
// detection behind a finite slit, and Hermite-Gaussian profile fits.

struct SlitScanResult {
    std::vector<double> positions;  // slit centers, strictly increasing, grid units
    std::vector<double> rates;      // non-negative coincidence rates
    double slit_width = 0.0;        // same units as positions
    ModeIndex herald;
};

// Normalized conditional amplitude of photon 2 after projecting photon 1 on
// the herald mode:  psi_c(q2) ~ integral Psi(q1, q2) psi_herald(q1) dq1.
// dims follow the kernel: length N^2 (row-major (ix, iy)) for a full kernel,
// product of the two 1D conditionals for a separable one.  Throws
// NumericalError when the herald is orthogonal to the kernel support.
Eigen::VectorXd heralded_amplitude(const TwoPhotonKernel& kernel, ModeIndex herald,
                                   const HGBasis& basis, const Grid& grid);

// 1D building block used per axis.
Eigen::VectorXd heralded_amplitude_1d(const Kernel1D& kernel, int herald_n,
                                      const HGBasis& basis, const Grid& grid);

// Marginal intensity along x of a flattened 2D field: I(x_i) = sum_j |f_ij|^2 w_j.
std::vector<double> marginal_intensity_x(const Eigen::VectorXd& field2d, const Grid& grid);

// Rates through a slit of the given width centered at each position:
//   rate(x) = integral over [x - w/2, x + w/2] of the sampled intensity
// (piecewise-linear interpolation; zero width returns pointwise intensity).
// Every slit footprint must stay inside the grid.
SlitScanResult slit_scan(std::span<const double> intensity, const Grid& grid,
                         double slit_width, std::span<const double> positions,
                         ModeIndex herald = {});

struct HGFit {
    double scale = 1.0;      // fitted width s of |phi_n(x / s)|^2
    double amplitude = 0.0;  // closed-form linear amplitude
    double goodness = 0.0;   // residual 2-norm (smaller is better)
};

// Least-squares fit of A * |phi_n(x/s)|^2 to scan rates: golden-section over
// the scale with the amplitude solved in closed form.  Needs >= 5 points and
// a nonzero scan; throws std::invalid_argument / NumericalError otherwise.
HGFit fit_hg_profile(const SlitScanResult& scan, int n);

}  // namespace spdc
