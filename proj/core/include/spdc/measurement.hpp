#pragma once

#include <complex>
#include <cstdint>

#include "spdc/schmidt.hpp"

namespace spdc {

// Projective measurements in the Hermite-Gaussian basis: mode-pair
// coincidence rates, single-arm rates, visibility, fiber-tip scans and
// Poissonian count records.

// Rates for mode pairs ((n,m),(p,q)) with all indices <= max_order.  Entries
// are |projection coefficient|^2 of the unit-normalized kernel; row/column
// flattening is idx = n * (max_order + 1) + m.
struct CoincidenceMatrix {
    int max_order = 0;
    Eigen::MatrixXd entries;
    double normalization = 0.0;  // raw ((0,0),(0,0)) entry

    int mode_count() const { return (max_order + 1) * (max_order + 1); }
    int flat(ModeIndex mu) const { return mu.n * (max_order + 1) + mu.m; }
    double rate(ModeIndex arm1, ModeIndex arm2) const { return entries(flat(arm1), flat(arm2)); }
};

// One detector record: expected relative rate and a sampled count.
struct CountRecord {
    ModeIndex mode;
    double expected_rate = 0.0;
    std::uint64_t sampled_counts = 0;
    double acquisition = 0.0;  // total-count scale the rate was multiplied by
    std::uint64_t seed = 0;
};

// Caches the discretized, unit-normalized kernel so a whole coincidence
// matrix costs one discretization.  Separable kernels use per-axis 1D
// quadratures; non-separable ones the direct N^2 x N^2 form.
class Projector {
public:
    Projector(const TwoPhotonKernel& kernel, const HGBasis& basis, const Grid& grid);

    // <psi_arm1 (x) psi_arm2 | Psi>, the amplitude of finding the photon pair
    // in the given mode pair.  Real kernels give real coefficients; the
    // imaginary part is kept for interface generality.
    std::complex<double> coefficient(ModeIndex arm1, ModeIndex arm2) const;

    const Grid& grid() const { return grid_; }
    // Unit-Frobenius weight-symmetrized kernel matrix (1D per-axis when the
    // kernel is separable, full N^2 x N^2 otherwise).
    const Eigen::MatrixXd& normalized_kernel() const { return normalized_; }
    bool separable() const { return separable_; }

private:
    double axis_coefficient(int n, int p) const;

    HGBasis basis_;
    Grid grid_;
    bool separable_ = false;
    Eigen::MatrixXd normalized_;            // 1D (N x N) or 2D (N^2 x N^2) matrix
    std::vector<double> sqrt_weights_;      // per-axis sqrt(w_i)
};

// One-off form of Projector::coefficient.
std::complex<double> projection_coefficient(const TwoPhotonKernel& kernel,
                                            const HGBasis& basis, ModeIndex arm1,
                                            ModeIndex arm2, const Grid& grid);

CoincidenceMatrix coincidence_matrix(const TwoPhotonKernel& kernel, const HGBasis& basis,
                                     int max_order, const Grid& grid);

// Single-arm rate of mode (n,m) from a 2D decomposition:
//   R = sum_k lambda_k |<psi_mode | u_k>|^2.
// Throws std::invalid_argument when the grid truncates the mode.
double singles_rate(const SchmidtDecomposition& d, ModeIndex mode, const HGBasis& basis);

// (max - min) / (max + min); requires max >= min >= 0 and max > 0.
double visibility(double rate_max, double rate_min);

// Suppression contrast of one coincidence row: visibility between the
// expected partner entry and the largest other entry.
double worst_case_visibility(const Eigen::VectorXd& row, int partner_index);

// Count rate |<G_x | psi_n>|^2 for a fiber whose mode is a displaced Gaussian
// matched to the zeroth Schmidt mode; `mismatch` scales the fiber mode width.
double fiber_scan(int mode_n, const HGBasis& basis, double displacement,
                  const Grid& grid, double mismatch = 1.0);

// Poisson draw with mean expected_rate * scale (deterministic per seed).
std::uint64_t sample_counts(double expected_rate, double scale, std::uint64_t seed);

}  // namespace spdc
