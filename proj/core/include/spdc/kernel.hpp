#pragma once

#include <functional>
#include <optional>

#include "spdc/modes.hpp"

namespace spdc {

// Two-photon transverse-momentum amplitudes for collinear degenerate type-I
// SPDC, in small-angle coordinates q = k_perp / k_signal expressed in mrad.
// Two kernels are provided: the exact Gaussian-pump * sinc phase-matching
// amplitude, and its double-Gaussian approximation whose Schmidt data is
// known in closed form.

struct OpticalParams {
    double pump_divergence_mrad = 5.8;       // Gaussian width of the pump angular spectrum
    double phase_matching_width_mrad = 20.0; // Gaussian width approximating the sinc factor
    double crystal_length_m = 2.0e-3;
    double pump_wavelength_m = 325.0e-9;
    // Prefactor of |q1 - q2|^2 inside the sinc, in mrad^-2.  When unset it is
    // derived from the crystal length and pump wavevector (see c_sinc()).
    std::optional<double> sinc_coefficient;

    // Throws std::invalid_argument unless all widths/lengths are positive.
    void validate() const;

    // sinc prefactor: override if present, else L * k_p / 16 converted to
    // mrad^-2 (collinear degenerate phase matching, theta = 2 k_perp / k_p).
    double c_sinc() const;
};

// sin(x)/x with sinc(0) = 1.
double sinc(double x);

// Un-normalized double-Gaussian amplitude
//   exp(-|q1+q2|^2 / 2a^2) * exp(-|q1-q2|^2 / 2b^2).
double double_gaussian_amplitude(const OpticalParams& p, double q1x, double q1y,
                                 double q2x, double q2y);

// Un-normalized exact amplitude
//   exp(-|q1+q2|^2 / 2a^2) * sinc(c_sinc * |q1-q2|^2).
double exact_amplitude(const OpticalParams& p, double q1x, double q1y,
                       double q2x, double q2y);

// Closed-form Schmidt eigenvalue of the 1D double-Gaussian kernel,
//   lambda_n = 4ab (a-b)^{2n} / (a+b)^{2(n+1)},  sum_n lambda_n = 1.
double analytic_eigenvalue(const OpticalParams& p, int n);

// Per-axis Schmidt number of the double-Gaussian model,
//   K_x = K_y = (a^2 + b^2) / (2ab);  the full 2D value is K_x^2.
double schmidt_number_analytic(const OpticalParams& p);

// Gaussian width b minimizing the L2 distance between sinc(c u^2) and
// exp(-u^2 / 2b^2) over u in [0, first sinc zero].  Deterministic
// golden-section search; throws NumericalError if it fails to converge.
double fit_gaussian_width_to_sinc(const OpticalParams& p);

// Callable kernel views consumed by the schmidt / measurement / ghost layers.
using Kernel1D = std::function<double(double, double)>;
using Kernel2D = std::function<double(double, double, double, double)>;

// A full transverse kernel plus, when it factorizes per axis, the 1D factor.
// The separable fast paths (products of per-axis quadratures) key off `axis`.
struct TwoPhotonKernel {
    Kernel2D fn;
    std::optional<Kernel1D> axis;
    bool separable() const { return axis.has_value(); }
};

Kernel1D double_gaussian_kernel_1d(const OpticalParams& p);
Kernel1D exact_kernel_1d(const OpticalParams& p);
TwoPhotonKernel make_double_gaussian_kernel(const OpticalParams& p);
TwoPhotonKernel make_exact_kernel(const OpticalParams& p);

}  // namespace spdc
