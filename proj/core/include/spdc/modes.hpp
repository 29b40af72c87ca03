#pragma once

#include <vector>

#include "spdc/grid.hpp"

namespace spdc {

// Hermite-Gaussian mode machinery: physicists' Hermite polynomials H_n, the
// L2-normalized functions phi_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x),
// and the scaled Schmidt-basis modes psi_n(k) = sqrt(s) phi_n(s k).

// Highest supported mode order; evaluation uses a normalized recurrence, so
// the limit is a sanity cap rather than an overflow bound.
inline constexpr int kMaxModeOrder = 64;

// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
double hermite_poly(int n, double x);

// Normalized Hermite-Gaussian function phi_n(x).  Throws std::invalid_argument
// for n < 0 or n > kMaxModeOrder.
double hg_function(int n, double x);

// Cartesian mode labels (n: x index, m: y index), both non-negative.
struct ModeIndex {
    int n = 0;
    int m = 0;
    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// Argument scaling of the Schmidt basis.  For the double-Gaussian model the
// scale is sqrt(2/(a b)) per transverse axis, and the mode functions are
// psi_n(k) = norm_prefactor * phi_n(scale * k),  norm_prefactor = sqrt(scale).
struct HGBasis {
    double scale = 1.0;
    double norm_prefactor = 1.0;

    static HGBasis from_scale(double s);
    // a = pump divergence, b = phase-matching width, both in mrad.
    static HGBasis from_widths(double pump_divergence, double phase_matching_width);
};

// psi_n(k), L2-normalized in k.
double schmidt_mode(const HGBasis& basis, int n, double k);

// Sampled profiles on a grid.
std::vector<double> hg_profile(int n, const Grid& grid);
std::vector<double> schmidt_mode_profile(const HGBasis& basis, int n, const Grid& grid);

}  // namespace spdc
