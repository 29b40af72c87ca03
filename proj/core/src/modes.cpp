#include "spdc/modes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdc {

namespace {
const double kPiQuarterInv = std::pow(M_PI, -0.25);

void check_order(int n) {
    if (n < 0 || n > kMaxModeOrder) {
        throw std::invalid_argument("mode order " + std::to_string(n) +
                                    " outside [0, " + std::to_string(kMaxModeOrder) + "]");
    }
}
}  // namespace

double hermite_poly(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_poly: n must be >= 0");
    if (n == 0) return 1.0;
    if (n == 1) return 2.0 * x;
    double h_prev = 1.0;
    double h_cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double h_next = 2.0 * x * h_cur - 2.0 * k * h_prev;
        h_prev = h_cur;
        h_cur = h_next;
    }
    return h_cur;
}

double hg_function(int n, double x) {
    check_order(n);
    // Normalized recurrence: phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1}.
    // Keeps every intermediate O(1), no factorials.
    const double phi0 = kPiQuarterInv * std::exp(-0.5 * x * x);
    if (n == 0) return phi0;
    double phi_prev = phi0;
    double phi_cur = std::sqrt(2.0) * x * phi0;
    for (int k = 1; k < n; ++k) {
        const double phi_next = std::sqrt(2.0 / (k + 1)) * x * phi_cur -
                                std::sqrt(static_cast<double>(k) / (k + 1)) * phi_prev;
        phi_prev = phi_cur;
        phi_cur = phi_next;
    }
    return phi_cur;
}

HGBasis HGBasis::from_scale(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("HGBasis: scale must be positive");
    return HGBasis{s, std::sqrt(s)};
}

HGBasis HGBasis::from_widths(double pump_divergence, double phase_matching_width) {
    if (!(pump_divergence > 0.0) || !(phase_matching_width > 0.0)) {
        throw std::invalid_argument("HGBasis: widths must be positive");
    }
    return from_scale(std::sqrt(2.0 / (pump_divergence * phase_matching_width)));
}

double schmidt_mode(const HGBasis& basis, int n, double k) {
    return basis.norm_prefactor * hg_function(n, basis.scale * k);
}

std::vector<double> hg_profile(int n, const Grid& grid) {
    check_order(n);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = hg_function(n, grid.points[i]);
    return out;
}

std::vector<double> schmidt_mode_profile(const HGBasis& basis, int n, const Grid& grid) {
    check_order(n);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = schmidt_mode(basis, n, grid.points[i]);
    }
    return out;
}

}  // namespace spdc
