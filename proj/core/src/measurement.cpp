#include "spdc/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"
#include "spdc/random.hpp"

namespace spdc {

namespace {

// Column of weighted samples sqrt(w_i) psi_n(x_i); bilinear forms of the
// weight-symmetrized kernel against these realize the continuous projections.
Eigen::VectorXd weighted_mode_1d(const HGBasis& basis, int n, const Grid& grid) {
    const auto size = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        v[i] = schmidt_mode(basis, n, grid.points[i]) * std::sqrt(grid.weights[i]);
    }
    return v;
}

Eigen::MatrixXd weighted_mode_table(const HGBasis& basis, int max_order, const Grid& grid) {
    const auto size = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd table(size, max_order + 1);
    for (int n = 0; n <= max_order; ++n) table.col(n) = weighted_mode_1d(basis, n, grid);
    return table;
}

void check_mode_coverage(const HGBasis& basis, int n, const Grid& grid) {
    const std::vector<double> psi = schmidt_mode_profile(basis, n, grid);
    if (grid_norm(psi, grid) < 0.999) {
        throw std::invalid_argument("grid too small for mode order " + std::to_string(n));
    }
}

}  // namespace

Projector::Projector(const TwoPhotonKernel& kernel, const HGBasis& basis, const Grid& grid)
    : basis_(basis), grid_(grid), separable_(kernel.separable()) {
    sqrt_weights_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sqrt_weights_[i] = std::sqrt(grid.weights[i]);

    DiscretizedKernel dk = separable_ ? discretize_1d(*kernel.axis, grid)
                                      : discretize_2d(kernel.fn, grid);
    const double frobenius = dk.matrix.norm();
    if (!(frobenius > 0.0)) throw NumericalError("Projector: kernel has zero norm");
    // Unit L2 norm of the amplitude; for a separable kernel the per-axis
    // normalization squares to the full 2D one.
    normalized_ = dk.matrix / frobenius;
}

double Projector::axis_coefficient(int n, int p) const {
    const Eigen::VectorXd u = weighted_mode_1d(basis_, n, grid_);
    const Eigen::VectorXd v = weighted_mode_1d(basis_, p, grid_);
    return u.dot(normalized_ * v);
}

std::complex<double> Projector::coefficient(ModeIndex arm1, ModeIndex arm2) const {
    check_mode_coverage(basis_, std::max(arm1.n, arm1.m), grid_);
    check_mode_coverage(basis_, std::max(arm2.n, arm2.m), grid_);
    if (separable_) {
        return {axis_coefficient(arm1.n, arm2.n) * axis_coefficient(arm1.m, arm2.m), 0.0};
    }
    const auto size = static_cast<Eigen::Index>(grid_.size());
    const Eigen::VectorXd u1 = weighted_mode_1d(basis_, arm1.n, grid_);
    const Eigen::VectorXd v1 = weighted_mode_1d(basis_, arm1.m, grid_);
    const Eigen::VectorXd u2 = weighted_mode_1d(basis_, arm2.n, grid_);
    const Eigen::VectorXd v2 = weighted_mode_1d(basis_, arm2.m, grid_);
    Eigen::VectorXd w1(size * size), w2(size * size);
    for (Eigen::Index i = 0; i < size; ++i) {
        w1.segment(i * size, size) = u1[i] * v1;
        w2.segment(i * size, size) = u2[i] * v2;
    }
    return {w1.dot(normalized_ * w2), 0.0};
}

std::complex<double> projection_coefficient(const TwoPhotonKernel& kernel,
                                            const HGBasis& basis, ModeIndex arm1,
                                            ModeIndex arm2, const Grid& grid) {
    return Projector(kernel, basis, grid).coefficient(arm1, arm2);
}

CoincidenceMatrix coincidence_matrix(const TwoPhotonKernel& kernel, const HGBasis& basis,
                                     int max_order, const Grid& grid) {
    if (max_order < 0 || max_order > kMaxModeOrder) {
        throw std::invalid_argument("coincidence_matrix: bad max_order");
    }
    check_mode_coverage(basis, max_order, grid);
    const Projector projector(kernel, basis, grid);
    const int orders = max_order + 1;
    const int modes = orders * orders;

    CoincidenceMatrix cm;
    cm.max_order = max_order;
    cm.entries.resize(modes, modes);

    if (kernel.separable()) {
        // Per-axis coefficient table in one pass, then products.
        const Eigen::MatrixXd table = weighted_mode_table(basis, max_order, grid);
        const Eigen::MatrixXd axis =
            table.transpose() * (projector.normalized_kernel() * table);
        for (int n = 0; n < orders; ++n)
            for (int m = 0; m < orders; ++m)
                for (int p = 0; p < orders; ++p)
                    for (int q = 0; q < orders; ++q) {
                        const double c = axis(n, p) * axis(m, q);
                        cm.entries(n * orders + m, p * orders + q) = c * c;
                    }
    } else {
        const auto size = static_cast<Eigen::Index>(grid.size());
        const Eigen::MatrixXd table = weighted_mode_table(basis, max_order, grid);
        Eigen::MatrixXd product_modes(size * size, modes);
        for (int n = 0; n < orders; ++n) {
            for (int m = 0; m < orders; ++m) {
                for (Eigen::Index i = 0; i < size; ++i) {
                    product_modes.col(n * orders + m).segment(i * size, size) =
                        table(i, n) * table.col(m);
                }
            }
        }
        const Eigen::MatrixXd coeffs =
            product_modes.transpose() * (projector.normalized_kernel() * product_modes);
        cm.entries = coeffs.array().square();
    }
    cm.normalization = cm.entries(0, 0);
    return cm;
}

double singles_rate(const SchmidtDecomposition& d, ModeIndex mode, const HGBasis& basis) {
    if (d.dims != 2) throw std::invalid_argument("singles_rate: 2D decomposition required");
    check_mode_coverage(basis, std::max(mode.n, mode.m), d.grid);

    const auto size = static_cast<Eigen::Index>(d.grid.size());
    const std::vector<double> psi_x = schmidt_mode_profile(basis, mode.n, d.grid);
    const std::vector<double> psi_y = schmidt_mode_profile(basis, mode.m, d.grid);
    Eigen::VectorXd weighted(size * size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            weighted[i * size + j] = psi_x[static_cast<std::size_t>(i)] *
                                     psi_y[static_cast<std::size_t>(j)] *
                                     d.grid.weights[static_cast<std::size_t>(i)] *
                                     d.grid.weights[static_cast<std::size_t>(j)];
        }
    }
    double rate = 0.0;
    for (std::size_t k = 0; k < d.truncation_count; ++k) {
        const double ovl = weighted.dot(d.modes.col(static_cast<Eigen::Index>(k)));
        rate += d.eigenvalues[k] * ovl * ovl;
    }
    return rate;
}

double visibility(double rate_max, double rate_min) {
    if (!(rate_max >= rate_min) || rate_min < 0.0) {
        throw std::invalid_argument("visibility: need rate_max >= rate_min >= 0");
    }
    if (!(rate_max > 0.0)) throw std::invalid_argument("visibility: all rates zero");
    return (rate_max - rate_min) / (rate_max + rate_min);
}

double worst_case_visibility(const Eigen::VectorXd& row, int partner_index) {
    if (partner_index < 0 || partner_index >= row.size()) {
        throw std::invalid_argument("worst_case_visibility: partner index out of range");
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (i != partner_index) worst = std::max(worst, row[i]);
    }
    return visibility(row[partner_index], std::min(worst, row[partner_index]));
}

double fiber_scan(int mode_n, const HGBasis& basis, double displacement, const Grid& grid,
                  double mismatch) {
    if (!(mismatch > 0.0)) throw std::invalid_argument("fiber_scan: mismatch must be positive");
    if (std::abs(displacement) > grid.extent) {
        throw std::invalid_argument("fiber_scan: displacement outside grid");
    }
    check_mode_coverage(basis, mode_n, grid);
    const HGBasis fiber = HGBasis::from_scale(basis.scale / mismatch);
    double amplitude = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = schmidt_mode(fiber, 0, grid.points[i] - displacement);
        amplitude += g * schmidt_mode(basis, mode_n, grid.points[i]) * grid.weights[i];
    }
    return amplitude * amplitude;
}

std::uint64_t sample_counts(double expected_rate, double scale, std::uint64_t seed) {
    if (!(expected_rate >= 0.0)) {
        throw std::invalid_argument("sample_counts: expected_rate must be >= 0");
    }
    if (!(scale > 0.0)) throw std::invalid_argument("sample_counts: scale must be positive");
    return poisson_sample(expected_rate * scale, seed);
}

}  // namespace spdc
