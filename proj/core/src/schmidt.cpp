#include "spdc/schmidt.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

std::vector<double> quadrature_weights(const Grid& grid, int dims) {
    if (dims == 1) return grid.weights;
    if (dims != 2) throw std::invalid_argument("quadrature_weights: dims must be 1 or 2");
    const std::size_t n = grid.size();
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w[i * n + j] = grid.weights[i] * grid.weights[j];
        }
    }
    return w;
}

DiscretizedKernel discretize_1d(const Kernel1D& kernel, const Grid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd sqrt_w(n);
    for (Eigen::Index i = 0; i < n; ++i) sqrt_w[i] = std::sqrt(grid.weights[i]);

    DiscretizedKernel dk;
    dk.grid = grid;
    dk.dims = 1;
    dk.matrix.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double value = kernel(grid.points[i], grid.points[j]);
            if (!std::isfinite(value)) {
                throw NumericalError("discretize_1d: non-finite kernel value");
            }
            dk.matrix(i, j) = sqrt_w[i] * value * sqrt_w[j];
        }
    }
    return dk;
}

DiscretizedKernel discretize_2d(const Kernel2D& kernel, const Grid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const Eigen::Index nn = n * n;
    Eigen::VectorXd sqrt_w(nn);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            sqrt_w[i * n + j] = std::sqrt(grid.weights[i] * grid.weights[j]);
        }
    }

    DiscretizedKernel dk;
    dk.grid = grid;
    dk.dims = 2;
    dk.matrix.resize(nn, nn);
    for (Eigen::Index r = 0; r < nn; ++r) {
        const double x1 = grid.points[r / n];
        const double y1 = grid.points[r % n];
        for (Eigen::Index c = 0; c < nn; ++c) {
            const double x2 = grid.points[c / n];
            const double y2 = grid.points[c % n];
            const double value = kernel(x1, y1, x2, y2);
            if (!std::isfinite(value)) {
                throw NumericalError("discretize_2d: non-finite kernel value");
            }
            dk.matrix(r, c) = sqrt_w[r] * value * sqrt_w[c];
        }
    }
    return dk;
}

SchmidtDecomposition decompose(const DiscretizedKernel& dk, double truncation_tol) {
    if (!(truncation_tol > 0.0) || !(truncation_tol < 1.0)) {
        throw std::invalid_argument("decompose: truncation_tol must be in (0, 1)");
    }
    if (dk.matrix.size() == 0) throw std::invalid_argument("decompose: empty kernel");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(dk.matrix, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double total = sv.squaredNorm();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw NumericalError("decompose: kernel has no weight (all-zero or SVD failure)");
    }

    SchmidtDecomposition d;
    d.grid = dk.grid;
    d.dims = dk.dims;
    d.eigenvalues.resize(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        d.eigenvalues[static_cast<std::size_t>(k)] = sv[k] * sv[k] / total;
    }

    // Retain modes until the cumulative eigenvalue reaches 1 - tol.
    double cumulative = 0.0;
    std::size_t keep = 0;
    while (keep < d.eigenvalues.size() && cumulative < 1.0 - truncation_tol) {
        cumulative += d.eigenvalues[keep];
        ++keep;
    }
    d.truncation_count = keep;
    d.residual = std::max(0.0, 1.0 - cumulative);

    const std::vector<double> w = quadrature_weights(dk.grid, dk.dims);
    d.modes = svd.matrixU().leftCols(static_cast<Eigen::Index>(keep));
    for (Eigen::Index i = 0; i < d.modes.rows(); ++i) {
        d.modes.row(i) /= std::sqrt(w[static_cast<std::size_t>(i)]);
    }
    // Deterministic sign: first entry with |u| > 1e-6 made positive.
    for (Eigen::Index k = 0; k < d.modes.cols(); ++k) {
        for (Eigen::Index i = 0; i < d.modes.rows(); ++i) {
            const double v = d.modes(i, k);
            if (std::abs(v) > 1e-6) {
                if (v < 0.0) d.modes.col(k) = -d.modes.col(k);
                break;
            }
        }
    }
    return d;
}

SchmidtNumber schmidt_number(const SchmidtDecomposition& d) {
    if (d.eigenvalues.empty()) throw std::invalid_argument("schmidt_number: empty spectrum");
    double sum_sq_all = 0.0;
    for (double lambda : d.eigenvalues) sum_sq_all += lambda * lambda;
    double sum_sq_retained = 0.0;
    for (std::size_t k = 0; k < d.truncation_count; ++k) {
        sum_sq_retained += d.eigenvalues[k] * d.eigenvalues[k];
    }
    if (!(sum_sq_all > 0.0)) throw NumericalError("schmidt_number: degenerate spectrum");
    return SchmidtNumber{1.0 / sum_sq_all, 1.0 / sum_sq_retained};
}

double fidelity(std::span<const double> spec_a, std::span<const double> spec_b) {
    constexpr double kNormTol = 1e-6;
    auto checked_sum = [](std::span<const double> spec, const char* which) {
        double sum = 0.0;
        for (double v : spec) {
            if (v < 0.0) {
                throw std::invalid_argument(std::string("fidelity: negative entry in ") + which);
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kNormTol) {
            throw std::invalid_argument(std::string("fidelity: ") + which +
                                        " spectrum not normalized within 1e-6");
        }
        return sum;
    };
    const double sum_a = checked_sum(spec_a, "first");
    const double sum_b = checked_sum(spec_b, "second");

    double f = 0.0;
    const std::size_t common = std::min(spec_a.size(), spec_b.size());
    for (std::size_t k = 0; k < common; ++k) {
        f += std::sqrt((spec_a[k] / sum_a) * (spec_b[k] / sum_b));
    }
    return std::min(f, 1.0);
}

Eigen::MatrixXd mode_overlap_matrix(const SchmidtDecomposition& d, const HGBasis& basis,
                                    int max_order) {
    if (d.dims != 1) {
        throw std::invalid_argument("mode_overlap_matrix: 1D decompositions only");
    }
    if (max_order < 0 || max_order > kMaxModeOrder) {
        throw std::invalid_argument("mode_overlap_matrix: bad max_order");
    }
    const auto n_cols = static_cast<Eigen::Index>(d.truncation_count);
    Eigen::MatrixXd overlaps(max_order + 1, n_cols);
    for (int n = 0; n <= max_order; ++n) {
        const std::vector<double> psi = schmidt_mode_profile(basis, n, d.grid);
        const double norm = grid_norm(psi, d.grid);
        if (norm < 0.999) {
            throw std::invalid_argument("mode_overlap_matrix: grid too small for mode order " +
                                        std::to_string(n));
        }
        for (Eigen::Index k = 0; k < n_cols; ++k) {
            double ovl = 0.0;
            for (std::size_t i = 0; i < d.grid.size(); ++i) {
                ovl += psi[i] * d.modes(static_cast<Eigen::Index>(i), k) * d.grid.weights[i];
            }
            overlaps(n, k) = ovl * ovl;
        }
    }
    return overlaps;
}

Grid scaled_grid(const HGBasis& basis, double extent_scaled, int n_points) {
    return make_grid(extent_scaled / basis.scale, n_points);
}

}  // namespace spdc
