#include "spdc/grid.hpp"

#include <stdexcept>

namespace spdc {

Grid make_grid(double extent, int n_points) {
    if (!(extent > 0.0)) {
        throw std::invalid_argument("make_grid: extent must be positive");
    }
    if (n_points < 3 || n_points % 2 == 0) {
        throw std::invalid_argument("make_grid: n_points must be odd and >= 3");
    }
    const auto n = static_cast<std::size_t>(n_points);
    const double step = 2.0 * extent / static_cast<double>(n_points - 1);

    Grid grid;
    grid.extent = extent;
    grid.points.resize(n);
    grid.weights.assign(n, step);
    const std::size_t mid = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        // Build from the center out so the grid is symmetric to the bit.
        const auto offset = static_cast<double>(static_cast<long long>(i) -
                                                static_cast<long long>(mid));
        grid.points[i] = offset * step;
    }
    grid.weights.front() = step / 2.0;
    grid.weights.back() = step / 2.0;
    return grid;
}

std::complex<double> inner_product(std::span<const std::complex<double>> f,
                                   std::span<const std::complex<double>> g,
                                   const Grid& grid) {
    if (f.size() != g.size() || f.size() != grid.size()) {
        throw std::invalid_argument("inner_product: length mismatch");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc += std::conj(f[i]) * g[i] * grid.weights[i];
    }
    return acc;
}

double inner_product(std::span<const double> f, std::span<const double> g,
                     const Grid& grid) {
    if (f.size() != g.size() || f.size() != grid.size()) {
        throw std::invalid_argument("inner_product: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc += f[i] * g[i] * grid.weights[i];
    }
    return acc;
}

double grid_norm(std::span<const double> f, const Grid& grid) {
    return std::sqrt(inner_product(f, f, grid));
}

}  // namespace spdc
