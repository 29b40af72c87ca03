#include "spdc/ghost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

Eigen::VectorXd weighted_profile(const HGBasis& basis, int n, const Grid& grid) {
    const auto size = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        v[i] = schmidt_mode(basis, n, grid.points[i]) * std::sqrt(grid.weights[i]);
    }
    return v;
}

Eigen::VectorXd normalize_conditional(Eigen::VectorXd raw, const std::vector<double>& weights,
                                      const char* where) {
    double norm_sq = 0.0;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        norm_sq += raw[i] * raw[i] * weights[static_cast<std::size_t>(i)];
    }
    if (!(norm_sq > 1e-24)) {
        throw NumericalError(std::string(where) +
                             ": herald orthogonal to kernel support (zero-norm conditional)");
    }
    return raw / std::sqrt(norm_sq);
}

// Piecewise-linear interpolation of samples at grid points.
double interp(std::span<const double> values, const Grid& grid, double x) {
    const double h = grid.step();
    const double t = (x + grid.extent) / h;
    const auto i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))),
                            grid.size() - 2);
    const double frac = t - static_cast<double>(i);
    return values[i] + (values[i + 1] - values[i]) * frac;
}

// Integral of the piecewise-linear interpolant from -extent to x.
double cumulative(std::span<const double> values, const std::vector<double>& cum,
                  const Grid& grid, double x) {
    const double h = grid.step();
    const double t = (x + grid.extent) / h;
    const auto i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))),
                            grid.size() - 2);
    const double x_i = grid.points[i];
    const double dt = x - x_i;
    const double v_at_x = interp(values, grid, x);
    return cum[i] + 0.5 * (values[i] + v_at_x) * dt;
}

}  // namespace

Eigen::VectorXd heralded_amplitude_1d(const Kernel1D& kernel, int herald_n,
                                      const HGBasis& basis, const Grid& grid) {
    const DiscretizedKernel dk = discretize_1d(kernel, grid);
    const Eigen::VectorXd herald = weighted_profile(basis, herald_n, grid);
    Eigen::VectorXd conditional = dk.matrix.transpose() * herald;
    for (Eigen::Index i = 0; i < conditional.size(); ++i) {
        conditional[i] /= std::sqrt(grid.weights[static_cast<std::size_t>(i)]);
    }
    return normalize_conditional(std::move(conditional), quadrature_weights(grid, 1),
                                 "heralded_amplitude_1d");
}

Eigen::VectorXd heralded_amplitude(const TwoPhotonKernel& kernel, ModeIndex herald,
                                   const HGBasis& basis, const Grid& grid) {
    if (kernel.separable()) {
        const Eigen::VectorXd cx = heralded_amplitude_1d(*kernel.axis, herald.n, basis, grid);
        const Eigen::VectorXd cy = heralded_amplitude_1d(*kernel.axis, herald.m, basis, grid);
        const auto size = cx.size();
        Eigen::VectorXd field(size * size);
        for (Eigen::Index i = 0; i < size; ++i) field.segment(i * size, size) = cx[i] * cy;
        return field;
    }
    const DiscretizedKernel dk = discretize_2d(kernel.fn, grid);
    const auto size = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd hx = weighted_profile(basis, herald.n, grid);
    const Eigen::VectorXd hy = weighted_profile(basis, herald.m, grid);
    Eigen::VectorXd herald_vec(size * size);
    for (Eigen::Index i = 0; i < size; ++i) herald_vec.segment(i * size, size) = hx[i] * hy;

    const std::vector<double> weights = quadrature_weights(grid, 2);
    Eigen::VectorXd conditional = dk.matrix.transpose() * herald_vec;
    for (Eigen::Index i = 0; i < conditional.size(); ++i) {
        conditional[i] /= std::sqrt(weights[static_cast<std::size_t>(i)]);
    }
    return normalize_conditional(std::move(conditional), weights, "heralded_amplitude");
}

std::vector<double> marginal_intensity_x(const Eigen::VectorXd& field2d, const Grid& grid) {
    const auto size = static_cast<Eigen::Index>(grid.size());
    if (field2d.size() != size * size) {
        throw std::invalid_argument("marginal_intensity_x: field/grid size mismatch");
    }
    std::vector<double> intensity(grid.size(), 0.0);
    for (Eigen::Index i = 0; i < size; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < size; ++j) {
            const double f = field2d[i * size + j];
            acc += f * f * grid.weights[static_cast<std::size_t>(j)];
        }
        intensity[static_cast<std::size_t>(i)] = acc;
    }
    return intensity;
}

SlitScanResult slit_scan(std::span<const double> intensity, const Grid& grid,
                         double slit_width, std::span<const double> positions,
                         ModeIndex herald) {
    if (intensity.size() != grid.size()) {
        throw std::invalid_argument("slit_scan: intensity/grid size mismatch");
    }
    if (slit_width < 0.0) throw std::invalid_argument("slit_scan: negative slit width");
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (!(positions[i] > positions[i - 1])) {
            throw std::invalid_argument("slit_scan: positions must be strictly increasing");
        }
    }

    // Prefix integrals at grid points; slit rates are differences.
    std::vector<double> cum(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        cum[i] = cum[i - 1] + 0.5 * (intensity[i] + intensity[i - 1]) * grid.step();
    }

    SlitScanResult result;
    result.slit_width = slit_width;
    result.herald = herald;
    result.positions.assign(positions.begin(), positions.end());
    result.rates.reserve(positions.size());
    const double half = slit_width / 2.0;
    for (const double x : positions) {
        if (x - half < -grid.extent || x + half > grid.extent) {
            throw std::invalid_argument("slit_scan: slit footprint outside grid");
        }
        const double rate = slit_width == 0.0
                                ? interp(intensity, grid, x)
                                : cumulative(intensity, cum, grid, x + half) -
                                      cumulative(intensity, cum, grid, x - half);
        result.rates.push_back(std::max(rate, 0.0));
    }
    return result;
}

HGFit fit_hg_profile(const SlitScanResult& scan, int n) {
    if (scan.positions.size() < 5) {
        throw std::invalid_argument("fit_hg_profile: need at least 5 scan points");
    }
    if (n < 0 || n > kMaxModeOrder) throw std::invalid_argument("fit_hg_profile: bad order");
    double rate_norm = 0.0;
    double span = 0.0;
    for (std::size_t i = 0; i < scan.positions.size(); ++i) {
        rate_norm += scan.rates[i] * scan.rates[i];
        span = std::max(span, std::abs(scan.positions[i]));
    }
    if (!(rate_norm > 0.0)) throw NumericalError("fit_hg_profile: all rates zero");
    if (!(span > 0.0)) throw std::invalid_argument("fit_hg_profile: degenerate positions");

    // A(s) in closed form, golden-section over the width s.
    auto evaluate = [&](double s) {
        double rf = 0.0, ff = 0.0;
        for (std::size_t i = 0; i < scan.positions.size(); ++i) {
            const double phi = hg_function(n, scan.positions[i] / s);
            const double f = phi * phi;
            rf += scan.rates[i] * f;
            ff += f * f;
        }
        const double amplitude = ff > 0.0 ? rf / ff : 0.0;
        double residual_sq = 0.0;
        for (std::size_t i = 0; i < scan.positions.size(); ++i) {
            const double phi = hg_function(n, scan.positions[i] / s);
            const double d = scan.rates[i] - amplitude * phi * phi;
            residual_sq += d * d;
        }
        return std::pair{residual_sq, amplitude};
    };

    constexpr double kGolden = 0.6180339887498949;
    double lo = span / 100.0;
    double hi = 2.0 * span;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = evaluate(x1).first;
    double f2 = evaluate(x2).first;
    constexpr int kMaxIter = 300;
    int iter = 0;
    for (; iter < kMaxIter && (hi - lo) > 1e-10 * span; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = evaluate(x1).first;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = evaluate(x2).first;
        }
    }
    if (iter >= kMaxIter) throw NumericalError("fit_hg_profile: search did not converge");

    const double s = 0.5 * (lo + hi);
    const auto [residual_sq, amplitude] = evaluate(s);
    return HGFit{s, amplitude, std::sqrt(residual_sq)};
}

}  // namespace spdc
