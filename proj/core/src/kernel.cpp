#include "spdc/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

void OpticalParams::validate() const {
    if (!(pump_divergence_mrad > 0.0)) {
        throw std::invalid_argument("OpticalParams: pump divergence must be positive");
    }
    if (!(phase_matching_width_mrad > 0.0)) {
        throw std::invalid_argument("OpticalParams: phase-matching width must be positive");
    }
    if (!(crystal_length_m > 0.0)) {
        throw std::invalid_argument("OpticalParams: crystal length must be positive");
    }
    if (!(pump_wavelength_m > 0.0)) {
        throw std::invalid_argument("OpticalParams: pump wavelength must be positive");
    }
    if (sinc_coefficient && !(*sinc_coefficient > 0.0)) {
        throw std::invalid_argument("OpticalParams: sinc coefficient must be positive");
    }
}

double OpticalParams::c_sinc() const {
    if (sinc_coefficient) return *sinc_coefficient;
    // L |dk_perp|^2 / 4 k_p with k_perp = (k_p / 2) theta gives L k_p theta^2 / 16;
    // 1e-6 converts theta^2 from rad^2 to mrad^2.
    const double k_pump = 2.0 * M_PI / pump_wavelength_m;
    return crystal_length_m * k_pump / 16.0 * 1e-6;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double double_gaussian_amplitude(const OpticalParams& p, double q1x, double q1y,
                                 double q2x, double q2y) {
    const double a = p.pump_divergence_mrad;
    const double b = p.phase_matching_width_mrad;
    const double sum2 = (q1x + q2x) * (q1x + q2x) + (q1y + q2y) * (q1y + q2y);
    const double diff2 = (q1x - q2x) * (q1x - q2x) + (q1y - q2y) * (q1y - q2y);
    return std::exp(-sum2 / (2.0 * a * a) - diff2 / (2.0 * b * b));
}

double exact_amplitude(const OpticalParams& p, double q1x, double q1y,
                       double q2x, double q2y) {
    const double a = p.pump_divergence_mrad;
    const double sum2 = (q1x + q2x) * (q1x + q2x) + (q1y + q2y) * (q1y + q2y);
    const double diff2 = (q1x - q2x) * (q1x - q2x) + (q1y - q2y) * (q1y - q2y);
    return std::exp(-sum2 / (2.0 * a * a)) * sinc(p.c_sinc() * diff2);
}

double analytic_eigenvalue(const OpticalParams& p, int n) {
    if (n < 0) throw std::invalid_argument("analytic_eigenvalue: n must be >= 0");
    const double a = p.pump_divergence_mrad;
    const double b = p.phase_matching_width_mrad;
    const double ratio = (a - b) / (a + b);
    const double lambda0 = 4.0 * a * b / ((a + b) * (a + b));
    if (n == 0) return lambda0;  // avoids 0^0 when a == b
    return lambda0 * std::pow(ratio * ratio, n);
}

double schmidt_number_analytic(const OpticalParams& p) {
    const double a = p.pump_divergence_mrad;
    const double b = p.phase_matching_width_mrad;
    return (a * a + b * b) / (2.0 * a * b);
}

double fit_gaussian_width_to_sinc(const OpticalParams& p) {
    const double c = p.c_sinc();
    const double u_max = std::sqrt(M_PI / c);  // first zero of sinc(c u^2)

    // L2 cost on a fixed fine grid over [0, u_max].
    constexpr int kQuadPoints = 2001;
    const double h = u_max / (kQuadPoints - 1);
    std::vector<double> u(kQuadPoints), target(kQuadPoints);
    for (int i = 0; i < kQuadPoints; ++i) {
        u[i] = i * h;
        target[i] = sinc(c * u[i] * u[i]);
    }
    auto cost = [&](double width) {
        double acc = 0.0;
        const double inv = 1.0 / (2.0 * width * width);
        for (int i = 0; i < kQuadPoints; ++i) {
            const double d = target[i] - std::exp(-u[i] * u[i] * inv);
            acc += d * d * (i == 0 || i == kQuadPoints - 1 ? 0.5 : 1.0);
        }
        return acc * h;
    };

    // Golden-section search; the cost is unimodal in the width.
    constexpr double kGolden = 0.6180339887498949;
    double lo = 1e-3 * u_max;
    double hi = u_max;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = cost(x1);
    double f2 = cost(x2);
    constexpr int kMaxIter = 200;
    int iter = 0;
    for (; iter < kMaxIter && (hi - lo) > 1e-9 * u_max; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = cost(x2);
        }
    }
    if (iter >= kMaxIter) {
        throw NumericalError("fit_gaussian_width_to_sinc: golden-section did not converge");
    }
    return 0.5 * (lo + hi);
}

Kernel1D double_gaussian_kernel_1d(const OpticalParams& p) {
    p.validate();
    return [p](double q1, double q2) {
        return double_gaussian_amplitude(p, q1, 0.0, q2, 0.0);
    };
}

Kernel1D exact_kernel_1d(const OpticalParams& p) {
    p.validate();
    // Capture c_sinc once; the lambda must not re-derive it per call.
    const double a = p.pump_divergence_mrad;
    const double c = p.c_sinc();
    return [a, c](double q1, double q2) {
        const double s = q1 + q2;
        const double d = q1 - q2;
        return std::exp(-s * s / (2.0 * a * a)) * sinc(c * d * d);
    };
}

TwoPhotonKernel make_double_gaussian_kernel(const OpticalParams& p) {
    p.validate();
    TwoPhotonKernel kernel;
    kernel.fn = [p](double q1x, double q1y, double q2x, double q2y) {
        return double_gaussian_amplitude(p, q1x, q1y, q2x, q2y);
    };
    kernel.axis = double_gaussian_kernel_1d(p);
    return kernel;
}

TwoPhotonKernel make_exact_kernel(const OpticalParams& p) {
    p.validate();
    const double a = p.pump_divergence_mrad;
    const double c = p.c_sinc();
    TwoPhotonKernel kernel;
    // The sinc couples the axes, so no separable factor exists.
    kernel.fn = [a, c](double q1x, double q1y, double q2x, double q2y) {
        const double sum2 = (q1x + q2x) * (q1x + q2x) + (q1y + q2y) * (q1y + q2y);
        const double diff2 = (q1x - q2x) * (q1x - q2x) + (q1y - q2y) * (q1y - q2y);
        return std::exp(-sum2 / (2.0 * a * a)) * sinc(c * diff2);
    };
    return kernel;
}

}  // namespace spdc
