#include "spdc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/random.hpp"

namespace spdc {

namespace {

struct MarginalK {
    double kx = 1.0, ky = 1.0, k = 1.0;
};

// K from the marginal spectra: K_x uses sum over the y index, K_y over x.
MarginalK marginal_schmidt_numbers(const std::vector<double>& lambda, int max_order) {
    const int orders = max_order + 1;
    std::vector<double> mx(orders, 0.0), my(orders, 0.0);
    for (int n = 0; n < orders; ++n) {
        for (int m = 0; m < orders; ++m) {
            const double v = lambda[static_cast<std::size_t>(n * orders + m)];
            mx[n] += v;
            my[m] += v;
        }
    }
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < orders; ++i) {
        sx += mx[i] * mx[i];
        sy += my[i] * my[i];
    }
    MarginalK out;
    out.kx = sx > 0.0 ? 1.0 / sx : 1.0;
    out.ky = sy > 0.0 ? 1.0 / sy : 1.0;
    out.k = out.kx * out.ky;
    return out;
}

// Background subtraction, clipping and normalization shared by the point
// estimate and every bootstrap replica.  Returns false when no mode exceeds
// the background.
bool normalized_lambda(const std::vector<double>& counts, double background,
                       std::vector<double>& lambda, double* clipped_weight,
                       std::size_t* clipped_count) {
    double sum = 0.0, negative = 0.0;
    std::size_t clipped = 0;
    lambda.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double y = counts[i] - background;
        if (y < 0.0) {
            negative += -y;
            ++clipped;
            lambda[i] = 0.0;
        } else {
            lambda[i] = y;
        }
        sum += lambda[i];
    }
    if (!(sum > 0.0)) return false;
    for (double& v : lambda) v /= sum;
    if (clipped_weight) *clipped_weight = negative / sum;
    if (clipped_count) *clipped_count = clipped;
    return true;
}

}  // namespace

TomographyResult estimate_eigenvalues(const std::vector<CountRecord>& records,
                                      double background) {
    if (records.empty()) throw std::invalid_argument("estimate_eigenvalues: no records");
    if (background < 0.0) {
        throw std::invalid_argument("estimate_eigenvalues: negative background");
    }
    int max_order = 0;
    for (const auto& r : records) {
        if (r.mode.n < 0 || r.mode.m < 0) {
            throw std::invalid_argument("estimate_eigenvalues: negative mode index");
        }
        max_order = std::max({max_order, r.mode.n, r.mode.m});
    }
    const int orders = max_order + 1;
    const auto n_modes = static_cast<std::size_t>(orders * orders);

    TomographyResult result;
    result.max_order = max_order;
    result.background = background;
    result.modes.resize(n_modes);
    result.counts.assign(n_modes, 0);
    std::vector<bool> seen(n_modes, false);
    for (int n = 0; n < orders; ++n) {
        for (int m = 0; m < orders; ++m) {
            result.modes[static_cast<std::size_t>(n * orders + m)] = ModeIndex{n, m};
        }
    }
    for (const auto& r : records) {
        const auto idx = static_cast<std::size_t>(result.flat(r.mode));
        if (seen[idx]) {
            throw std::invalid_argument("estimate_eigenvalues: duplicate record for a mode");
        }
        seen[idx] = true;
        result.counts[idx] = r.sampled_counts;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw std::invalid_argument(
            "estimate_eigenvalues: records must cover the full square mode window");
    }

    std::vector<double> counts(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) counts[i] = static_cast<double>(result.counts[i]);
    if (!normalized_lambda(counts, background, result.lambda_est, &result.clipped_weight,
                           &result.clipped_count)) {
        throw ConfigError("estimate_eigenvalues: no counts above background");
    }

    // Per-eigenvalue Poisson error sqrt(counts)/sum; normalization covariance
    // is deliberately ignored here, the bootstrap owns the K errors.
    double post_sum = 0.0;
    for (std::size_t i = 0; i < n_modes; ++i) {
        post_sum += std::max(counts[i] - background, 0.0);
    }
    result.sigma.resize(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        result.sigma[i] = std::sqrt(counts[i]) / post_sum;
    }

    const MarginalK mk = marginal_schmidt_numbers(result.lambda_est, max_order);
    result.kx = mk.kx;
    result.ky = mk.ky;
    result.k = mk.k;
    return result;
}

KEstimate schmidt_number_with_error(const TomographyResult& result, int n_bootstrap,
                                    std::uint64_t seed) {
    if (n_bootstrap < 100) {
        throw std::invalid_argument("schmidt_number_with_error: n_bootstrap must be >= 100");
    }
    KEstimate est;
    est.kx = result.kx;
    est.ky = result.ky;
    est.k = result.k;

    std::size_t live_modes = 0;
    for (double v : result.lambda_est) live_modes += v > 0.0;
    if (live_modes <= 1) {
        est.degenerate = true;
        return est;
    }

    const std::size_t n_modes = result.counts.size();
    std::vector<double> resampled(n_modes), lambda;
    std::vector<double> kx_samples, ky_samples, k_samples;
    kx_samples.reserve(static_cast<std::size_t>(n_bootstrap));
    ky_samples.reserve(static_cast<std::size_t>(n_bootstrap));
    k_samples.reserve(static_cast<std::size_t>(n_bootstrap));
    for (int rep = 0; rep < n_bootstrap; ++rep) {
        const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(rep));
        for (std::size_t i = 0; i < n_modes; ++i) {
            resampled[i] = static_cast<double>(
                poisson_sample(static_cast<double>(result.counts[i]),
                               derive_seed(rep_seed, static_cast<std::uint64_t>(i))));
        }
        if (!normalized_lambda(resampled, result.background, lambda, nullptr, nullptr)) {
            // Vanishingly rare unless the data is all background; keep the
            // replica count by falling back to the point estimate.
            kx_samples.push_back(result.kx);
            ky_samples.push_back(result.ky);
            k_samples.push_back(result.k);
            continue;
        }
        const MarginalK mk = marginal_schmidt_numbers(lambda, result.max_order);
        kx_samples.push_back(mk.kx);
        ky_samples.push_back(mk.ky);
        k_samples.push_back(mk.k);
    }

    auto stddev = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        return std::sqrt(var / static_cast<double>(xs.size() - 1));
    };
    est.sigma_kx = stddev(kx_samples);
    est.sigma_ky = stddev(ky_samples);
    est.sigma_k = stddev(k_samples);
    return est;
}

std::vector<double> model_product_spectrum(const OpticalParams& p, int max_order) {
    if (max_order < 0) throw std::invalid_argument("model_product_spectrum: bad max_order");
    const int orders = max_order + 1;
    std::vector<double> axis(static_cast<std::size_t>(orders));
    for (int n = 0; n < orders; ++n) axis[static_cast<std::size_t>(n)] = analytic_eigenvalue(p, n);
    std::vector<double> spectrum(static_cast<std::size_t>(orders * orders));
    for (int n = 0; n < orders; ++n) {
        for (int m = 0; m < orders; ++m) {
            spectrum[static_cast<std::size_t>(n * orders + m)] =
                axis[static_cast<std::size_t>(n)] * axis[static_cast<std::size_t>(m)];
        }
    }
    return spectrum;
}

double model_fidelity(const TomographyResult& result, const OpticalParams& p, int max_order) {
    if (max_order != result.max_order) {
        throw std::invalid_argument("model_fidelity: mode windows differ");
    }
    std::vector<double> model = model_product_spectrum(p, max_order);
    double sum = 0.0;
    for (double v : model) sum += v;
    if (!(sum > 0.0)) throw NumericalError("model_fidelity: empty model spectrum");
    for (double& v : model) v /= sum;  // renormalize the truncated window
    return fidelity(result.lambda_est, model);
}

}  // namespace spdc
