#pragma once

#include <limits>

#include "spdc/measurement.hpp"

namespace spdc {

// Reconstruction of the diagonal single-photon density matrix in the Schmidt
// basis from single-count records, Schmidt-number estimates with bootstrap
// errors, and fidelity against the double-Gaussian model spectrum.

struct TomographyResult {
    int max_order = 0;
    std::vector<ModeIndex> modes;          // row-major (n, m), all orders <= max_order
    std::vector<double> lambda_est;        // normalized eigenvalue estimates
    std::vector<double> sigma;             // per-eigenvalue Poisson standard errors
    std::vector<std::uint64_t> counts;     // raw counts (bootstrap input)
    double background = 0.0;               // counts subtracted per mode
    double kx = 1.0, ky = 1.0, k = 1.0;    // marginal and full Schmidt numbers
    double sigma_kx = 0.0, sigma_ky = 0.0, sigma_k = 0.0;
    double fidelity_vs_model = std::numeric_limits<double>::quiet_NaN();
    std::size_t clipped_count = 0;         // modes clipped to zero after subtraction
    double clipped_weight = 0.0;           // pre-clip negative weight, relative

    int flat(ModeIndex mu) const { return mu.n * (max_order + 1) + mu.m; }
};

// lambda_hat_nm = max(counts - background, 0) / sum, with Poisson standard
// errors sqrt(counts)/sum.  K_x comes from the marginal sum over m, K_y over
// n.  Records must cover every (n, m) <= max_order exactly once (max_order is
// inferred from the records).  Throws ConfigError when nothing exceeds the
// background.
TomographyResult estimate_eigenvalues(const std::vector<CountRecord>& records,
                                      double background);

struct KEstimate {
    double kx = 1.0, sigma_kx = 0.0;
    double ky = 1.0, sigma_ky = 0.0;
    double k = 1.0, sigma_k = 0.0;
    bool degenerate = false;  // single-mode data: sigmas forced to 0
};

// Parametric bootstrap: Poisson-resample the stored counts n_bootstrap times
// (deterministic seeds derived from `seed`), re-estimate, and report the
// spread of K_x, K_y, K.  n_bootstrap must be >= 100.
KEstimate schmidt_number_with_error(const TomographyResult& result, int n_bootstrap,
                                    std::uint64_t seed);

// Model spectrum lambda_n * lambda_m (row-major, orders <= max_order),
// un-normalized; callers renormalize over the measured window.
std::vector<double> model_product_spectrum(const OpticalParams& p, int max_order);

// Fidelity between the estimated spectrum and the double-Gaussian model
// truncated to the same mode window (mode-by-mode pairing).
double model_fidelity(const TomographyResult& result, const OpticalParams& p,
                      int max_order);

}  // namespace spdc
