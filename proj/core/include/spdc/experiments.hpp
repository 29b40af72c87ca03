#pragma once

#include "spdc/config.hpp"
#include "spdc/ghost.hpp"
#include "spdc/schmidt.hpp"
#include "spdc/tomography.hpp"

namespace spdc {

// End-to-end experiment scripts behind the CLI subcommands.  Each writes CSV
// and JSON artifacts into a subdirectory of `out` and returns the summary it
// serialized, so callers (and tests) can inspect results without re-reading
// files.  All randomness is seeded through the config.

// Analytic + numerical spectra for both kernels, Schmidt numbers, fitted
// Gaussian width, cross-fidelity.  Writes out/spectra/.
nlohmann::json run_decompose(const ExperimentConfig& cfg, const std::filesystem::path& out);

// Mode-pair coincidence matrices, ideal and Poisson-sampled, with visibility
// summaries per fixed reflected-arm mode.  Writes out/coincidences/.
nlohmann::json run_correlate(const ExperimentConfig& cfg, const std::filesystem::path& out);

// Simulated single-count tomography: seeded counts, eigenvalue estimates,
// bootstrap Schmidt numbers, model fidelity.  Writes out/tomography/.
nlohmann::json run_tomography(const ExperimentConfig& cfg, const std::filesystem::path& out);

// Ghost image of one heralded Schmidt mode: slit scan plus HG profile fits.
// Writes out/ghost/.
nlohmann::json run_ghost(const ExperimentConfig& cfg, const std::filesystem::path& out,
                         int herald_n);

// Fiber-tip scan curves per mode, plus the smooth multi-mode singles curve.
// Writes out/scans/.
nlohmann::json run_scan(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace spdc
