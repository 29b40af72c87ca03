#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "spdc/kernel.hpp"

namespace spdc {

// Experiment configuration: a single JSON file with nested sections.  Unknown
// keys are rejected so typos fail loudly.  See configs/default.json for the
// annotated reference.

struct GridConfig {
    double extent = 8.0;   // half-width in mode-width (scaled) units
    int n_points = 1025;   // odd; per-axis points for 1D work
    int n_points_2d = 33;  // odd; per-axis points when the full 2D kernel is needed
};

struct NoiseConfig {
    double background = 0.0;      // constant dark-count rate, counts per mode
    double total_counts = 1.0e5;  // nominal total acquisition scale
    std::uint64_t seed = 12345;
};

struct CalibrationConfig {
    // Slit-plane calibration: scaled angle units per micrometer of slit
    // travel.  The default maps the 200 um slit to 0.35 mode widths; the
    // value is a documentation choice, not a physical constant.
    double slit_angle_per_um = 0.00175;
    double slit_width_um = 200.0;
    double fiber_mismatch = 1.0;  // fiber mode width / zeroth Schmidt mode width
};

enum class KernelKind { DoubleGaussian, Exact };

struct ExperimentConfig {
    OpticalParams optical;
    GridConfig grid;
    double truncation_tol = 1e-6;
    int max_order = 4;  // highest HG index per axis in measurements
    KernelKind kernel = KernelKind::DoubleGaussian;
    NoiseConfig noise;
    CalibrationConfig calibration;

    HGBasis basis() const;
    TwoPhotonKernel make_kernel() const;
    Grid grid_1d() const;
    Grid grid_2d() const;

    // Throws ConfigError on out-of-range values.
    void validate() const;
};

// Parse/serialize.  parse_config throws ConfigError on unknown keys, type
// mismatches and range violations; load_config adds file-level errors.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace spdc
