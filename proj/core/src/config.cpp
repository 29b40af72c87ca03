#include "spdc/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + key + "' in " + section);
        }
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out, const std::string& section) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + section);
    }
}

}  // namespace

HGBasis ExperimentConfig::basis() const {
    return HGBasis::from_widths(optical.pump_divergence_mrad,
                                optical.phase_matching_width_mrad);
}

TwoPhotonKernel ExperimentConfig::make_kernel() const {
    return kernel == KernelKind::Exact ? make_exact_kernel(optical)
                                       : make_double_gaussian_kernel(optical);
}

Grid ExperimentConfig::grid_1d() const { return scaled_grid(basis(), grid.extent, grid.n_points); }

Grid ExperimentConfig::grid_2d() const {
    return scaled_grid(basis(), grid.extent, grid.n_points_2d);
}

void ExperimentConfig::validate() const {
    try {
        optical.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(grid.extent > 0.0)) throw ConfigError("grid.extent must be positive");
    auto check_points = [](int n, const char* name) {
        if (n < 3 || n % 2 == 0) {
            throw ConfigError(std::string(name) + " must be odd and >= 3");
        }
    };
    check_points(grid.n_points, "grid.n_points");
    check_points(grid.n_points_2d, "grid.n_points_2d");
    if (!(truncation_tol > 0.0) || !(truncation_tol < 1.0)) {
        throw ConfigError("truncation_tol must be in (0, 1)");
    }
    if (max_order < 0 || max_order > kMaxModeOrder) {
        throw ConfigError("max_order must be in [0, " + std::to_string(kMaxModeOrder) + "]");
    }
    if (noise.background < 0.0) throw ConfigError("noise.background must be >= 0");
    if (!(noise.total_counts > 0.0)) throw ConfigError("noise.total_counts must be positive");
    if (!(calibration.slit_angle_per_um > 0.0)) {
        throw ConfigError("calibration.slit_angle_per_um must be positive");
    }
    if (calibration.slit_width_um < 0.0) {
        throw ConfigError("calibration.slit_width_um must be >= 0");
    }
    if (!(calibration.fiber_mismatch > 0.0)) {
        throw ConfigError("calibration.fiber_mismatch must be positive");
    }
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(j, "config root",
                        {"schema_version", "optical", "grid", "truncation_tol", "max_order",
                         "kernel", "noise", "calibration"});

    ExperimentConfig cfg;
    if (j.contains("optical")) {
        const json& o = j.at("optical");
        reject_unknown_keys(o, "optical",
                            {"a_mrad", "b_mrad", "L_mm", "pump_wavelength_nm", "c_sinc"});
        read_field(o, "a_mrad", cfg.optical.pump_divergence_mrad, "optical");
        double length_mm = cfg.optical.crystal_length_m * 1e3;
        double wavelength_nm = cfg.optical.pump_wavelength_m * 1e9;
        read_field(o, "L_mm", length_mm, "optical");
        read_field(o, "pump_wavelength_nm", wavelength_nm, "optical");
        cfg.optical.crystal_length_m = length_mm * 1e-3;
        cfg.optical.pump_wavelength_m = wavelength_nm * 1e-9;
        if (o.contains("c_sinc")) {
            double c = 0.0;
            read_field(o, "c_sinc", c, "optical");
            cfg.optical.sinc_coefficient = c;
        }
        if (o.contains("b_mrad")) {
            read_field(o, "b_mrad", cfg.optical.phase_matching_width_mrad, "optical");
        } else if (o.contains("L_mm") || o.contains("pump_wavelength_nm") ||
                   o.contains("c_sinc")) {
            // Phase matching described by the crystal instead of a width:
            // derive the effective Gaussian b from the sinc profile.
            try {
                cfg.optical.validate();
                cfg.optical.phase_matching_width_mrad = fit_gaussian_width_to_sinc(cfg.optical);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown_keys(g, "grid", {"extent", "n_points", "n_points_2d"});
        read_field(g, "extent", cfg.grid.extent, "grid");
        read_field(g, "n_points", cfg.grid.n_points, "grid");
        read_field(g, "n_points_2d", cfg.grid.n_points_2d, "grid");
    }
    read_field(j, "truncation_tol", cfg.truncation_tol, "config root");
    read_field(j, "max_order", cfg.max_order, "config root");
    if (j.contains("kernel")) {
        std::string kind;
        read_field(j, "kernel", kind, "config root");
        if (kind == "double_gaussian") {
            cfg.kernel = KernelKind::DoubleGaussian;
        } else if (kind == "exact") {
            cfg.kernel = KernelKind::Exact;
        } else {
            throw ConfigError("kernel must be 'double_gaussian' or 'exact'");
        }
    }
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        reject_unknown_keys(n, "noise", {"background", "total_counts", "seed"});
        read_field(n, "background", cfg.noise.background, "noise");
        read_field(n, "total_counts", cfg.noise.total_counts, "noise");
        read_field(n, "seed", cfg.noise.seed, "noise");
    }
    if (j.contains("calibration")) {
        const json& c = j.at("calibration");
        reject_unknown_keys(c, "calibration",
                            {"slit_angle_per_um", "slit_width_um", "fiber_mismatch"});
        read_field(c, "slit_angle_per_um", cfg.calibration.slit_angle_per_um, "calibration");
        read_field(c, "slit_width_um", cfg.calibration.slit_width_um, "calibration");
        read_field(c, "fiber_mismatch", cfg.calibration.fiber_mismatch, "calibration");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    json o{{"a_mrad", cfg.optical.pump_divergence_mrad},
           {"b_mrad", cfg.optical.phase_matching_width_mrad},
           {"L_mm", cfg.optical.crystal_length_m * 1e3},
           {"pump_wavelength_nm", cfg.optical.pump_wavelength_m * 1e9}};
    if (cfg.optical.sinc_coefficient) o["c_sinc"] = *cfg.optical.sinc_coefficient;
    return json{
        {"optical", o},
        {"grid",
         {{"extent", cfg.grid.extent},
          {"n_points", cfg.grid.n_points},
          {"n_points_2d", cfg.grid.n_points_2d}}},
        {"truncation_tol", cfg.truncation_tol},
        {"max_order", cfg.max_order},
        {"kernel", cfg.kernel == KernelKind::Exact ? "exact" : "double_gaussian"},
        {"noise",
         {{"background", cfg.noise.background},
          {"total_counts", cfg.noise.total_counts},
          {"seed", cfg.noise.seed}}},
        {"calibration",
         {{"slit_angle_per_um", cfg.calibration.slit_angle_per_um},
          {"slit_width_um", cfg.calibration.slit_width_um},
          {"fiber_mismatch", cfg.calibration.fiber_mismatch}}},
    };
}

}  // namespace spdc
