// spdcsim: Schmidt-mode simulator for SPDC transverse-momentum biphotons.
//
// Subcommands: decompose | correlate | tomography | ghost | scan.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int herald = 0;
};

spdc::ExperimentConfig load(const CliOptions& opt) {
    spdc::ExperimentConfig cfg;
    if (!opt.config_path.empty()) cfg = spdc::load_config(opt.config_path);
    if (opt.seed) cfg.noise.seed = *opt.seed;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmidt decomposition and measurement simulation for SPDC biphotons"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON config file (defaults used if omitted)");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", opt.seed, "override noise.seed from the config");

    auto* decompose = app.add_subcommand(
        "decompose", "analytic + numerical Schmidt spectra, K values, cross-fidelity");
    auto* correlate =
        app.add_subcommand("correlate", "mode-pair coincidence matrices and visibilities");
    auto* tomography =
        app.add_subcommand("tomography", "simulated single-count eigenvalue tomography");
    auto* ghost = app.add_subcommand("ghost", "ghost image of a heralded Schmidt mode");
    ghost->add_option("--herald", opt.herald, "herald mode order n (mode (n, 0))")
        ->capture_default_str();
    auto* scan = app.add_subcommand("scan", "fiber-tip scan curves per mode");
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Help/version exit cleanly; anything else is a usage problem.
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const spdc::ExperimentConfig cfg = load(opt);
        const std::filesystem::path out(opt.out_dir);
        if (decompose->parsed()) spdc::run_decompose(cfg, out);
        if (correlate->parsed()) spdc::run_correlate(cfg, out);
        if (tomography->parsed()) spdc::run_tomography(cfg, out);
        if (ghost->parsed()) spdc::run_ghost(cfg, out, opt.herald);
        if (scan->parsed()) spdc::run_scan(cfg, out);
    } catch (const spdc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const spdc::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
