// Command-line front end: config-driven sweeps, figure presets, regression anchors.
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "pdc/errors.hpp"
#include "pdc/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;

struct Anchor {
  const char* name;
  double value;
  double expected;
  double tolerance;  // relative
};

int check() {
  using namespace pdc;
  const CrystalConfig crystal;  // 4 mm BBO, 527 nm, collinear
  const DispersionScales sc = derive_scales(crystal);
  const PumpConfig pump{600.0, 1000.0, 1e-3};
  const double pi = std::numbers::pi;
  const Anchor anchors[] = {
      {"q0 [1/um]", sc.q0_per_um, 5e-2, 0.10},
      {"Omega0 [rad/s]", sc.omega0_rad_per_s, 0.76e14, 0.10},
      {"tau_GVM [fs]", sc.tau_gvm_fs, 500.0, 0.15},
      {"walk-off length [um]", sc.walkoff_length_um, 250.0, 0.15},
      {"pump angle [deg]", sc.pump_angle_rad * 180.0 / pi, 22.934, 0.005},
      {"n_o(1054 nm)", n_ordinary(crystal.sellmeier, 1.054), 1.6547, 1e-3},
      {"n_o(527 nm)", n_ordinary(crystal.sellmeier, 0.527), 1.6747, 1e-3},
      {"pump factor 3D", pump_factor(pump, Dimension::Three),
       std::pow(pi, 1.5) * pump.sigma_um * pump.sigma_um * pump.tau_s(), 1e-12},
      {"K2D saturation", analytic::k2d_saturated(sc.q0_per_um, pump, kDefaultAlpha), 1060.0, 0.15},
      {"K1D saturation", analytic::k1d_saturated(sc.omega0_rad_per_s, pump, kDefaultAlpha), 93.0, 0.15},
  };
  bool ok = true;
  for (const auto& a : anchors) {
    const double rel = std::abs(a.value - a.expected) / std::abs(a.expected);
    const bool pass = rel <= a.tolerance;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << a.name << ": " << a.value << " (expected " << a.expected
              << " +-" << a.tolerance * 100.0 << "%)\n";
  }
  return ok ? kOk : kNumerical;
}

int run(const std::string& path, bool timing, const std::string& output) {
  auto config = pdc::load_config(path);
  if (!output.empty()) config.csv = output;
  pdc::RunOptions options;
  options.record_timing = timing;
  options.on_row = [](const pdc::RunRow& row) {
    std::cerr << "  point " << pdc::format_double(row.sweep_value) << ": K = " << row.result.K << " +- "
              << row.result.K_err << '\n';
  };
  const auto summary = pdc::run_sweep(config, options);
  std::cerr << "wrote " << summary.csv.string() << " (" << summary.computed << " computed, " << summary.resumed
            << " resumed)\n";
  return kOk;
}

int emit_preset(const std::string& name, const std::string& emit) {
  const auto config = pdc::preset(name);
  const std::string text = pdc::serialize(config);
  if (emit.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(emit);
    if (!out) throw pdc::ConfigError({"cannot write '" + emit + "'"});
    out << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal Schmidt number of parametric down-conversion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  bool timing = false;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a config and write CSV plus metadata");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("-o,--output", output, "Override output.csv");
  run_cmd->add_flag("--record-timing", timing, "Fill wall_ms (breaks byte-identical reruns)");

  std::string preset_name;
  std::string emit;
  auto* preset_cmd = app.add_subcommand("preset", "Print or write a figure preset config");
  preset_cmd->add_option("name", preset_name, "fig3a | fig4 | fig5 | fig6 | fig7 | fig8")->required();
  preset_cmd->add_option("--emit", emit, "Write to this path instead of stdout");

  auto* check_cmd = app.add_subcommand("check", "Run dispersion and pump regression anchors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run_cmd) return run(config_path, timing, output);
    if (*preset_cmd) return emit_preset(preset_name, emit);
    if (*check_cmd) return check();
  } catch (const pdc::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
    return kValidation;
  } catch (const pdc::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const pdc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
