#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pdc/schmidt.hpp"

namespace pdc {

enum class SweepAxis { None, OmegaMaxNorm, QmaxNorm, JointNorm, Beta, SigmaUm, TauFs };

std::string to_string(SweepAxis axis);

/// A detection cutoff either in units of q₀ (Ω₀) or in absolute units.
struct Cutoff {
  double value = std::numeric_limits<double>::infinity();
  bool normalized = true;

  bool operator==(const Cutoff&) const = default;
};

struct RunConfig {
  Dimension dimension = Dimension::Three;
  PhaseMatchKind phase_matching = PhaseMatchKind::Quadratic;
  Method method = Method::McExact;
  double alpha = kDefaultAlpha;
  CrystalConfig crystal;
  PumpConfig pump;
  Cutoff q_max;      // rad/µm when absolute
  Cutoff omega_max;  // rad/s when absolute
  McParams mc;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;
  std::string csv = "out.csv";

  bool operator==(const RunConfig& other) const;
};

/// Parses `section.key = value` lines. Blank lines and `#` comments are skipped.
/// Throws ConfigError listing every offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Sweep grid, or the single value NaN when there is no sweep axis.
std::vector<double> sweep_points(const RunConfig& config);

/// The model evaluated at one sweep point, cutoffs resolved to physical units.
ModelSpec model_at(const RunConfig& config, double sweep_value);

const std::vector<std::string>& preset_names();

/// Throws ConfigError for an unknown name.
RunConfig preset(std::string_view name);

/// Shortest decimal that round-trips to the same double; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

}  // namespace pdc
