#include "pdc/pump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc {

namespace {
constexpr double kPi = std::numbers::pi;
}

void validate(const PumpConfig& pump) {
  std::vector<std::string> issues;
  if (!(pump.sigma_um > 0.0)) issues.push_back("pump.sigma_um must be positive");
  if (!(pump.tau_fs > 0.0)) issues.push_back("pump.tau_fs must be positive");
  if (!(pump.gain > 0.0)) issues.push_back("pump.gain must be positive");
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

double envelope(const PumpConfig& pump, double x_um, double y_um, double t_fs) {
  const double s2 = pump.sigma_um * pump.sigma_um;
  const double t2 = pump.tau_fs * pump.tau_fs;
  return std::exp(-(x_um * x_um + y_um * y_um) / s2) * std::exp(-t_fs * t_fs / t2);
}

double spectrum(const PumpConfig& pump, const SpectralPoint& wp) {
  const double sigma = pump.sigma_um;
  const double tau = pump.tau_s();
  double value = 1.0;
  if (has_space(wp.dim)) value *= 0.5 * sigma * sigma * std::exp(-0.25 * wp.q.squaredNorm() * sigma * sigma);
  if (has_time(wp.dim)) value *= tau / std::numbers::sqrt2 * std::exp(-0.25 * wp.omega * wp.omega * tau * tau);
  return value;
}

double spectral_std_q(const PumpConfig& pump) { return 1.0 / pump.sigma_um; }
double spectral_std_omega(const PumpConfig& pump) { return 1.0 / pump.tau_s(); }

double envelope_norm2(const PumpConfig& pump, Dimension dim) {
  double value = 1.0;
  if (has_space(dim)) value *= 0.5 * kPi * pump.sigma_um * pump.sigma_um;
  if (has_time(dim)) value *= std::sqrt(0.5 * kPi) * pump.tau_s();
  return value;
}

double envelope_norm4(const PumpConfig& pump, Dimension dim) {
  double value = 1.0;
  if (has_space(dim)) value *= 0.25 * kPi * pump.sigma_um * pump.sigma_um;
  if (has_time(dim)) value *= 0.5 * std::sqrt(kPi) * pump.tau_s();
  return value;
}

double pump_factor(const PumpConfig& pump, Dimension dim) {
  double value = 1.0;
  if (has_space(dim)) value *= kPi * pump.sigma_um * pump.sigma_um;
  if (has_time(dim)) value *= std::sqrt(kPi) * pump.tau_s();
  return value;
}

double spectral_width_q(const PumpConfig& pump) { return 2.0 / pump.sigma_um; }
double spectral_width_omega(const PumpConfig& pump) { return 2.0 / pump.tau_s(); }

double beta_parameter(const PumpConfig& pump, const DispersionScales& scales) {
  const double dq = spectral_width_q(pump);
  return dq * dq * spectral_width_omega(pump) /
         (scales.q0_per_um * scales.q0_per_um * scales.omega0_rad_per_s);
}

PumpConfig pump_for_beta(double beta, const DispersionScales& scales, double gain) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double root = std::sqrt(beta);
  const double dq = std::sqrt(root) * scales.q0_per_um;
  const double dw = root * scales.omega0_rad_per_s;
  return {2.0 / dq, 2.0 / dw * 1e15, gain};
}

NpwpaReport npwpa_check(const PumpConfig& pump, const DispersionScales& scales) {
  NpwpaReport r;
  const auto ratio = [](double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
  };
  r.temporal_margin = ratio(pump.tau_fs, scales.tau_gvm_fs);
  r.spatial_margin = ratio(pump.sigma_um, scales.walkoff_length_um);
  r.beta = beta_parameter(pump, scales);
  const double worst = std::min(r.temporal_margin, r.spatial_margin);
  r.satisfied = worst >= kNpwpaHardMargin;
  r.marginal = r.satisfied && worst < kNpwpaMargin;
  return r;
}

}  // namespace pdc
