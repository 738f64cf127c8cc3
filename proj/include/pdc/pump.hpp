#pragma once

#include "pdc/dispersion.hpp"
#include "pdc/phasematch.hpp"

namespace pdc {

/// Gaussian pump: waist at the crystal exit face, duration and dimensionless gain.
struct PumpConfig {
  double sigma_um = 600.0;
  double tau_fs = 1000.0;
  double gain = 1e-3;

  double tau_s() const { return tau_fs * 1e-15; }
  bool operator==(const PumpConfig&) const = default;
};

/// Throws ConfigError on non-positive parameters.
void validate(const PumpConfig& pump);

/// Above this gain the first-order biphoton amplitude is unreliable.
inline constexpr double kGainWarningThreshold = 0.1;

/// A_p(x, y, t) = exp(−(x² + y²)/σ_p²)·exp(−t²/τ_p²); x, y in µm, t in fs.
double envelope(const PumpConfig& pump, double x_um, double y_um, double t_fs);

/// Fourier amplitude of the envelope with the (2π)^{−D/2} convention, in the
/// dimensionality carried by w_p. In 3D: (σ_p²τ_p/2^{3/2})·exp(−q²σ_p²/4)·exp(−Ω²τ_p²/4).
double spectrum(const PumpConfig& pump, const SpectralPoint& wp);

/// Standard deviations of |Ã_p|² per coordinate: 1/σ_p (rad/µm) and 1/τ_p (rad/s).
double spectral_std_q(const PumpConfig& pump);
double spectral_std_omega(const PumpConfig& pump);

/// ∫|A_p|² dξ and ∫|A_p|⁴ dξ in D dimensions (µm^k·s units).
double envelope_norm2(const PumpConfig& pump, Dimension dim);
double envelope_norm4(const PumpConfig& pump, Dimension dim);

/// [∫|A_p|²]²/∫|A_p|⁴: √π·τ_p (1D), π·σ_p² (2D), π^{3/2}·σ_p²·τ_p (3D).
double pump_factor(const PumpConfig& pump, Dimension dim);

/// δq_p = 2/σ_p and δΩ_p = 2/τ_p.
double spectral_width_q(const PumpConfig& pump);
double spectral_width_omega(const PumpConfig& pump);

/// β = δq_p²·δΩ_p/(q₀²·Ω₀).
double beta_parameter(const PumpConfig& pump, const DispersionScales& scales);

/// Pump with β reached by equal focusing split: δq_p² = √β·q₀², δΩ_p = √β·Ω₀.
PumpConfig pump_for_beta(double beta, const DispersionScales& scales, double gain = 1e-3);

struct NpwpaReport {
  bool satisfied = false;  // both margins at least kNpwpaHardMargin
  bool marginal = false;   // satisfied, but a margin is below kNpwpaMargin
  double temporal_margin = 0.0;  // τ_p/τ_GVM
  double spatial_margin = 0.0;   // σ_p/l_walkoff
  double beta = 0.0;
};

inline constexpr double kNpwpaMargin = 4.0;
inline constexpr double kNpwpaHardMargin = 2.0;

NpwpaReport npwpa_check(const PumpConfig& pump, const DispersionScales& scales);

}  // namespace pdc
