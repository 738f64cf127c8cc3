#pragma once

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace pdc {

/// Speed of light in micrometers per second.
inline constexpr double kSpeedOfLight = 2.99792458e14;

/// n²(λ) = A + B/(λ² − C) − D·λ², λ in micrometers.
struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double index_squared(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    return a + b / (l2 - c) - d * l2;
  }

  bool operator==(const SellmeierCoefficients&) const = default;
};

/// Dispersion of a negative uniaxial crystal: ordinary and principal extraordinary sets.
struct SellmeierSet {
  std::string name;
  SellmeierCoefficients ordinary;
  SellmeierCoefficients extraordinary;
  double window_min_um = 0.4;
  double window_max_um = 1.6;

  bool contains(double lambda_um) const {
    return lambda_um >= window_min_um && lambda_um <= window_max_um;
  }

  /// Beta barium borate, the common 1987 coefficient set.
  static SellmeierSet bbo();

  bool operator==(const SellmeierSet&) const = default;
};

double n_ordinary(const SellmeierSet& set, double lambda_um);

/// Index of the extraordinary wave propagating at angle theta to the optic axis.
double n_extraordinary(const SellmeierSet& set, double lambda_um, double theta_rad);

struct PumpAngle {
  double degrees = 0.0;
  bool operator==(const PumpAngle&) const = default;
};

/// Collinear phase mismatch at degeneracy, Δ₀·l_c, in radians.
struct CollinearMismatch {
  double delta0_lc = 0.0;
  bool operator==(const CollinearMismatch&) const = default;
};

using Tuning = std::variant<PumpAngle, CollinearMismatch>;

struct CrystalConfig {
  double length_mm = 4.0;
  double pump_wavelength_nm = 527.0;
  Tuning tuning = CollinearMismatch{0.0};
  SellmeierSet sellmeier = SellmeierSet::bbo();

  double length_um() const { return length_mm * 1e3; }
  bool operator==(const CrystalConfig&) const = default;
};

struct DispersionScales {
  double ks_per_um = 0.0;          // signal wavenumber at degeneracy
  double ks2_fs2_per_um = 0.0;     // signal GVD at degeneracy
  double q0_per_um = 0.0;          // diffraction scale
  double omega0_rad_per_s = 0.0;   // GVD scale
  double delta0_lc = 0.0;          // collinear mismatch
  double tau_gvm_fs = 0.0;         // signal/pump group delay across the crystal
  double walkoff_length_um = 0.0;  // lateral pump walk-off across the crystal
  double pump_angle_rad = 0.0;
  double kp_per_um = 0.0;
  double walkoff_angle_rad = 0.0;
};

/// Finite-difference steps for dispersion derivatives.
inline constexpr double kOmegaStep = 1e12;  // rad/s
inline constexpr double kThetaStep = 1e-4;  // rad

/// A crystal with its tuning resolved to a pump angle. Cheap to copy.
class Crystal {
 public:
  explicit Crystal(const CrystalConfig& config);

  const CrystalConfig& config() const { return config_; }
  double pump_angle_rad() const { return theta_; }
  double pump_frequency() const { return omega_p_; }
  double length_um() const { return length_um_; }

  /// k_s(Ω) for the ordinary signal at ω_p/2 + Ω, rad/µm.
  double signal_wavenumber(double omega) const;
  /// k_p(Ω_p) for the extraordinary pump at ω_p + Ω_p and the tuned angle.
  double pump_wavenumber(double omega) const;
  double pump_wavenumber(double omega, double theta_rad) const;

  bool signal_in_window(double omega) const;
  bool pump_in_window(double omega) const;

  /// Longitudinal signal wavevector; nullopt when evanescent.
  std::optional<double> kz_signal(const Eigen::Vector2d& q, double omega) const;
  /// Longitudinal pump wavevector with first-order walk-off and paraxial diffraction.
  std::optional<double> kz_pump(const Eigen::Vector2d& q, double omega) const;

  /// ρ = −(1/k_p)·∂k_p/∂θ at the tuned angle.
  double walkoff_angle() const { return rho_; }

  DispersionScales scales() const;

 private:
  CrystalConfig config_;
  double length_um_ = 0.0;
  double omega_p_ = 0.0;
  double theta_ = 0.0;
  double rho_ = 0.0;
};

/// Finds the pump angle giving the requested collinear mismatch.
double solve_pump_angle(const CrystalConfig& config, double delta0_lc);

DispersionScales derive_scales(const CrystalConfig& config);

/// Second derivative of the signal wavenumber at degeneracy with an explicit step (s²/µm).
double signal_gvd(const Crystal& crystal, double step);

}  // namespace pdc
