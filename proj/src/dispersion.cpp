#include "pdc/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

double wavelength_um(double omega) { return 2.0 * std::numbers::pi * kSpeedOfLight / omega; }

void require_window(const SellmeierSet& set, double lambda_um) {
  if (!set.contains(lambda_um)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_um << " um outside transparency window [" << set.window_min_um
        << ", " << set.window_max_um << "] of " << set.name;
    throw DomainError(msg.str());
  }
}

double collinear_mismatch(const Crystal& crystal, double theta) {
  return (2.0 * crystal.signal_wavenumber(0.0) - crystal.pump_wavenumber(0.0, theta)) *
         crystal.length_um();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::invalid_argument([&] {
        std::string joined = "invalid configuration:";
        for (const auto& issue : issues) joined += "\n  " + issue;
        return joined;
      }()),
      issues_(std::move(issues)) {}

SellmeierSet SellmeierSet::bbo() {
  SellmeierSet set;
  set.name = "bbo";
  set.ordinary = {2.7359, 0.01878, 0.01822, 0.01354};
  set.extraordinary = {2.3753, 0.01224, 0.01667, 0.01516};
  return set;
}

double n_ordinary(const SellmeierSet& set, double lambda_um) {
  require_window(set, lambda_um);
  return std::sqrt(set.ordinary.index_squared(lambda_um));
}

double n_extraordinary(const SellmeierSet& set, double lambda_um, double theta_rad) {
  require_window(set, lambda_um);
  const double no2 = set.ordinary.index_squared(lambda_um);
  const double ne2 = set.extraordinary.index_squared(lambda_um);
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  return 1.0 / std::sqrt(c * c / no2 + s * s / ne2);
}

Crystal::Crystal(const CrystalConfig& config)
    : config_(config),
      length_um_(config.length_um()),
      omega_p_(2.0 * std::numbers::pi * kSpeedOfLight / (config.pump_wavelength_nm * 1e-3)) {
  std::vector<std::string> issues;
  if (!(config.length_mm > 0.0)) issues.push_back("crystal length must be positive");
  if (!config.sellmeier.contains(config.pump_wavelength_nm * 1e-3))
    issues.push_back("pump wavelength outside transparency window");
  if (!config.sellmeier.contains(2.0 * config.pump_wavelength_nm * 1e-3))
    issues.push_back("degenerate signal wavelength outside transparency window");
  if (!issues.empty()) throw ConfigError(std::move(issues));

  if (const auto* angle = std::get_if<PumpAngle>(&config.tuning)) {
    theta_ = angle->degrees * std::numbers::pi / 180.0;
    if (theta_ < 0.0 || theta_ > std::numbers::pi / 2)
      throw ConfigError({"pump angle must lie in [0, 90] degrees"});
  } else {
    theta_ = solve_pump_angle(config, std::get<CollinearMismatch>(config.tuning).delta0_lc);
  }
  const double kp = pump_wavenumber(0.0);
  const double dk_dtheta =
      (pump_wavenumber(0.0, theta_ + kThetaStep) - pump_wavenumber(0.0, theta_ - kThetaStep)) /
      (2.0 * kThetaStep);
  rho_ = -dk_dtheta / kp;
}

double Crystal::signal_wavenumber(double omega) const {
  const double w = 0.5 * omega_p_ + omega;
  return n_ordinary(config_.sellmeier, wavelength_um(w)) * w / kSpeedOfLight;
}

double Crystal::pump_wavenumber(double omega) const { return pump_wavenumber(omega, theta_); }

double Crystal::pump_wavenumber(double omega, double theta_rad) const {
  const double w = omega_p_ + omega;
  return n_extraordinary(config_.sellmeier, wavelength_um(w), theta_rad) * w / kSpeedOfLight;
}

bool Crystal::signal_in_window(double omega) const {
  const double w = 0.5 * omega_p_ + omega;
  return w > 0.0 && config_.sellmeier.contains(wavelength_um(w));
}

bool Crystal::pump_in_window(double omega) const {
  const double w = omega_p_ + omega;
  return w > 0.0 && config_.sellmeier.contains(wavelength_um(w));
}

std::optional<double> Crystal::kz_signal(const Eigen::Vector2d& q, double omega) const {
  const double k = signal_wavenumber(omega);
  const double kz2 = k * k - q.squaredNorm();
  if (kz2 < 0.0) return std::nullopt;
  return std::sqrt(kz2);
}

std::optional<double> Crystal::kz_pump(const Eigen::Vector2d& q, double omega) const {
  const double k = pump_wavenumber(omega);
  const double q2 = q.squaredNorm();
  if (q2 > k * k) return std::nullopt;
  return k - rho_ * q.x() - q2 / (2.0 * k);
}

double signal_gvd(const Crystal& crystal, double step) {
  return (crystal.signal_wavenumber(step) - 2.0 * crystal.signal_wavenumber(0.0) +
          crystal.signal_wavenumber(-step)) /
         (step * step);
}

DispersionScales Crystal::scales() const {
  DispersionScales s;
  const double h = kOmegaStep;
  s.ks_per_um = signal_wavenumber(0.0);
  const double ks2 = signal_gvd(*this, h);  // s²/µm
  s.ks2_fs2_per_um = ks2 * 1e30;
  s.q0_per_um = std::sqrt(s.ks_per_um / length_um_);
  s.omega0_rad_per_s = std::sqrt(1.0 / (ks2 * length_um_));
  s.kp_per_um = pump_wavenumber(0.0);
  s.delta0_lc = (2.0 * s.ks_per_um - s.kp_per_um) * length_um_;
  if (const auto* m = std::get_if<CollinearMismatch>(&config_.tuning)) s.delta0_lc = m->delta0_lc;
  const double ks1 = (signal_wavenumber(h) - signal_wavenumber(-h)) / (2.0 * h);
  const double kp1 = (pump_wavenumber(h) - pump_wavenumber(-h)) / (2.0 * h);
  s.tau_gvm_fs = std::abs(ks1 - kp1) * length_um_ * 1e15;
  s.walkoff_angle_rad = rho_;
  s.walkoff_length_um = std::abs(rho_) * length_um_;
  s.pump_angle_rad = theta_;
  return s;
}

double solve_pump_angle(const CrystalConfig& config, double delta0_lc) {
  CrystalConfig probe_config = config;
  probe_config.tuning = PumpAngle{0.0};
  const Crystal probe(probe_config);
  auto f = [&](double theta) { return collinear_mismatch(probe, theta) - delta0_lc; };
  const double lo = 0.0;
  const double hi = std::numbers::pi / 2;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo * f_hi > 0.0) {
    std::ostringstream msg;
    msg << "no pump angle gives delta0*l_c = " << delta0_lc << ": bracket [0, pi/2] maps to ["
        << f_lo + delta0_lc << ", " << f_hi + delta0_lc << "]";
    throw NumericalError(msg.str());
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (a + b);
}

DispersionScales derive_scales(const CrystalConfig& config) { return Crystal(config).scales(); }

}  // namespace pdc
