#include "pdc/schmidt.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

constexpr double kPi = std::numbers::pi;

double two_pi_pow(Dimension d) { return std::pow(2.0 * kPi, to_int(d)); }

// Signal coordinates: (|q|², φ) uniform over the disk, Ω uniform over the interval.
void add_signal(mc::SamplerSpec& spec, Dimension dim, const BandwidthLimits& limits) {
  if (has_space(dim)) spec.uniform(0.0, limits.q_max * limits.q_max).uniform(0.0, 2.0 * kPi);
  if (has_time(dim)) spec.uniform(-limits.omega_max, limits.omega_max);
}

SpectralPoint read_signal(std::span<const double> u, std::size_t& i, Dimension dim, double& jacobian) {
  SpectralPoint w{Eigen::Vector2d::Zero(), 0.0, dim};
  if (has_space(dim)) {
    const double r = std::sqrt(u[i]);
    const double phi = u[i + 1];
    w.q = {r * std::cos(phi), r * std::sin(phi)};
    jacobian *= 0.5;  // d²q = ½ d|q|² dφ
    i += 2;
  }
  if (has_time(dim)) w.omega = u[i++];
  return w;
}

void add_pump(mc::SamplerSpec& spec, Dimension dim, const PumpConfig& pump, double widen) {
  if (has_space(dim)) spec.gaussian(widen * spectral_std_q(pump)).gaussian(widen * spectral_std_q(pump));
  if (has_time(dim)) spec.gaussian(widen * spectral_std_omega(pump));
}

SpectralPoint read_pump(std::span<const double> u, std::size_t& i, Dimension dim) {
  SpectralPoint w{Eigen::Vector2d::Zero(), 0.0, dim};
  if (has_space(dim)) {
    w.q = {u[i], u[i + 1]};
    i += 2;
  }
  if (has_time(dim)) w.omega = u[i++];
  return w;
}

mc::McOptions options_for(const McParams& params, std::uint64_t samples, std::uint64_t stream) {
  return {samples, mc::mix_seed(params.seed, stream), params.shards, params.workers};
}

void require_finite_region(const SchmidtModel& model) {
  const auto& lim = model.sampled_limits();
  const Dimension d = model.dimension();
  if ((has_space(d) && !(std::isfinite(lim.q_max) && lim.q_max > 0.0)) ||
      (has_time(d) && !(std::isfinite(lim.omega_max) && lim.omega_max > 0.0)))
    throw DomainError("sampling needs finite positive limits in every signal coordinate");
}

std::vector<std::string> base_flags(const SchmidtModel& model) {
  std::vector<std::string> flags;
  flags.push_back("prefactor g/(2pi)^(3/2) dropped; N_rel, B_rel relative units");
  flags.push_back("sign convention: delta = delta0*l_c - q^2/q0^2 + Omega^2/Omega0^2");
  if (model.overridden()) flags.push_back("gain profile overridden by test hook");
  else if (model.spec().phase_matching == PhaseMatchKind::Exact)
    flags.push_back("exact Sellmeier phase matching; pump k_z with first-order walk-off and paraxial diffraction");
  else
    flags.push_back("quadratic phase matching");
  if (model.q_surrogate()) flags.push_back("unbounded q_max replaced by surrogate cutoff");
  return flags;
}

}  // namespace

std::string to_string(PhaseMatchKind kind) {
  return kind == PhaseMatchKind::Exact ? "exact" : "quadratic";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::McExact: return "mc_exact";
    case Method::NpwpaIntegral: return "npwpa_integral";
    case Method::AnalyticBox: return "analytic_box";
  }
  return "unknown";
}

SchmidtModel::SchmidtModel(ModelSpec spec, GainOverride gain_override)
    : spec_(std::move(spec)), override_(std::move(gain_override)), phase_match_(QuadraticPhaseMatch{}) {
  validate(spec_.pump);
  std::vector<std::string> issues;
  if (!(spec_.alpha > 0.0)) issues.push_back("model.alpha must be positive");
  if (!(spec_.limits.q_max >= 0.0)) issues.push_back("limits: q_max must be non-negative");
  if (!(spec_.limits.omega_max >= 0.0)) issues.push_back("limits: omega_max must be non-negative");
  if (!issues.empty()) throw ConfigError(std::move(issues));

  const Crystal crystal(spec_.crystal);
  scales_ = crystal.scales();
  if (spec_.phase_matching == PhaseMatchKind::Exact)
    phase_match_ = ExactPhaseMatch{crystal};
  else
    phase_match_ = QuadraticPhaseMatch::from_scales(scales_);

  if (has_time(spec_.dimension) && std::isfinite(spec_.limits.omega_max) &&
      spec_.limits.omega_max >= 0.9 * 0.5 * crystal.pump_frequency())
    throw ConfigError({"limits: omega_max must stay below 0.9 of half the pump frequency"});

  sampled_ = spec_.limits;
  if (spec_.dimension == Dimension::Three && !std::isfinite(sampled_.q_max)) {
    const double y = sampled_.omega_max / scales_.omega0_rad_per_s;
    const double reach = std::max(spec_.alpha, y * y + std::max(scales_.delta0_lc, 0.0));
    sampled_.q_max = 3.0 * std::sqrt(reach) * scales_.q0_per_um;
    q_surrogate_ = true;
  }
}

std::complex<double> SchmidtModel::gain(const SpectralPoint& w1, const SpectralPoint& w2) const {
  if (override_) return override_(w1, w2);
  const auto d = try_delta(w1, w2, phase_match_);
  if (!d) return {0.0, 0.0};
  const double half = 0.5 * *d;
  return sinc(half) * std::polar(1.0, half);
}

std::complex<double> SchmidtModel::amplitude(const SpectralPoint& w1, const SpectralPoint& w2) const {
  return spectrum(spec_.pump, w1 + w2) * gain(w1, w2);
}

double SchmidtModel::region_volume() const {
  double v = 1.0;
  if (has_space(spec_.dimension)) v *= kPi * sampled_.q_max * sampled_.q_max;
  if (has_time(spec_.dimension)) v *= 2.0 * sampled_.omega_max;
  return v;
}

std::complex<double> biphoton_amplitude(const SpectralPoint& w1, const SpectralPoint& w2,
                                        const SchmidtModel& model) {
  return model.amplitude(w1, w2);
}

mc::McEstimate estimate_N(const SchmidtModel& model, const McParams& params) {
  require_finite_region(model);
  const Dimension dim = model.dimension();
  const PumpConfig& pump = model.spec().pump;
  mc::SamplerSpec spec;
  add_signal(spec, dim, model.sampled_limits());
  add_pump(spec, dim, pump, 1.0);
  auto f = [&](std::span<const double> u) {
    std::size_t i = 0;
    double jac = 1.0;
    const SpectralPoint w1 = read_signal(u, i, dim, jac);
    const SpectralPoint wp = read_pump(u, i, dim);
    const double a = spectrum(pump, wp);
    return jac * a * a * std::norm(model.gain(w1, wp - w1));
  };
  return mc::estimate(f, spec, options_for(params, params.samples_n, 0));
}

mc::ComplexMcEstimate estimate_B(const SchmidtModel& model, const McParams& params) {
  require_finite_region(model);
  const Dimension dim = model.dimension();
  const PumpConfig& pump = model.spec().pump;
  mc::SamplerSpec spec;
  add_signal(spec, dim, model.sampled_limits());
  add_pump(spec, dim, pump, 1.0);
  add_pump(spec, dim, pump, 1.0);
  add_pump(spec, dim, pump, std::numbers::sqrt2);
  auto f = [&](std::span<const double> u) {
    std::size_t i = 0;
    double jac = 1.0;
    const SpectralPoint w1 = read_signal(u, i, dim, jac);
    const SpectralPoint s = read_pump(u, i, dim);
    const SpectralPoint s2 = read_pump(u, i, dim);
    const SpectralPoint d = read_pump(u, i, dim);
    const SpectralPoint half{0.5 * d.q, 0.5 * d.omega, dim};
    const SpectralPoint wp = s + half;
    const SpectralPoint wp2 = s2 - half;
    const SpectralPoint w2 = wp - w1;
    const SpectralPoint w1b = w1 - d;
    const SpectralPoint w2b = wp2 - w1b;
    const double pump_part = spectrum(pump, wp) * spectrum(pump, wp2) * spectrum(pump, wp - d) *
                             spectrum(pump, wp2 + d);
    const std::complex<double> v = model.gain(w1, w2) * model.gain(w1b, w2b) *
                                   std::conj(model.gain(w1b, w2)) * std::conj(model.gain(w1, w2b));
    return jac * pump_part * v;
  };
  return mc::estimate_complex(f, spec, options_for(params, params.samples_b, 1));
}

SchmidtResult schmidt_mc(const SchmidtModel& model, const McParams& params) {
  const auto n = estimate_N(model, params);
  const auto b = estimate_B(model, params);
  if (!(b.real.value > 3.0 * b.real.std_error)) {
    std::ostringstream msg;
    msg << "B estimate " << b.real.value << " +- " << b.real.std_error
        << " is consistent with zero; increase mc.samples_b";
    throw NumericalError(msg.str());
  }
  SchmidtResult r;
  r.method = Method::McExact;
  r.dimension = model.dimension();
  r.N_rel = n.value;
  r.N_err = n.std_error;
  r.B_rel = b.real.value;
  r.B_err = b.real.std_error;
  r.B_imag = b.imag.value;
  r.B_imag_err = b.imag.std_error;
  r.K = n.value * n.value / b.real.value;
  const double rn = n.std_error / n.value;
  const double rb = b.real.std_error / b.real.value;
  r.K_err = r.K * std::sqrt(4.0 * rn * rn + rb * rb);
  r.npwpa = npwpa_check(model.spec().pump, model.scales());
  r.flags = base_flags(model);
  if (r.K < 1.0 - 3.0 * r.K_err) r.flags.push_back("K below purity bound; collected region leaks");
  return r;
}

SchmidtResult schmidt_npwpa_integral(const SchmidtModel& model) {
  require_finite_region(model);
  const Dimension dim = model.dimension();
  const auto& limits = model.sampled_limits();
  double i2 = 0.0;
  double i4 = 0.0;
  if (model.overridden()) {
    auto diag = [&](int power) {
      return [&model, dim, power](double q_squared, double omega) {
        const SpectralPoint w{{std::sqrt(q_squared), 0.0}, has_time(dim) ? omega : 0.0, dim};
        return std::pow(std::norm(model.gain(w, -w)), power);
      };
    };
    i2 = pm_integral(diag(1), dim, limits, model.scales().q0_per_um, model.scales().omega0_rad_per_s);
    i4 = pm_integral(diag(2), dim, limits, model.scales().q0_per_um, model.scales().omega0_rad_per_s);
  } else {
    i2 = pm_volume(model.phase_match(), dim, limits, Surrogate::SincSquared, 1, model.spec().alpha);
    i4 = pm_volume(model.phase_match(), dim, limits, Surrogate::SincSquared, 2, model.spec().alpha);
  }
  if (!(i4 > 0.0)) throw NumericalError("phase-matching integral of |V|^4 vanished");
  SchmidtResult r;
  r.method = Method::NpwpaIntegral;
  r.dimension = dim;
  r.K = pump_factor(model.spec().pump, dim) * i2 * i2 / (two_pi_pow(dim) * i4);
  // Relative units consistent with the Monte Carlo estimators in the NPWPA limit.
  r.N_rel = envelope_norm2(model.spec().pump, dim) * i2;
  r.B_rel = two_pi_pow(dim) * envelope_norm4(model.spec().pump, dim) * i4;
  r.npwpa = npwpa_check(model.spec().pump, model.scales());
  r.flags = base_flags(model);
  r.flags.push_back("nearly-plane-wave-pump factorization");
  return r;
}

namespace analytic {

namespace {
double mode_density(double q0, double omega0, const PumpConfig& p) {
  return q0 * q0 * omega0 * p.sigma_um * p.sigma_um * p.tau_s();
}
}  // namespace

double k3d_small_bandwidth(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha) {
  const double x = omega_bar / std::sqrt(alpha);
  return alpha / 4.0 * std::sqrt(alpha / kPi) * mode_density(q0, omega0, pump) * (x + x * x * x / 3.0);
}

double k3d_large_bandwidth(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha) {
  const double x = omega_bar / std::sqrt(alpha);
  return alpha / 2.0 * std::sqrt(alpha / kPi) * mode_density(q0, omega0, pump) * (x - 1.0 / 3.0);
}

// (3/8)π at α = 3π/2 in the printed form is α/4 in general.
double k2d_below(double q_bar, double q0, const PumpConfig& pump, double alpha) {
  return alpha / 4.0 * pump.sigma_um * pump.sigma_um * q0 * q0 * q_bar * q_bar / alpha;
}

double k2d_saturated(double q0, const PumpConfig& pump, double alpha) {
  return alpha / 4.0 * pump.sigma_um * pump.sigma_um * q0 * q0;
}

double k1d_below(double omega_bar, double omega0, const PumpConfig& pump, double alpha) {
  return std::sqrt(alpha / kPi) * pump.tau_s() * omega0 * omega_bar / std::sqrt(alpha);
}

double k1d_saturated(double omega0, const PumpConfig& pump, double alpha) {
  return std::sqrt(alpha / kPi) * pump.tau_s() * omega0;
}

double k3d(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha) {
  return omega_bar < std::sqrt(alpha) ? k3d_small_bandwidth(omega_bar, q0, omega0, pump, alpha)
                                      : k3d_large_bandwidth(omega_bar, q0, omega0, pump, alpha);
}

double k2d(double q_bar, double q0, const PumpConfig& pump, double alpha) {
  return q_bar < std::sqrt(alpha) ? k2d_below(q_bar, q0, pump, alpha) : k2d_saturated(q0, pump, alpha);
}

double k1d(double omega_bar, double omega0, const PumpConfig& pump, double alpha) {
  return omega_bar < std::sqrt(alpha) ? k1d_below(omega_bar, omega0, pump, alpha)
                                      : k1d_saturated(omega0, pump, alpha);
}

}  // namespace analytic

SchmidtResult schmidt_analytic(const SchmidtModel& model) {
  if (model.spec().phase_matching != PhaseMatchKind::Quadratic || model.overridden())
    throw DomainError("analytic_box needs the quadratic phase-matching model; use npwpa_integral");
  const Dimension dim = model.dimension();
  const auto& spec = model.spec();
  const auto& sc = model.scales();
  const double alpha = spec.alpha;
  const double q0 = sc.q0_per_um;
  const double w0 = sc.omega0_rad_per_s;
  const double y = spec.limits.omega_max / w0;
  const double qb = spec.limits.q_max / q0;
  const bool collinear = sc.delta0_lc == 0.0;

  SchmidtResult r;
  r.method = Method::AnalyticBox;
  r.dimension = dim;
  r.npwpa = npwpa_check(spec.pump, sc);
  r.flags = base_flags(model);
  r.flags.push_back("box-function approximation");

  bool printed = false;
  if (collinear) {
    switch (dim) {
      case Dimension::One:
        if (std::isfinite(y)) r.K = analytic::k1d(y, w0, spec.pump, alpha), printed = true;
        else r.K = analytic::k1d_saturated(w0, spec.pump, alpha), printed = true;
        break;
      case Dimension::Two:
        r.K = std::isfinite(qb) ? analytic::k2d(qb, q0, spec.pump, alpha)
                                : analytic::k2d_saturated(q0, spec.pump, alpha);
        printed = true;
        break;
      case Dimension::Three:
        if (std::isfinite(y) && (!std::isfinite(qb) || qb * qb >= y * y + alpha)) {
          r.K = analytic::k3d(y, q0, w0, spec.pump, alpha);
          printed = true;
        }
        break;
    }
  }
  if (!printed) {
    const double volume = box_region_volume(model.quadratic(), dim, spec.limits, alpha);
    if (!(volume > 0.0))
      throw NumericalError("collected region contains no phase-matched volume; box surrogate undefined");
    r.K = pump_factor(spec.pump, dim) * volume / two_pi_pow(dim);
    r.flags.push_back("box volume by radial quadrature");
  }
  return r;
}

SchmidtResult evaluate(const SchmidtModel& model, const McParams& params) {
  switch (model.spec().method) {
    case Method::McExact: return schmidt_mc(model, params);
    case Method::NpwpaIntegral: return schmidt_npwpa_integral(model);
    case Method::AnalyticBox: return schmidt_analytic(model);
  }
  throw std::logic_error("unknown method");
}

std::vector<FactorizabilityRow> factorizability_gap(const ModelSpec& base, std::span<const double> bandwidths) {
  ModelSpec spec = base;
  spec.phase_matching = PhaseMatchKind::Quadratic;
  spec.method = Method::AnalyticBox;
  const DispersionScales sc = derive_scales(spec.crystal);
  std::vector<FactorizabilityRow> rows;
  for (double x : bandwidths) {
    FactorizabilityRow row;
    row.bandwidth = x;
    ModelSpec s3 = spec;
    s3.dimension = Dimension::Three;
    s3.limits = {x * sc.q0_per_um, x * sc.omega0_rad_per_s};
    ModelSpec s2 = s3;
    s2.dimension = Dimension::Two;
    ModelSpec s1 = s3;
    s1.dimension = Dimension::One;
    row.k3d = schmidt_analytic(SchmidtModel(s3)).K;
    row.k2d = schmidt_analytic(SchmidtModel(s2)).K;
    row.k1d = schmidt_analytic(SchmidtModel(s1)).K;
    row.product = row.k1d * row.k2d;
    row.ratio = row.k3d / row.product;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BetaRow> beta_sweep(const ModelSpec& base, std::span<const double> betas, const McParams& params) {
  const DispersionScales sc = derive_scales(base.crystal);
  std::vector<BetaRow> rows;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    BetaRow row;
    row.beta = betas[i];
    ModelSpec spec = base;
    spec.pump = pump_for_beta(betas[i], sc, base.pump.gain);
    row.sigma_um = spec.pump.sigma_um;
    row.tau_fs = spec.pump.tau_fs;
    McParams p = params;
    p.seed = mc::mix_seed(params.seed, i);
    row.mc = schmidt_mc(SchmidtModel(spec), p);
    ModelSpec quad = spec;
    quad.phase_matching = PhaseMatchKind::Quadratic;
    row.k_analytic = schmidt_analytic(SchmidtModel(quad)).K;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pdc
