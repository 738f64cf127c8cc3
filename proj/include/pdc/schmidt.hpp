#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pdc/dispersion.hpp"
#include "pdc/mc_engine.hpp"
#include "pdc/phasematch.hpp"
#include "pdc/pump.hpp"

namespace pdc {

enum class PhaseMatchKind { Exact, Quadratic };
enum class Method { McExact, NpwpaIntegral, AnalyticBox };

std::string to_string(PhaseMatchKind kind);
std::string to_string(Method method);

struct ModelSpec {
  Dimension dimension = Dimension::Three;
  PhaseMatchKind phase_matching = PhaseMatchKind::Quadratic;
  CrystalConfig crystal;
  PumpConfig pump;
  BandwidthLimits limits;  // physical units; 1D ignores q_max, 2D ignores omega_max
  Method method = Method::McExact;
  double alpha = kDefaultAlpha;
};

struct McParams {
  std::uint64_t samples_n = 2'000'000;
  std::uint64_t samples_b = 10'000'000;
  std::uint64_t seed = 1;
  std::uint32_t shards = 64;
  unsigned workers = 0;
};

/// Replaces V(w1, w2) in every evaluation path. Test hook; must be isotropic in q
/// for the deterministic paths, which evaluate it on the diagonal in radial form.
using GainOverride = std::function<std::complex<double>(const SpectralPoint&, const SpectralPoint&)>;

/// A ModelSpec with its crystal tuning, dispersion scales and sampled region resolved.
class SchmidtModel {
 public:
  explicit SchmidtModel(ModelSpec spec, GainOverride gain_override = {});

  const ModelSpec& spec() const { return spec_; }
  Dimension dimension() const { return spec_.dimension; }
  const DispersionScales& scales() const { return scales_; }
  const PhaseMatchModel& phase_match() const { return phase_match_; }
  QuadraticPhaseMatch quadratic() const { return QuadraticPhaseMatch::from_scales(scales_); }
  bool overridden() const { return static_cast<bool>(override_); }

  /// The collected region actually integrated: an infinite 3D q cutoff is replaced
  /// by 3·sqrt(max(α, Ω̄_max² + max(Δ₀l_c, 0)))·q₀.
  const BandwidthLimits& sampled_limits() const { return sampled_; }
  bool q_surrogate() const { return q_surrogate_; }

  /// V(w1, w2); non-propagating modes give zero.
  std::complex<double> gain(const SpectralPoint& w1, const SpectralPoint& w2) const;

  /// ψ'(w1, w2) = Ã_p(w1 + w2)·V(w1, w2), with g/(2π)^{3/2} dropped.
  std::complex<double> amplitude(const SpectralPoint& w1, const SpectralPoint& w2) const;

  /// Measure of the sampled signal region.
  double region_volume() const;

 private:
  ModelSpec spec_;
  GainOverride override_;
  DispersionScales scales_;
  PhaseMatchModel phase_match_;
  BandwidthLimits sampled_;
  bool q_surrogate_ = false;
};

struct SchmidtResult {
  double K = 0.0;
  double K_err = 0.0;
  double N_rel = 0.0;
  double N_err = 0.0;
  double B_rel = 0.0;
  double B_err = 0.0;
  double B_imag = 0.0;
  double B_imag_err = 0.0;
  Method method = Method::AnalyticBox;
  Dimension dimension = Dimension::Three;
  NpwpaReport npwpa;
  std::vector<std::string> flags;
};

std::complex<double> biphoton_amplitude(const SpectralPoint& w1, const SpectralPoint& w2,
                                        const SchmidtModel& model);

/// ∫dw1∫dw2 |ψ'|² with w1 uniform over the collected region and w1 + w2 drawn from |Ã_p|².
mc::McEstimate estimate_N(const SchmidtModel& model, const McParams& params);

/// The four-fold overlap integral B' in the variables (w1, δ = w1 − w1', w_p, w_p').
/// The pump pair is sampled through the unit-Jacobian shift u = w_p − δ/2,
/// u' = w_p' + δ/2, under which the Gaussian pump factor separates into independent
/// Gaussians of std (1/σ_p, 1/τ_p) for u, u' and (√2/σ_p, √2/τ_p) for δ.
mc::ComplexMcEstimate estimate_B(const SchmidtModel& model, const McParams& params);

SchmidtResult schmidt_mc(const SchmidtModel& model, const McParams& params);
SchmidtResult schmidt_npwpa_integral(const SchmidtModel& model);
SchmidtResult schmidt_analytic(const SchmidtModel& model);

/// Dispatches on spec().method.
SchmidtResult evaluate(const SchmidtModel& model, const McParams& params);

/// Closed-form box-function results for collinear tuning. omega_bar, q_bar are the
/// cutoffs in units of Ω₀, q₀; pump enters through σ_p and τ_p.
namespace analytic {
double k3d_small_bandwidth(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha);
double k3d_large_bandwidth(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha);
double k2d_below(double q_bar, double q0, const PumpConfig& pump, double alpha);
double k2d_saturated(double q0, const PumpConfig& pump, double alpha);
double k1d_below(double omega_bar, double omega0, const PumpConfig& pump, double alpha);
double k1d_saturated(double omega0, const PumpConfig& pump, double alpha);

double k3d(double omega_bar, double q0, double omega0, const PumpConfig& pump, double alpha);
double k2d(double q_bar, double q0, const PumpConfig& pump, double alpha);
double k1d(double omega_bar, double omega0, const PumpConfig& pump, double alpha);
}  // namespace analytic

struct FactorizabilityRow {
  double bandwidth = 0.0;  // Ω̄_max = q̄_max
  double k3d = 0.0;
  double k1d = 0.0;
  double k2d = 0.0;
  double product = 0.0;
  double ratio = 0.0;
};

/// 3D box-function K with joint cutoffs against the product of the 1D and 2D results.
std::vector<FactorizabilityRow> factorizability_gap(const ModelSpec& base, std::span<const double> bandwidths);

struct BetaRow {
  double beta = 0.0;
  double sigma_um = 0.0;
  double tau_fs = 0.0;
  SchmidtResult mc;
  double k_analytic = 0.0;
};

/// Monte Carlo K over a β grid; per-point seeds are mix_seed(params.seed, index).
std::vector<BetaRow> beta_sweep(const ModelSpec& base, std::span<const double> betas, const McParams& params);

}  // namespace pdc
