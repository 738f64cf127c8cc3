#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>

#include <Eigen/Core>

#include "pdc/dispersion.hpp"

namespace pdc {

enum class Dimension { One = 1, Two = 2, Three = 3 };

inline int to_int(Dimension d) { return static_cast<int>(d); }
bool has_space(Dimension d);
bool has_time(Dimension d);

/// A point w = (q, Ω) of transverse wavevector (rad/µm) and frequency shift (rad/s).
/// Components that the dimension does not carry are held at zero.
struct SpectralPoint {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  double omega = 0.0;
  Dimension dim = Dimension::Three;

  static SpectralPoint temporal(double omega) { return {Eigen::Vector2d::Zero(), omega, Dimension::One}; }
  static SpectralPoint spatial(double qx, double qy) { return {{qx, qy}, 0.0, Dimension::Two}; }
  static SpectralPoint full(double qx, double qy, double omega) {
    return {{qx, qy}, omega, Dimension::Three};
  }

  /// True when absent components are zero.
  bool consistent() const;

  SpectralPoint operator-() const { return {-q, -omega, dim}; }
  friend SpectralPoint operator+(const SpectralPoint& a, const SpectralPoint& b) {
    return {a.q + b.q, a.omega + b.omega, a.dim};
  }
  friend SpectralPoint operator-(const SpectralPoint& a, const SpectralPoint& b) {
    return {a.q - b.q, a.omega - b.omega, a.dim};
  }
};

/// Full Sellmeier phase mismatch [k_sz(w1) + k_sz(w2) − k_pz(w1 + w2)]·l_c.
struct ExactPhaseMatch {
  Crystal crystal;
};

/// Paraxial, quadratic-dispersion mismatch
///   Δ(w1, w2) = Δ₀l_c − |q1 − q2|²/(4q₀²) + (Ω1 − Ω2)²/(4Ω₀²),
/// which on the diagonal w2 = −w1 is Δ₀l_c − q²/q₀² + Ω²/Ω₀².
/// The transverse term carries a minus sign in every dimension.
struct QuadraticPhaseMatch {
  double q0 = 0.0;      // rad/µm
  double omega0 = 0.0;  // rad/s
  double delta0_lc = 0.0;

  static QuadraticPhaseMatch from_scales(const DispersionScales& s) {
    return {s.q0_per_um, s.omega0_rad_per_s, s.delta0_lc};
  }
};

using PhaseMatchModel = std::variant<ExactPhaseMatch, QuadraticPhaseMatch>;

/// Detection cutoffs: |q| ≤ q_max and |Ω| ≤ Ω_max. Either may be infinite.
struct BandwidthLimits {
  double q_max = std::numeric_limits<double>::infinity();      // rad/µm
  double omega_max = std::numeric_limits<double>::infinity();  // rad/s

  bool contains(const SpectralPoint& w) const {
    return w.q.squaredNorm() <= q_max * q_max && std::abs(w.omega) <= omega_max;
  }
};

inline constexpr double kDefaultAlpha = 1.5 * std::numbers::pi;

double sinc(double x);

/// Box surrogate of sinc²: π/α on (−α/2, α/2), zero elsewhere.
double chi_box(double x, double alpha);

/// Phase mismatch; throws NonPropagatingError for evanescent or out-of-window modes.
double delta(const SpectralPoint& w1, const SpectralPoint& w2, const PhaseMatchModel& model);

/// Same as delta() but reports non-propagating modes as nullopt. For hot loops.
std::optional<double> try_delta(const SpectralPoint& w1, const SpectralPoint& w2,
                                const PhaseMatchModel& model);

/// V(w1, w2) = sinc(Δ/2)·exp(iΔ/2).
std::complex<double> gain_profile(const SpectralPoint& w1, const SpectralPoint& w2,
                                  const PhaseMatchModel& model);

/// V on the diagonal, V(w) = V(w, −w).
std::complex<double> v_diag(const SpectralPoint& w, const PhaseMatchModel& model);

enum class Surrogate { SincSquared, Box };

/// |V|² on the diagonal as a function of (|q|², Ω); must be isotropic in q.
using DiagonalWeight = std::function<double(double q_squared, double omega)>;

/// Integral over the collected region of a diagonal weight, optionally raised to a power.
/// The q-disk is reduced to a radial integral in |q|²; all integrals use adaptive
/// Gauss–Kronrod quadrature. Throws NumericalError if the requested tolerance is missed.
double pm_integral(const DiagonalWeight& weight, Dimension dim, const BandwidthLimits& limits,
                   double q_scale, double omega_scale);

/// ∫ dw s(Δ(w)/2)^power over the collected region, s = sinc² or χ_α.
/// power = 1 gives the phase-matching volume; power = 2 gives ∫|V|⁴ (or ∫χ²).
double pm_volume(const PhaseMatchModel& model, Dimension dim, const BandwidthLimits& limits,
                 Surrogate surrogate, int power = 1, double alpha = kDefaultAlpha);

/// Geometric measure of {w in region : |Δ(w)| < α} for the quadratic model, computed
/// from the exact piecewise-polynomial radial reduction.
double box_region_volume(const QuadraticPhaseMatch& model, Dimension dim,
                         const BandwidthLimits& limits, double alpha = kDefaultAlpha);

}  // namespace pdc
