#include "pdc/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

constexpr double kInnerTolerance = 1e-11;
constexpr double kOuterTolerance = 1e-10;

// Adaptive Gauss–Kronrod on [a, b] split into pieces no wider than max_piece.
template <class F>
double integrate_pieces(F&& f, double a, double b, double max_piece, double tol) {
  if (!(b > a)) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_piece)));
  const double width = (b - a) / pieces;
  double total = 0.0;
  double total_error = 0.0;
  double total_l1 = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == pieces) ? b : lo + width;
    double error = 0.0;
    double l1 = 0.0;
    // Integrate over t in [0, 1] so Boost's unscaled error floor and its relative
    // tolerance agree even on vanishing intervals.
    const double w = hi - lo;
    auto g = [&](double t) { return w * f(lo + w * t); };
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, tol, &error, &l1);
    total_error += 0.5 * error;
    total_l1 += l1;
  }
  // Nested integrals carry the inner quadrature noise, so the acceptance floor is 1e-6.
  if (total_error > std::max(100.0 * tol, 1e-6) * total_l1 + 1e-300) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: achieved error " << total_error
        << " against L1 " << total_l1;
    throw NumericalError(msg.str());
  }
  return total;
}

// Exact quadrature of a piecewise polynomial of degree <= 2 between breakpoints.
template <class F>
double integrate_piecewise_quadratic(F&& f, std::vector<double> breaks, double a, double b) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (hi > lo) total += boost::math::quadrature::gauss<double, 7>::integrate(f, lo, hi);
  }
  return total;
}

double phase_scale_q(const PhaseMatchModel& model) {
  if (const auto* quad = std::get_if<QuadraticPhaseMatch>(&model)) return quad->q0;
  return std::get<ExactPhaseMatch>(model).crystal.scales().q0_per_um;
}

double phase_scale_omega(const PhaseMatchModel& model) {
  if (const auto* quad = std::get_if<QuadraticPhaseMatch>(&model)) return quad->omega0;
  return std::get<ExactPhaseMatch>(model).crystal.scales().omega0_rad_per_s;
}

SpectralPoint radial_point(Dimension dim, double q_squared, double omega) {
  return {{std::sqrt(q_squared), 0.0}, has_time(dim) ? omega : 0.0, dim};
}

}  // namespace

bool has_space(Dimension d) { return d != Dimension::One; }
bool has_time(Dimension d) { return d != Dimension::Two; }

bool SpectralPoint::consistent() const {
  if (!has_space(dim) && !q.isZero(0.0)) return false;
  if (!has_time(dim) && omega != 0.0) return false;
  return true;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double chi_box(double x, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("box width alpha must be positive");
  return (x > -0.5 * alpha && x < 0.5 * alpha) ? std::numbers::pi / alpha : 0.0;
}

std::optional<double> try_delta(const SpectralPoint& w1, const SpectralPoint& w2,
                                const PhaseMatchModel& model) {
  if (const auto* quad = std::get_if<QuadraticPhaseMatch>(&model)) {
    const double dq2 = (w1.q - w2.q).squaredNorm();
    const double dw = w1.omega - w2.omega;
    return quad->delta0_lc - dq2 / (4.0 * quad->q0 * quad->q0) +
           dw * dw / (4.0 * quad->omega0 * quad->omega0);
  }
  const Crystal& crystal = std::get<ExactPhaseMatch>(model).crystal;
  const double pump_omega = w1.omega + w2.omega;
  if (!crystal.signal_in_window(w1.omega) || !crystal.signal_in_window(w2.omega) ||
      !crystal.pump_in_window(pump_omega))
    return std::nullopt;
  const auto k1 = crystal.kz_signal(w1.q, w1.omega);
  const auto k2 = crystal.kz_signal(w2.q, w2.omega);
  const auto kp = crystal.kz_pump(w1.q + w2.q, pump_omega);
  if (!k1 || !k2 || !kp) return std::nullopt;
  return (*k1 + *k2 - *kp) * crystal.length_um();
}

double delta(const SpectralPoint& w1, const SpectralPoint& w2, const PhaseMatchModel& model) {
  if (w1.dim != w2.dim) throw std::invalid_argument("spectral points of different dimension");
  if (!w1.consistent() || !w2.consistent())
    throw std::invalid_argument("spectral point carries components its dimension lacks");
  const auto d = try_delta(w1, w2, model);
  if (!d) throw NonPropagatingError("mode is evanescent or outside the transparency window");
  return *d;
}

std::complex<double> gain_profile(const SpectralPoint& w1, const SpectralPoint& w2,
                                  const PhaseMatchModel& model) {
  const double half = 0.5 * delta(w1, w2, model);
  return sinc(half) * std::polar(1.0, half);
}

std::complex<double> v_diag(const SpectralPoint& w, const PhaseMatchModel& model) {
  return gain_profile(w, -w, model);
}

double pm_integral(const DiagonalWeight& weight, Dimension dim, const BandwidthLimits& limits,
                   double q_scale, double omega_scale) {
  const bool space = has_space(dim);
  const bool time = has_time(dim);
  if ((space && !std::isfinite(limits.q_max)) || (time && !std::isfinite(limits.omega_max)))
    throw DomainError("phase-matching integral needs finite limits in every sampled coordinate");
  if (space && !(q_scale > 0.0)) throw std::invalid_argument("q scale must be positive");
  if (time && !(omega_scale > 0.0)) throw std::invalid_argument("omega scale must be positive");

  const double u_max = space ? std::pow(limits.q_max / q_scale, 2) : 0.0;
  const double y_max = time ? limits.omega_max / omega_scale : 0.0;
  const double q2s = q_scale * q_scale;
  constexpr double kPiecesU = std::numbers::pi;
  constexpr double kPiecesY = 0.25;

  auto radial = [&](double y, double tol) {
    auto f = [&](double u) { return weight(u * q2s, y * omega_scale); };
    return integrate_pieces(f, 0.0, u_max, kPiecesU, tol);
  };

  switch (dim) {
    case Dimension::One: {
      auto f = [&](double y) { return weight(0.0, y * omega_scale); };
      return omega_scale * integrate_pieces(f, -y_max, y_max, kPiecesY, kOuterTolerance);
    }
    case Dimension::Two:
      return std::numbers::pi * q2s * radial(0.0, kOuterTolerance);
    case Dimension::Three: {
      auto f = [&](double y) { return radial(y, kInnerTolerance); };
      return std::numbers::pi * q2s * omega_scale *
             integrate_pieces(f, -y_max, y_max, kPiecesY, kOuterTolerance);
    }
  }
  throw std::logic_error("unreachable dimension");
}

double box_region_volume(const QuadraticPhaseMatch& model, Dimension dim,
                         const BandwidthLimits& limits, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("box width alpha must be positive");
  const double d0 = model.delta0_lc;
  const double u_max = std::pow(limits.q_max / model.q0, 2);
  double y_max = limits.omega_max / model.omega0;

  // Length of {u in [0, u_max] : |c − u| < α}.
  auto radial_length = [&](double c) {
    return std::max(0.0, std::min(u_max, c + alpha) - std::max(0.0, c - alpha));
  };

  switch (dim) {
    case Dimension::One: {
      if (alpha - d0 <= 0.0) return 0.0;
      const double lo = std::sqrt(std::max(0.0, -alpha - d0));
      const double hi = std::min(y_max, std::sqrt(alpha - d0));
      return model.omega0 * 2.0 * std::max(0.0, hi - lo);
    }
    case Dimension::Two: {
      const double length = radial_length(d0);
      if (!std::isfinite(length)) throw DomainError("unbounded phase-matching region");
      return std::numbers::pi * model.q0 * model.q0 * length;
    }
    case Dimension::Three: {
      if (!std::isfinite(y_max)) {
        if (!std::isfinite(u_max)) throw DomainError("unbounded phase-matching region");
        y_max = std::sqrt(std::max(0.0, u_max - d0 + alpha));
      }
      std::vector<double> breaks;
      for (double c2 : {-d0 - alpha, -d0 + alpha, u_max - d0 - alpha, u_max - d0 + alpha})
        if (std::isfinite(c2) && c2 > 0.0) breaks.push_back(std::sqrt(c2));
      auto f = [&](double y) { return radial_length(d0 + y * y); };
      const double half = integrate_piecewise_quadratic(f, breaks, 0.0, y_max);
      if (!std::isfinite(half)) throw DomainError("unbounded phase-matching region");
      return std::numbers::pi * model.q0 * model.q0 * model.omega0 * 2.0 * half;
    }
  }
  throw std::logic_error("unreachable dimension");
}

double pm_volume(const PhaseMatchModel& model, Dimension dim, const BandwidthLimits& limits,
                 Surrogate surrogate, int power, double alpha) {
  if (power < 1) throw std::invalid_argument("power must be at least 1");
  if (surrogate == Surrogate::Box) {
    const auto* quad = std::get_if<QuadraticPhaseMatch>(&model);
    if (!quad) throw DomainError("box surrogate requires the quadratic phase-matching model");
    return std::pow(std::numbers::pi / alpha, power) * box_region_volume(*quad, dim, limits, alpha);
  }
  auto weight = [&](double q_squared, double omega) {
    const SpectralPoint w = radial_point(dim, q_squared, omega);
    const auto d = try_delta(w, -w, model);
    if (!d) return 0.0;
    const double s = sinc(0.5 * *d);
    return std::pow(s * s, power);
  };
  return pm_integral(weight, dim, limits, phase_scale_q(model), phase_scale_omega(model));
}

}  // namespace pdc
