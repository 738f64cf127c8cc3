#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdc/errors.hpp"
#include "pdc/phasematch.hpp"

using namespace pdc;

namespace {

constexpr double pi = std::numbers::pi;

double integrate(auto f, double a, double b) {
  double total = 0.0;
  const int pieces = static_cast<int>(std::ceil((b - a) / 0.5));
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = a + (b - a) * (i + 1) / pieces;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 10, 1e-13);
  }
  return total;
}

QuadraticPhaseMatch unit_quadratic(double d0 = 0.0) { return {0.05, 0.76e14, d0}; }

}  // namespace

TEST_CASE("sinc near zero and at its nodes") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-15));
  CHECK(sinc(5e-5) == doctest::Approx(std::sin(5e-5) / 5e-5).epsilon(1e-15));
  CHECK(std::abs(sinc(pi)) < 1e-15);
  CHECK(sinc(-0.7) == sinc(0.7));
}

TEST_CASE("sinc-squared normalization") {
  const double s2 = integrate([](double x) { return std::pow(sinc(x), 2); }, -50.0, 50.0);
  CHECK(std::abs(s2 - pi) / pi < 0.01);
  const double s4 = integrate([](double x) { return std::pow(sinc(x), 4); }, -50.0, 50.0);
  CHECK(std::abs(s4 - 2.0 * pi / 3.0) / (2.0 * pi / 3.0) < 0.01);
}

TEST_CASE("box surrogate integrals") {
  for (double alpha : {1.0, 1.5 * pi, 7.0}) {
    // χ_α is π/α on (−α/2, α/2); its integrals follow from the width alone.
    const double h = pi / alpha;
    CHECK(chi_box(0.0, alpha) == doctest::Approx(h));
    CHECK(chi_box(0.51 * alpha, alpha) == 0.0);
    CHECK(h * alpha == doctest::Approx(pi));
  }
  CHECK(chi_box(0.0, kDefaultAlpha) == doctest::Approx(2.0 / 3.0));
  CHECK(std::pow(chi_box(0.0, kDefaultAlpha), 2) * kDefaultAlpha == doctest::Approx(2.0 * pi / 3.0));
}

TEST_CASE("quadratic delta") {
  const auto quad = unit_quadratic();
  const auto w = SpectralPoint::full(0.05, 0.0, 0.76e14);
  CHECK(std::abs(delta(w, -w, quad)) < 1e-12);
  const auto mismatched = unit_quadratic(23.38);
  CHECK(delta(SpectralPoint{}, SpectralPoint{}, mismatched) == doctest::Approx(23.38));
  // Transverse term negative, temporal term positive.
  CHECK(delta(SpectralPoint::full(0.05, 0, 0), SpectralPoint::full(-0.05, 0, 0), quad) == doctest::Approx(-1.0));
  CHECK(delta(SpectralPoint::full(0, 0, 0.76e14), SpectralPoint::full(0, 0, -0.76e14), quad) ==
        doctest::Approx(1.0));
  CHECK(delta(SpectralPoint::spatial(0.05, 0), SpectralPoint::spatial(-0.05, 0), quad) == doctest::Approx(-1.0));
}

TEST_CASE("delta is symmetric under photon exchange") {
  const Crystal crystal(CrystalConfig{});
  const PhaseMatchModel models[] = {ExactPhaseMatch{crystal}, unit_quadratic(3.0)};
  const SpectralPoint a = SpectralPoint::full(0.013, -0.021, 2.1e13);
  const SpectralPoint b = SpectralPoint::full(-0.004, 0.017, -0.6e13);
  for (const auto& m : models) CHECK(delta(a, b, m) == doctest::Approx(delta(b, a, m)).epsilon(1e-12));
}

TEST_CASE("quadratic model tracks the exact mismatch near degeneracy") {
  const Crystal crystal(CrystalConfig{});
  const ExactPhaseMatch exact{crystal};
  const auto quad = QuadraticPhaseMatch::from_scales(crystal.scales());
  for (double a : {-0.5, -0.2, 0.0, 0.3, 0.5})
    for (double b : {-0.5, 0.0, 0.25, 0.5}) {
      const auto w = SpectralPoint::full(a * quad.q0, 0.0, b * quad.omega0);
      const double de = delta(w, -w, exact);
      const double dq = delta(w, -w, quad);
      CHECK(std::abs(de - dq) / std::max(1.0, std::abs(de)) < 0.05);
    }
}

TEST_CASE("non-propagating modes") {
  const Crystal crystal(CrystalConfig{});
  const ExactPhaseMatch exact{crystal};
  const auto far = SpectralPoint::full(20.0, 0.0, 0.0);
  CHECK_THROWS_AS(delta(far, -far, exact), NonPropagatingError);
  CHECK_FALSE(try_delta(far, -far, exact).has_value());
}

TEST_CASE("gain profile values") {
  const auto quad = unit_quadratic();
  CHECK(std::abs(v_diag(SpectralPoint{}, quad) - 1.0) < 1e-15);
  // Δ = 2π on the diagonal at Ω = √(2π)·Ω₀.
  const auto node = SpectralPoint::temporal(std::sqrt(2 * pi) * quad.omega0);
  CHECK(std::abs(v_diag(node, quad)) < 1e-12);
  const auto w = SpectralPoint::full(0.03, 0.01, 0.4e14);
  CHECK(std::norm(v_diag(w, quad)) == doctest::Approx(std::norm(v_diag(-w, quad))));
  const auto v = gain_profile(w, -w, unit_quadratic(1.0));
  const double d = delta(w, -w, unit_quadratic(1.0));
  CHECK(std::arg(v) == doctest::Approx(d / 2.0));
}

TEST_CASE("box volumes against closed forms") {
  const auto quad = unit_quadratic();
  const double a = kDefaultAlpha;
  // 1D: the band |Ω| < √α·Ω₀ at height π/α.
  BandwidthLimits wide{std::numeric_limits<double>::infinity(), 3.0 * quad.omega0};
  const double v1 = pm_volume(quad, Dimension::One, wide, Surrogate::Box, 1, a);
  CHECK(v1 == doctest::Approx(2.0 * std::sqrt(a) * quad.omega0 * pi / a).epsilon(1e-9));
  // 2D: disk of radius √α·q₀ at height π/α.
  BandwidthLimits disk{3.0 * quad.q0, std::numeric_limits<double>::infinity()};
  const double v2 = pm_volume(quad, Dimension::Two, disk, Surrogate::Box, 1, a);
  CHECK(v2 == doctest::Approx(pi * pi * quad.q0 * quad.q0).epsilon(1e-9));
  CHECK(box_region_volume(quad, Dimension::Two, disk, a) == doctest::Approx(pi * a * quad.q0 * quad.q0));
  // Vanishing region.
  BandwidthLimits tiny{1e-9 * quad.q0, 1e-9 * quad.omega0};
  // sinc² is 1 there, so the volume is the bare region measure, which vanishes with the limits.
  const double measure = pi * tiny.q_max * tiny.q_max * 2.0 * tiny.omega_max;
  CHECK(pm_volume(quad, Dimension::Three, tiny, Surrogate::SincSquared) == doctest::Approx(measure).epsilon(1e-9));
}

TEST_CASE("3D box volume reproduces the small and large bandwidth branches") {
  const auto quad = unit_quadratic();
  const double a = kDefaultAlpha;
  const double scale = quad.q0 * quad.q0 * quad.omega0;
  for (double y : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    BandwidthLimits lim{std::numeric_limits<double>::infinity(), y * quad.omega0};
    const double vol = box_region_volume(quad, Dimension::Three, lim, a) / scale;
    // Region |Δ| < α with Δ = Ω̄² − q̄²: for each Ω̄ an annulus in q̄² of width min(2α, α + Ω̄²).
    const double expected = y < std::sqrt(a) ? 2.0 * pi * (a * y + y * y * y / 3.0)
                                             : 2.0 * pi * (2.0 * a * y - 2.0 * a * std::sqrt(a) / 3.0);
    CHECK(vol == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("sinc-squared to sinc-fourth ratio over the collinear region") {
  const auto quad = unit_quadratic();
  BandwidthLimits lim{8.0 * quad.q0, 4.0 * quad.omega0};
  const double v2 = pm_volume(quad, Dimension::Three, lim, Surrogate::SincSquared, 1);
  const double v4 = pm_volume(quad, Dimension::Three, lim, Surrogate::SincSquared, 2);
  CHECK(v2 / v4 == doctest::Approx(1.5).epsilon(0.1));
}

TEST_CASE("pm_integral rejects unbounded regions") {
  const auto quad = unit_quadratic();
  CHECK_THROWS(pm_volume(quad, Dimension::Two, BandwidthLimits{}, Surrogate::SincSquared));
}
