#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdc/errors.hpp"
#include "pdc/oracle.hpp"
#include "pdc/schmidt.hpp"

using namespace pdc;

namespace {

constexpr double pi = std::numbers::pi;

const DispersionScales& collinear() {
  static const DispersionScales sc = derive_scales(CrystalConfig{});
  return sc;
}

McParams small_mc(std::uint64_t seed = 3) {
  McParams p;
  p.samples_n = 200'000;
  p.samples_b = 1'000'000;
  p.seed = seed;
  p.shards = 64;
  return p;
}

std::complex<double> unit_gain(const SpectralPoint&, const SpectralPoint&) { return 1.0; }

// n standard errors, with a rounding floor for estimators that are exact sample by sample.
bool within(double value, double expected, double sigma, double n = 3.0) {
  return std::abs(value - expected) <= n * sigma + 1e-12 * std::abs(expected);
}

}  // namespace

TEST_CASE("biphoton amplitude basics") {
  ModelSpec spec;
  spec.phase_matching = PhaseMatchKind::Exact;
  const SchmidtModel model(spec);
  const auto& p = spec.pump;
  const auto psi0 = biphoton_amplitude(SpectralPoint{}, SpectralPoint{}, model);
  CHECK(std::abs(psi0) == doctest::Approx(p.sigma_um * p.sigma_um * p.tau_s() / std::pow(2.0, 1.5)).epsilon(1e-6));
  const auto a = SpectralPoint::full(0.01, -0.004, 3e13);
  const auto b = SpectralPoint::full(-0.012, 0.003, -2.9e13);
  CHECK(std::abs(model.amplitude(a, b)) == doctest::Approx(std::abs(model.amplitude(b, a))).epsilon(1e-9));
  CHECK(std::abs(model.amplitude(a, b)) <= spectrum(p, a + b) * (1 + 1e-12));
  const auto far = SpectralPoint::full(30.0, 0.0, 0.0);
  CHECK(model.amplitude(far, -far) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("constant gain: N and B closed forms in 1D") {
  ModelSpec spec;
  spec.dimension = Dimension::One;
  const double w = 2.0 * collinear().omega0_rad_per_s;
  spec.limits.omega_max = w;
  const SchmidtModel model(spec, unit_gain);
  const auto n = estimate_N(model, small_mc());
  const double n_exact = envelope_norm2(spec.pump, Dimension::One) * 2.0 * w;
  CHECK(within(n.value, n_exact, n.std_error));
  const auto b = estimate_B(model, small_mc());
  const double b_exact = 2.0 * pi * envelope_norm4(spec.pump, Dimension::One) * 2.0 * w;
  CHECK(within(b.real.value, b_exact, b.real.std_error));
  CHECK(within(b.imag.value, 0.0, b.imag.std_error));
}

TEST_CASE("constant gain: mc, npwpa integral and closed form agree in 3D") {
  ModelSpec spec;
  spec.limits = {collinear().q0_per_um, collinear().omega0_rad_per_s};
  const SchmidtModel model(spec, unit_gain);
  const double vol = pi * spec.limits.q_max * spec.limits.q_max * 2.0 * spec.limits.omega_max;
  CHECK(model.region_volume() == doctest::Approx(vol));
  const double closed = std::pow(pi, 1.5) * spec.pump.sigma_um * spec.pump.sigma_um * spec.pump.tau_s() * vol /
                        std::pow(2.0 * pi, 3);
  const auto mc = schmidt_mc(model, small_mc());
  CHECK(within(mc.K, closed, mc.K_err));
  const auto np = schmidt_npwpa_integral(model);
  CHECK(np.K == doctest::Approx(closed).epsilon(1e-6));
  const double b_closed = std::pow(2.0 * pi, 3) * envelope_norm4(spec.pump, Dimension::Three) * vol;
  CHECK(within(mc.B_rel, b_closed, mc.B_err));
}

TEST_CASE("Monte Carlo estimator sanity on the quadratic model") {
  ModelSpec spec;
  spec.limits.omega_max = collinear().omega0_rad_per_s;
  const SchmidtModel model(spec);
  CHECK(model.q_surrogate());
  CHECK(model.sampled_limits().q_max == doctest::Approx(3.0 * std::sqrt(kDefaultAlpha) * collinear().q0_per_um));
  const auto r = schmidt_mc(model, small_mc());
  CHECK(within(r.B_imag, 0.0, r.B_imag_err));
  CHECK(r.K >= 1.0 - 3.0 * r.K_err);
  const double analytic = schmidt_analytic(model).K;
  CHECK(std::abs(r.K - analytic) / analytic < 0.15);
  const double rel_expected = std::sqrt(4 * std::pow(r.N_err / r.N_rel, 2) + std::pow(r.B_err / r.B_rel, 2));
  CHECK(r.K_err / r.K == doctest::Approx(rel_expected));
}

TEST_CASE("N scales with the pump volume") {
  ModelSpec spec;
  spec.pump = {1200.0, 2000.0, 1e-3};
  spec.limits = {2.0 * collinear().q0_per_um, 2.0 * collinear().omega0_rad_per_s};
  const auto n1 = estimate_N(SchmidtModel(spec), small_mc(5));
  spec.pump.sigma_um *= 2.0;
  const auto n2 = estimate_N(SchmidtModel(spec), small_mc(6));
  const double ratio = n2.value / n1.value;
  const double err = ratio * std::hypot(n1.relative_error(), n2.relative_error());
  CHECK(within(ratio, 4.0, err));
}

TEST_CASE("NPWPA-limit consistency for a broad pump") {
  ModelSpec spec;
  spec.pump = {1200.0, 2000.0, 1e-3};
  McParams p = small_mc(9);
  for (double y : {0.5, 1.0, 2.0, 4.0}) {
    spec.limits = {std::numeric_limits<double>::infinity(), y * collinear().omega0_rad_per_s};
    const SchmidtModel model(spec);
    const double mc = schmidt_mc(model, p).K;
    const double analytic = schmidt_analytic(model).K;
    CHECK(std::abs(mc - analytic) / analytic < 0.15);
  }
}

TEST_CASE("non-collinear photon number drops without phase matching") {
  ModelSpec spec;
  spec.crystal.tuning = CollinearMismatch{23.38};
  const auto sc = derive_scales(spec.crystal);
  spec.limits = {sc.q0_per_um, 2.0 * sc.omega0_rad_per_s};
  const auto low = estimate_N(SchmidtModel(spec), small_mc());
  spec.limits.q_max = std::sqrt(23.38) * sc.q0_per_um;
  const auto ring = estimate_N(SchmidtModel(spec), small_mc());
  CHECK(low.value < 0.1 * ring.value);
}

TEST_CASE("Gaussian test amplitude matches the grid oracle") {
  // ψ′ = Ã(Ω1 + Ω2)·exp(−(Ω1 − Ω2)²/b²); the pump gives a = 2/τ.
  ModelSpec spec;
  spec.dimension = Dimension::One;
  const double a = 2.0 / spec.pump.tau_s();
  const double b = a / 4.0;
  spec.limits.omega_max = 4.0 * a;
  auto gauss = [b](const SpectralPoint& w1, const SpectralPoint& w2) -> std::complex<double> {
    const double d = (w1.omega - w2.omega) / b;
    return std::exp(-d * d);
  };
  const SchmidtModel model(spec, gauss);
  const auto mc = schmidt_mc(model, small_mc());
  const auto grid = oracle::sample_grid(
      [&](double x, double y) { return model.amplitude(SpectralPoint::temporal(x), SpectralPoint::temporal(y)); },
      4.0 * a, 1024);
  const double k_grid = oracle::grid_schmidt(grid, b);
  const double k_exact = (a / b + b / a) / 2.0;
  CHECK(k_grid == doctest::Approx(k_exact).epsilon(1e-6));
  CHECK(within(mc.K, k_grid, mc.K_err));
  CHECK(schmidt_npwpa_integral(model).flags.back() == "nearly-plane-wave-pump factorization");
}

TEST_CASE("analytic branches are continuous at the break points") {
  const auto& sc = collinear();
  const PumpConfig pump;
  for (double alpha : {kDefaultAlpha, 2.0, 9.0}) {
    const double r = std::sqrt(alpha);
    const double s = analytic::k3d_small_bandwidth(r, sc.q0_per_um, sc.omega0_rad_per_s, pump, alpha);
    const double l = analytic::k3d_large_bandwidth(r, sc.q0_per_um, sc.omega0_rad_per_s, pump, alpha);
    CHECK(std::abs(s - l) / l < 1e-12);
    const double expected = alpha / 3.0 * std::sqrt(alpha / pi) * sc.q0_per_um * sc.q0_per_um *
                            sc.omega0_rad_per_s * pump.sigma_um * pump.sigma_um * pump.tau_s();
    CHECK(std::abs(s - expected) / expected < 1e-12);
    const double k2b = analytic::k2d_below(r, sc.q0_per_um, pump, alpha);
    CHECK(std::abs(k2b - analytic::k2d_saturated(sc.q0_per_um, pump, alpha)) / k2b < 1e-12);
    const double k1b = analytic::k1d_below(r, sc.omega0_rad_per_s, pump, alpha);
    CHECK(std::abs(k1b - analytic::k1d_saturated(sc.omega0_rad_per_s, pump, alpha)) / k1b < 1e-12);
  }
}

TEST_CASE("analytic values with the quoted scales") {
  const PumpConfig pump{600.0, 1000.0, 1e-3};
  CHECK(analytic::k3d(4.0, 0.05, 0.76e14, pump, kDefaultAlpha) == doctest::Approx(2.979e5).epsilon(1e-3));
  CHECK(analytic::k2d(5.0, 0.05, pump, kDefaultAlpha) == doctest::Approx(1060.3).epsilon(1e-3));
  CHECK(analytic::k1d(5.0, 0.76e14, pump, kDefaultAlpha) == doctest::Approx(93.08).epsilon(1e-3));
  // The general-α saturation equals (3/8)π σ²q₀² at the default width.
  CHECK(analytic::k2d_saturated(0.05, pump, kDefaultAlpha) ==
        doctest::Approx(3.0 / 8.0 * pi * 600.0 * 600.0 * 0.0025).epsilon(1e-14));
}

TEST_CASE("analytic path matches the box volume route and is monotone") {
  ModelSpec spec;
  spec.method = Method::AnalyticBox;
  const auto& sc = collinear();
  double previous = 0.0;
  for (double y : {0.25, 0.5, 1.0, 2.0, 2.2, 3.0, 4.0}) {
    spec.limits = {std::numeric_limits<double>::infinity(), y * sc.omega0_rad_per_s};
    const double k = schmidt_analytic(SchmidtModel(spec)).K;
    CHECK(k > previous);
    previous = k;
    // Same region through the radial box reduction, with a q cutoff beyond the band.
    ModelSpec joint = spec;
    joint.limits.q_max = 50.0 * sc.q0_per_um;
    CHECK(schmidt_analytic(SchmidtModel(joint)).K == doctest::Approx(k).epsilon(1e-9));
  }
  previous = 0.0;
  for (double q : {0.5, 1.0, 2.0, 3.0}) {
    spec.limits = {q * sc.q0_per_um, 2.0 * sc.omega0_rad_per_s};
    const double k = schmidt_analytic(SchmidtModel(spec)).K;
    CHECK(k >= previous);
    previous = k;
  }
}

TEST_CASE("analytic path refuses the exact model") {
  ModelSpec spec;
  spec.phase_matching = PhaseMatchKind::Exact;
  spec.method = Method::AnalyticBox;
  spec.limits.omega_max = collinear().omega0_rad_per_s;
  CHECK_THROWS_AS(evaluate(SchmidtModel(spec), small_mc()), DomainError);
}

TEST_CASE("factorizability gap") {
  ModelSpec base;
  const double bw[] = {0.3, 1.0, 2.0, 3.0, 3.5, 4.0, 20.0};
  const auto rows = factorizability_gap(base, bw);
  CHECK(rows[0].ratio > 0.7);
  CHECK(rows[0].ratio < 1.4);
  CHECK(rows[5].ratio > 1.5);
  CHECK(rows[5].k3d > rows[4].k3d);
  CHECK(rows[4].k3d > rows[3].k3d);
  const auto& sc = collinear();
  const double sat = analytic::k1d_saturated(sc.omega0_rad_per_s, base.pump, kDefaultAlpha) *
                     analytic::k2d_saturated(sc.q0_per_um, base.pump, kDefaultAlpha);
  CHECK(rows[6].product == doctest::Approx(sat).epsilon(1e-12));
  CHECK(rows[5].product == doctest::Approx(sat).epsilon(1e-12));
}

TEST_CASE("Monte Carlo needs a finite region") {
  ModelSpec spec;
  spec.dimension = Dimension::Two;
  CHECK_THROWS_AS(estimate_N(SchmidtModel(spec), small_mc()), DomainError);
  spec.dimension = Dimension::Three;
  CHECK_THROWS_AS(estimate_N(SchmidtModel(spec), small_mc()), DomainError);
}

TEST_CASE("model validation") {
  ModelSpec spec;
  spec.alpha = 0.0;
  CHECK_THROWS_AS(SchmidtModel{spec}, ConfigError);
  spec = {};
  spec.limits.omega_max = 1e16;
  CHECK_THROWS_AS(SchmidtModel{spec}, ConfigError);
  spec = {};
  spec.pump.tau_fs = 0.0;
  CHECK_THROWS_AS(SchmidtModel{spec}, ConfigError);
}

TEST_CASE("B consistent with zero is an error") {
  ModelSpec spec;
  spec.dimension = Dimension::One;
  spec.limits.omega_max = collinear().omega0_rad_per_s;
  // A gain that flips sign between samples leaves B without signal.
  auto noisy = [](const SpectralPoint& w1, const SpectralPoint&) -> std::complex<double> {
    return std::sin(1e-9 * w1.omega) > 0.0 ? 1e-200 : -1e-200;
  };
  CHECK_THROWS_AS(schmidt_mc(SchmidtModel(spec, noisy), small_mc()), NumericalError);
}

TEST_CASE("beta sweep derives per-point pumps and seeds") {
  ModelSpec spec;
  spec.limits.omega_max = 2.0 * collinear().omega0_rad_per_s;
  McParams p = small_mc(17);
  p.samples_b = 400'000;
  const double betas[] = {0.05, 0.2};
  const auto rows = beta_sweep(spec, betas, p);
  REQUIRE(rows.size() == 2);
  const auto expect = pump_for_beta(0.2, collinear());
  CHECK(rows[1].sigma_um == doctest::Approx(expect.sigma_um));
  CHECK(rows[1].tau_fs == doctest::Approx(expect.tau_fs));
  CHECK(rows[0].mc.K > rows[1].mc.K);
  ModelSpec direct = spec;
  direct.pump = expect;
  McParams q = p;
  q.seed = mc::mix_seed(17, 1);
  CHECK(schmidt_mc(SchmidtModel(direct), q).K == rows[1].mc.K);
}
