#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pdc::oracle {

/// ψ′ on the grid coordinates; a 1D point is a scalar, a 2D point a transverse pair.
using Amplitude1D = std::function<std::complex<double>(double, double)>;
using Amplitude2D = std::function<std::complex<double>(const Eigen::Vector2d&, const Eigen::Vector2d&)>;

inline constexpr Eigen::Index kMaxSide = 4096;
inline constexpr double kBoundaryTolerance = 1e-3;
inline constexpr int kPointsPerFeature = 8;

/// ψ′ sampled on a uniform square grid, each axis spanning [−half_width, half_width].
/// Entries carry √step per coordinate on each side, so M·M† approximates ρ₁.
struct AmplitudeGrid {
  int dimension = 1;  // 1 or 2 coordinates per photon
  int points = 0;     // per axis
  double half_width = 0.0;
  double step = 0.0;
  Eigen::MatrixXcd matrix;

  double weight() const;  // step^dimension, the quadrature weight of one cell pair
};

/// Uniform grid of `points` nodes over [−half_width, half_width] (endpoints included).
AmplitudeGrid sample_grid(const Amplitude1D& psi, double half_width, int points);
AmplitudeGrid sample_grid(const Amplitude2D& psi, double half_width, int points);

/// Wraps a precomputed weighted matrix (no resolution checks are possible).
AmplitudeGrid from_matrix(Eigen::MatrixXcd matrix);

struct GridCheck {
  double boundary_ratio = 0.0;  // max boundary |M| / max |M|
  double step = 0.0;
  double max_step = 0.0;        // min_feature_width / kPointsPerFeature
  bool resolved = false;
  std::string diagnostic;
};

/// Resolution test: boundary values below 10⁻³ of the peak and ≥ 8 points per feature.
GridCheck check_grid(const AmplitudeGrid& grid, double min_feature_width);

/// Normalized Schmidt eigenvalues λ_i/Σλ in descending order.
Eigen::VectorXd schmidt_eigenvalues(const AmplitudeGrid& grid);

/// K = (Σλ)²/Σλ² from the singular values of the weighted matrix. Throws
/// DomainError with the diagnostic when the grid does not resolve ψ′.
double grid_schmidt(const AmplitudeGrid& grid, double min_feature_width);

/// Same, without the resolution test (for synthetic matrices).
double grid_schmidt(const AmplitudeGrid& grid);

/// N²/B by direct summation: N = Σ|M_ij|², B = Σ M_ij M_kl M*_kj M*_il.
double direct_schmidt(const AmplitudeGrid& grid);

struct ConvergenceRow {
  int points = 0;
  double K = 0.0;
  double relative_change = 0.0;  // against the previous row; 0 for the first
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool converged = false;  // last change below kConvergenceTolerance
  bool diverging = false;  // changes grow instead of shrinking
};

inline constexpr double kConvergenceTolerance = 5e-3;

/// K over a geometric sequence of resolutions at fixed half-width.
ConvergenceTable grid_convergence(const Amplitude1D& psi, double half_width, std::span<const int> resolutions,
                                  double min_feature_width);

}  // namespace pdc::oracle
