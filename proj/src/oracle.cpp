#include "pdc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "pdc/errors.hpp"

namespace pdc::oracle {

namespace {

void require_points(int points, int dimension) {
  if (points < 2) throw DomainError("grid needs at least two points per axis");
  const Eigen::Index side = dimension == 1 ? points : Eigen::Index{points} * points;
  if (side > kMaxSide) {
    std::ostringstream msg;
    msg << "grid matrix side " << side << " exceeds " << kMaxSide;
    throw DomainError(msg.str());
  }
}

double node(double half_width, double step, int i) { return -half_width + step * i; }

bool on_boundary(int i, int points) { return i == 0 || i == points - 1; }

}  // namespace

double AmplitudeGrid::weight() const { return std::pow(step, dimension); }

AmplitudeGrid sample_grid(const Amplitude1D& psi, double half_width, int points) {
  require_points(points, 1);
  AmplitudeGrid g{1, points, half_width, 2.0 * half_width / (points - 1), {}};
  g.matrix.resize(points, points);
  const double w = g.weight();
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      g.matrix(i, j) = psi(node(half_width, g.step, i), node(half_width, g.step, j)) * w;
  return g;
}

AmplitudeGrid sample_grid(const Amplitude2D& psi, double half_width, int points) {
  require_points(points, 2);
  AmplitudeGrid g{2, points, half_width, 2.0 * half_width / (points - 1), {}};
  const Eigen::Index side = Eigen::Index{points} * points;
  g.matrix.resize(side, side);
  const double w = g.weight();
  auto at = [&](Eigen::Index k) {
    return Eigen::Vector2d(node(half_width, g.step, static_cast<int>(k / points)),
                           node(half_width, g.step, static_cast<int>(k % points)));
  };
  for (Eigen::Index a = 0; a < side; ++a)
    for (Eigen::Index b = 0; b < side; ++b) g.matrix(a, b) = psi(at(a), at(b)) * w;
  return g;
}

AmplitudeGrid from_matrix(Eigen::MatrixXcd matrix) {
  if (matrix.rows() != matrix.cols()) throw DomainError("amplitude matrix must be square");
  if (matrix.rows() > kMaxSide) throw DomainError("amplitude matrix too large for the dense oracle");
  AmplitudeGrid g;
  g.points = static_cast<int>(matrix.rows());
  g.step = 1.0;
  g.matrix = std::move(matrix);
  return g;
}

GridCheck check_grid(const AmplitudeGrid& grid, double min_feature_width) {
  GridCheck c;
  c.step = grid.step;
  c.max_step = min_feature_width / kPointsPerFeature;
  const double peak = grid.matrix.cwiseAbs().maxCoeff();
  double edge = 0.0;
  const int n = grid.points;
  for (Eigen::Index a = 0; a < grid.matrix.rows(); ++a) {
    for (Eigen::Index b = 0; b < grid.matrix.cols(); ++b) {
      bool boundary = false;
      if (grid.dimension == 1) {
        boundary = on_boundary(static_cast<int>(a), n) || on_boundary(static_cast<int>(b), n);
      } else {
        for (Eigen::Index k : {a, b})
          boundary = boundary || on_boundary(static_cast<int>(k / n), n) || on_boundary(static_cast<int>(k % n), n);
      }
      if (boundary) edge = std::max(edge, std::abs(grid.matrix(a, b)));
    }
  }
  c.boundary_ratio = peak > 0.0 ? edge / peak : 1.0;
  std::ostringstream msg;
  if (!(peak > 0.0)) msg << "amplitude vanishes on the grid; ";
  if (c.boundary_ratio >= kBoundaryTolerance)
    msg << "boundary amplitude " << c.boundary_ratio << " of peak (limit " << kBoundaryTolerance << "); ";
  if (c.step > c.max_step)
    msg << "step " << c.step << " coarser than " << c.max_step << " (" << kPointsPerFeature
        << " points per feature width " << min_feature_width << "); ";
  c.diagnostic = msg.str();
  c.resolved = c.diagnostic.empty();
  return c;
}

Eigen::VectorXd schmidt_eigenvalues(const AmplitudeGrid& grid) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(grid.matrix);
  Eigen::VectorXd lambda = svd.singularValues().array().square();
  const double total = lambda.sum();
  if (!(total > 0.0)) throw NumericalError("amplitude matrix has no weight");
  return lambda / total;
}

double grid_schmidt(const AmplitudeGrid& grid) {
  const Eigen::VectorXd lambda = schmidt_eigenvalues(grid);
  return 1.0 / lambda.squaredNorm();
}

double grid_schmidt(const AmplitudeGrid& grid, double min_feature_width) {
  const GridCheck c = check_grid(grid, min_feature_width);
  if (!c.resolved) throw DomainError("grid does not resolve the amplitude: " + c.diagnostic);
  return grid_schmidt(grid);
}

double direct_schmidt(const AmplitudeGrid& grid) {
  const Eigen::MatrixXcd& m = grid.matrix;
  const double n = m.squaredNorm();
  // B = Σ_il |Σ_j M_ij M*_lj|², the quadruple sum grouped by its outer indices.
  const Eigen::Index side = m.rows();
  double b = 0.0;
  for (Eigen::Index i = 0; i < side; ++i) {
    for (Eigen::Index l = 0; l < side; ++l) {
      std::complex<double> r = 0.0;
      for (Eigen::Index j = 0; j < side; ++j) r += m(i, j) * std::conj(m(l, j));
      b += std::norm(r);
    }
  }
  if (!(b > 0.0)) throw NumericalError("amplitude matrix has no weight");
  return n * n / b;
}

ConvergenceTable grid_convergence(const Amplitude1D& psi, double half_width, std::span<const int> resolutions,
                                  double min_feature_width) {
  if (resolutions.size() < 3) throw DomainError("convergence study needs at least three resolutions");
  const double ratio = static_cast<double>(resolutions[1]) / resolutions[0];
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    const double r = static_cast<double>(resolutions[i]) / resolutions[i - 1];
    if (!(r > 1.0) || std::abs(r - ratio) > 0.05 * ratio)
      throw DomainError("resolutions must form an increasing geometric progression");
  }
  ConvergenceTable t;
  for (int n : resolutions) {
    ConvergenceRow row;
    row.points = n;
    row.K = grid_schmidt(sample_grid(psi, half_width, n), min_feature_width);
    if (!t.rows.empty()) row.relative_change = std::abs(row.K - t.rows.back().K) / std::abs(row.K);
    t.rows.push_back(row);
  }
  const auto& r = t.rows;
  t.converged = r.back().relative_change < kConvergenceTolerance;
  for (std::size_t i = 2; i < r.size(); ++i)
    if (r[i].relative_change > r[i - 1].relative_change && r[i].relative_change >= kConvergenceTolerance)
      t.diverging = true;
  return t;
}

}  // namespace pdc::oracle
