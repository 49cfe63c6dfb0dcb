#include "percnat/fit.hpp"

#include "percnat/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace percnat {

PowerFit fit_exponent(std::span<const ScalingRow> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 3) throw Error(ErrorKind::TooFewPoints, "a slope fit needs at least three rows");
  bool weighted = true;
  for (const auto& r : rows) {
    if (!(r.scale > 0) || !(r.estimate > 0)) throw Error(ErrorKind::NonPositiveEstimate, "scales and estimates must be positive");
    weighted = weighted && r.stderr_ > 0;
  }
  Eigen::MatrixX2d X(n, 2);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = std::log(r.scale);
    y(i) = std::log(r.estimate);
    w(i) = weighted ? std::pow(r.estimate / r.stderr_, 2) : 1.0;
  }
  const Eigen::Matrix2d A = X.transpose() * w.asDiagonal() * X;
  const Eigen::Vector2d beta = A.ldlt().solve(X.transpose() * w.asDiagonal() * y);
  const Eigen::Matrix2d cov = A.inverse();
  PowerFit f;
  f.intercept = beta(0);
  f.slope = beta(1);
  if (weighted) {
    f.slope_stderr = std::sqrt(cov(1, 1));
  } else {
    const double rss = (y - X * beta).squaredNorm();
    f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) * cov(1, 1));
  }
  return f;
}

}  // namespace percnat
