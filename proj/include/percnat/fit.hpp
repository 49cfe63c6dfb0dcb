#pragma once

#include <span>
#include <vector>

namespace percnat {

struct ScalingRow {
  double scale = 0;
  double estimate = 0;
  double stderr_ = 0;
};

struct PowerFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
};

/// Weighted least squares of log(estimate) on log(scale) with weights
/// (estimate / stderr)^2, the inverse relative variance. If any row has a zero
/// stderr, all rows are weighted equally and the slope error comes from the
/// residuals.
PowerFit fit_exponent(std::span<const ScalingRow> rows);

}  // namespace percnat
