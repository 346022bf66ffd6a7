#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clusterkit/core.hpp"

namespace clusterkit {

enum class ScalerKind { ZScore, MinMax, MaxAbs };

// Per-feature statistics needed to invert a scaling.
//   ZScore: first = mean, second = population standard deviation
//   MinMax: first = min, second = max, target interval [lo, hi]
//   MaxAbs: first = max |x|, second unused
struct ScalerParams {
  ScalerKind kind = ScalerKind::ZScore;
  std::vector<double> first;
  std::vector<double> second;
  double lo = 0.0;
  double hi = 1.0;
};

std::pair<Dataset, ScalerParams> z_scale(const Dataset& data);
std::pair<Dataset, ScalerParams> min_max_scale(const Dataset& data, double lo = 0.0,
                                               double hi = 1.0);
std::pair<Dataset, ScalerParams> max_abs_scale(const Dataset& data);

// Applies params to another dataset with the same feature count.
Dataset apply_scale(const Dataset& data, const ScalerParams& params);

// `expected` guards against inverting with params from a different scaler.
Dataset inverse_scale(const Dataset& scaled, const ScalerParams& params);
Dataset inverse_scale(const Dataset& scaled, const ScalerParams& params, ScalerKind expected);

// Columns are ordered by first appearance of each category.
struct OneHot {
  Matrix matrix;
  std::vector<std::string> categories;
};

OneHot one_hot_encode(const std::vector<std::string>& column);

}  // namespace clusterkit
