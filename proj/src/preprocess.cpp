#include "clusterkit/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace clusterkit {

namespace {

Dataset with_points(const Dataset& like, Matrix points) {
  return Dataset(std::move(points), like.feature_names(), like.true_labels());
}

std::string feature_label(const Dataset& data, std::size_t j) {
  return "feature '" + data.feature_names()[j] + "'";
}

}  // namespace

std::pair<Dataset, ScalerParams> z_scale(const Dataset& data) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  ScalerParams params{ScalerKind::ZScore, std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data.points()(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data.points()(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      throw Error(ErrorCode::ConstantFeature, feature_label(data, j) + " has zero variance");
    }
    params.first[j] = mean;
    params.second[j] = sd;
  }
  return {apply_scale(data, params), params};
}

std::pair<Dataset, ScalerParams> min_max_scale(const Dataset& data, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInterval, "target interval needs lo < hi");
  const std::size_t m = data.m();
  ScalerParams params{ScalerKind::MinMax, std::vector<double>(m), std::vector<double>(m), lo, hi};
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = data.points().column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    if (!(*mx > *mn)) {
      throw Error(ErrorCode::ConstantFeature, feature_label(data, j) + " is constant");
    }
    params.first[j] = *mn;
    params.second[j] = *mx;
  }
  return {apply_scale(data, params), params};
}

std::pair<Dataset, ScalerParams> max_abs_scale(const Dataset& data) {
  const std::size_t m = data.m();
  ScalerParams params{ScalerKind::MaxAbs, std::vector<double>(m), std::vector<double>(m, 0.0)};
  for (std::size_t j = 0; j < m; ++j) {
    double mx = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) mx = std::max(mx, std::abs(data.points()(i, j)));
    if (!(mx > 0.0)) {
      throw Error(ErrorCode::ConstantZeroFeature, feature_label(data, j) + " is all zero");
    }
    params.first[j] = mx;
  }
  return {apply_scale(data, params), params};
}

Dataset apply_scale(const Dataset& data, const ScalerParams& params) {
  if (params.first.size() != data.m()) {
    throw Error(ErrorCode::DimensionMismatch, "scaler statistics do not match feature count");
  }
  Matrix out(data.n(), data.m());
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.m(); ++j) {
      const double x = data.points()(i, j);
      switch (params.kind) {
        case ScalerKind::ZScore:
          out(i, j) = (x - params.first[j]) / params.second[j];
          break;
        case ScalerKind::MinMax:
          out(i, j) = (x - params.first[j]) / (params.second[j] - params.first[j]) *
                          (params.hi - params.lo) +
                      params.lo;
          break;
        case ScalerKind::MaxAbs:
          out(i, j) = x / params.first[j];
          break;
      }
    }
  }
  return with_points(data, std::move(out));
}

Dataset inverse_scale(const Dataset& scaled, const ScalerParams& params) {
  if (params.first.size() != scaled.m()) {
    throw Error(ErrorCode::DimensionMismatch, "scaler statistics do not match feature count");
  }
  Matrix out(scaled.n(), scaled.m());
  for (std::size_t i = 0; i < scaled.n(); ++i) {
    for (std::size_t j = 0; j < scaled.m(); ++j) {
      const double x = scaled.points()(i, j);
      switch (params.kind) {
        case ScalerKind::ZScore:
          out(i, j) = x * params.second[j] + params.first[j];
          break;
        case ScalerKind::MinMax:
          out(i, j) = (x - params.lo) / (params.hi - params.lo) *
                          (params.second[j] - params.first[j]) +
                      params.first[j];
          break;
        case ScalerKind::MaxAbs:
          out(i, j) = x * params.first[j];
          break;
      }
    }
  }
  return with_points(scaled, std::move(out));
}

Dataset inverse_scale(const Dataset& scaled, const ScalerParams& params, ScalerKind expected) {
  if (params.kind != expected) {
    throw Error(ErrorCode::KindMismatch, "scaler params were produced by a different scaler");
  }
  return inverse_scale(scaled, params);
}

OneHot one_hot_encode(const std::vector<std::string>& column) {
  OneHot out;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> codes;
  codes.reserve(column.size());
  for (const auto& value : column) {
    auto [it, inserted] = index.try_emplace(value, out.categories.size());
    if (inserted) out.categories.push_back(value);
    codes.push_back(it->second);
  }
  out.matrix = Matrix(column.size(), out.categories.size());
  for (std::size_t i = 0; i < codes.size(); ++i) out.matrix(i, codes[i]) = 1.0;
  return out;
}

}  // namespace clusterkit
