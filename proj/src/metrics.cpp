#include "clusterkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clusterkit {

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors of dimension " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()));
  }
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "sqeuclidean" || name == "squared_euclidean") return Metric::SquaredEuclidean;
  if (name == "manhattan" || name == "cityblock") return Metric::Manhattan;
  if (name == "hamming") return Metric::Hamming;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::SquaredEuclidean: return "sqeuclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Hamming: return "hamming";
  }
  return "euclidean";
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean(a, b));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

double hamming(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += (a[i] != b[i]) ? 1 : 0;
  return static_cast<double>(count);
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  switch (metric) {
    case Metric::Euclidean: return euclidean(a, b);
    case Metric::SquaredEuclidean: return squared_euclidean(a, b);
    case Metric::Manhattan: return manhattan(a, b);
    case Metric::Hamming: return hamming(a, b);
  }
  return euclidean(a, b);
}

CondensedDistanceMatrix::CondensedDistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != storage_size(n_)) {
    throw Error(ErrorCode::LengthMismatch, "condensed matrix for n=" + std::to_string(n_) +
                                               " needs " + std::to_string(storage_size(n_)) +
                                               " values");
  }
  for (double v : values_) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distances must be >= 0");
  }
}

double CondensedDistanceMatrix::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

Matrix CondensedDistanceMatrix::to_square() const {
  Matrix out(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      out(i, j) = out(j, i) = values_[index(i, j)];
    }
  }
  return out;
}

CondensedDistanceMatrix pairwise(const Matrix& points, Metric metric) {
  const std::size_t n = points.rows();
  std::vector<double> values;
  values.reserve(CondensedDistanceMatrix::storage_size(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      values.push_back(distance(metric, points.row(i), points.row(j)));
    }
  }
  return CondensedDistanceMatrix(n, std::move(values));
}

CondensedDistanceMatrix pairwise(const Dataset& data, Metric metric) {
  return pairwise(data.points(), metric);
}

}  // namespace clusterkit
