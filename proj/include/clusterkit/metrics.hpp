#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "clusterkit/core.hpp"

namespace clusterkit {

enum class Metric { Euclidean, SquaredEuclidean, Manhattan, Hamming };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

double euclidean(std::span<const double> a, std::span<const double> b);
double squared_euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);
double hamming(std::span<const double> a, std::span<const double> b);
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

// Upper triangle (i < j) of a symmetric distance matrix, row-major, holding
// (n^2 - n) / 2 entries. The diagonal is implicitly zero.
class CondensedDistanceMatrix {
 public:
  CondensedDistanceMatrix() = default;
  CondensedDistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  const std::vector<double>& values() const noexcept { return values_; }

  static constexpr std::size_t storage_size(std::size_t n) noexcept {
    return n < 2 ? 0 : n * (n - 1) / 2;
  }

  // Position of (i, j), i < j, in values().
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values_[index(i, j)];
  }

  double max() const;

  Matrix to_square() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

CondensedDistanceMatrix pairwise(const Matrix& points, Metric metric = Metric::Euclidean);
CondensedDistanceMatrix pairwise(const Dataset& data, Metric metric = Metric::Euclidean);

}  // namespace clusterkit
