#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clusterkit {

enum class ErrorCode {
  RaggedRows,
  NonFiniteValue,
  LabelLengthMismatch,
  TooManyClustersForExactMatching,
  ConstantFeature,
  ConstantZeroFeature,
  InvalidInterval,
  KindMismatch,
  DimensionMismatch,
  NegativeRadius,
  KOutOfRange,
  NOutOfRange,
  TooFewPoints,
  DimensionUnsupported,
  NonPositiveSigma,
  NoConvergence,
  SingularCovariance,
  EmptySelection,
  DuplicateSelection,
  IndexOutOfRange,
  NoiseNotAllowed,
  SingleCluster,
  LengthMismatch,
  InvalidMixture,
  InvalidArgument,
  ParseError,
  EmptyFile,
  UnknownMethod,
  MissingParameter,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Whether an error stems from bad configuration (as opposed to bad data).
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const;

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// n x m feature matrix with names and optional ground truth. Values are
// validated finite on construction and never change afterwards.
class Dataset {
 public:
  Dataset(Matrix points, std::vector<std::string> feature_names,
          std::optional<std::vector<int>> true_labels = std::nullopt);

  std::size_t n() const noexcept { return points_.rows(); }
  std::size_t m() const noexcept { return points_.cols(); }

  const Matrix& points() const noexcept { return points_; }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::optional<std::vector<int>>& true_labels() const noexcept { return true_labels_; }
  bool has_labels() const noexcept { return true_labels_.has_value(); }

 private:
  Matrix points_;
  std::vector<std::string> feature_names_;
  std::optional<std::vector<int>> true_labels_;
};

// Builds a Dataset from row vectors. Empty feature_names yields f0..f{m-1}.
Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                     std::vector<std::string> feature_names = {},
                     std::optional<std::vector<int>> true_labels = std::nullopt);

inline constexpr int kNoise = 0;

// Per-point cluster labels. 0 is noise; clusters are positive.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<int> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& values() const noexcept { return labels_; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  // Number of distinct positive labels.
  std::size_t n_clusters() const;
  std::size_t noise_count() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
};

// Renumbers clusters 1..k by decreasing size; ties go to the cluster whose
// first member has the smaller index. Noise stays 0.
LabelVector canonicalize_labels(const LabelVector& labels);

inline constexpr std::size_t kMaxExactMatchingClusters = 12;

// Best fraction of points whose mapped predicted cluster equals the true
// class, over all injective cluster -> class mappings. Noise counts as a
// mismatch, or is dropped from both numerator and denominator when
// ignore_noise is set.
double match_percentage(const LabelVector& pred, const std::vector<int>& truth,
                        bool ignore_noise = false);
double match_percentage(const LabelVector& pred, const LabelVector& truth,
                        bool ignore_noise = false);

}  // namespace clusterkit
