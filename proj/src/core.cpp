#include "clusterkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace clusterkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::TooManyClustersForExactMatching: return "TooManyClustersForExactMatching";
    case ErrorCode::ConstantFeature: return "ConstantFeature";
    case ErrorCode::ConstantZeroFeature: return "ConstantZeroFeature";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::NOutOfRange: return "NOutOfRange";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::DuplicateSelection: return "DuplicateSelection";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoiseNotAllowed: return "NoiseNotAllowed";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidMixture: return "InvalidMixture";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownMethod:
    case ErrorCode::MissingParameter:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidInterval:
    case ErrorCode::NegativeRadius:
    case ErrorCode::KOutOfRange:
    case ErrorCode::NOutOfRange:
    case ErrorCode::NonPositiveSigma:
    case ErrorCode::EmptySelection:
    case ErrorCode::DuplicateSelection:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::KindMismatch:
    case ErrorCode::InvalidMixture:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t m = rows.front().size();
  Matrix out(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      std::ostringstream msg;
      msg << "row " << i << " has " << rows[i].size() << " values, expected " << m;
      throw Error(ErrorCode::RaggedRows, msg.str());
    }
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Dataset::Dataset(Matrix points, std::vector<std::string> feature_names,
                 std::optional<std::vector<int>> true_labels)
    : points_(std::move(points)),
      feature_names_(std::move(feature_names)),
      true_labels_(std::move(true_labels)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw Error(ErrorCode::TooFewPoints, "dataset needs at least one row and one column");
  }
  for (std::size_t i = 0; i < points_.rows(); ++i) {
    for (std::size_t j = 0; j < points_.cols(); ++j) {
      if (!std::isfinite(points_(i, j))) {
        std::ostringstream msg;
        msg << "value at row " << i << ", column " << j << " is not finite";
        throw Error(ErrorCode::NonFiniteValue, msg.str());
      }
    }
  }
  if (feature_names_.empty()) {
    for (std::size_t j = 0; j < points_.cols(); ++j) {
      feature_names_.push_back("f" + std::to_string(j));
    }
  } else if (feature_names_.size() != points_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "feature name count differs from column count");
  }
  if (true_labels_ && true_labels_->size() != points_.rows()) {
    throw Error(ErrorCode::LabelLengthMismatch, "true labels length differs from row count");
  }
}

Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                     std::vector<std::string> feature_names,
                     std::optional<std::vector<int>> true_labels) {
  return Dataset(Matrix::from_rows(rows), std::move(feature_names), std::move(true_labels));
}

LabelVector::LabelVector(std::vector<int> labels) : labels_(std::move(labels)) {
  for (int l : labels_) {
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "labels must be >= 0");
  }
}

std::size_t LabelVector::n_clusters() const {
  std::set<int> seen;
  for (int l : labels_) {
    if (l != kNoise) seen.insert(l);
  }
  return seen.size();
}

std::size_t LabelVector::noise_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kNoise));
}

LabelVector canonicalize_labels(const LabelVector& labels) {
  struct Group {
    int label;
    std::size_t count;
    std::size_t first;
  };
  std::map<int, Group> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l == kNoise) continue;
    auto [it, inserted] = groups.try_emplace(l, Group{l, 0, i});
    ++it->second.count;
  }
  std::vector<Group> order;
  order.reserve(groups.size());
  for (const auto& [_, g] : groups) order.push_back(g);
  std::sort(order.begin(), order.end(), [](const Group& a, const Group& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.first < b.first;
  });
  std::map<int, int> rename;
  for (std::size_t r = 0; r < order.size(); ++r) {
    rename[order[r].label] = static_cast<int>(r) + 1;
  }
  std::vector<int> out(labels.size(), kNoise);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) out[i] = rename[labels[i]];
  }
  return LabelVector(std::move(out));
}

namespace {

// Depth-first search over injective cluster -> class assignments with an
// optimistic bound (remaining row maxima) for pruning.
class MatchingSearch {
 public:
  explicit MatchingSearch(std::vector<std::vector<std::size_t>> counts)
      : counts_(std::move(counts)) {
    const std::size_t k = counts_.size();
    n_classes_ = k ? counts_.front().size() : 0;
    suffix_bound_.assign(k + 1, 0);
    for (std::size_t c = k; c-- > 0;) {
      const std::size_t row_max =
          counts_[c].empty() ? 0 : *std::max_element(counts_[c].begin(), counts_[c].end());
      suffix_bound_[c] = suffix_bound_[c + 1] + row_max;
    }
    used_.assign(n_classes_, false);
  }

  std::size_t run() {
    visit(0, 0);
    return best_;
  }

 private:
  void visit(std::size_t cluster, std::size_t score) {
    if (cluster == counts_.size()) {
      best_ = std::max(best_, score);
      return;
    }
    if (score + suffix_bound_[cluster] <= best_) return;
    for (std::size_t t = 0; t < n_classes_; ++t) {
      if (used_[t]) continue;
      used_[t] = true;
      visit(cluster + 1, score + counts_[cluster][t]);
      used_[t] = false;
    }
    // Leaving the cluster unmapped.
    visit(cluster + 1, score);
  }

  std::vector<std::vector<std::size_t>> counts_;
  std::size_t n_classes_ = 0;
  std::vector<std::size_t> suffix_bound_;
  std::vector<bool> used_;
  std::size_t best_ = 0;
};

}  // namespace

double match_percentage(const LabelVector& pred, const std::vector<int>& truth,
                        bool ignore_noise) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "prediction and truth differ in length");
  }
  std::map<int, std::size_t> cluster_index;
  std::map<int, std::size_t> class_index;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] != kNoise) cluster_index.try_emplace(pred[i], 0);
    class_index.try_emplace(truth[i], 0);
  }
  if (cluster_index.size() > kMaxExactMatchingClusters) {
    throw Error(ErrorCode::TooManyClustersForExactMatching,
                std::to_string(cluster_index.size()) + " clusters exceed the limit of " +
                    std::to_string(kMaxExactMatchingClusters));
  }
  std::size_t next = 0;
  for (auto& [_, idx] : cluster_index) idx = next++;
  next = 0;
  for (auto& [_, idx] : class_index) idx = next++;

  std::vector<std::vector<std::size_t>> counts(cluster_index.size(),
                                               std::vector<std::size_t>(class_index.size(), 0));
  std::size_t denominator = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == kNoise) {
      if (!ignore_noise) ++denominator;
      continue;
    }
    ++denominator;
    ++counts[cluster_index[pred[i]]][class_index[truth[i]]];
  }
  if (denominator == 0) return 0.0;
  const std::size_t matched = MatchingSearch(std::move(counts)).run();
  return static_cast<double>(matched) / static_cast<double>(denominator);
}

double match_percentage(const LabelVector& pred, const LabelVector& truth, bool ignore_noise) {
  return match_percentage(pred, truth.values(), ignore_noise);
}

}  // namespace clusterkit
