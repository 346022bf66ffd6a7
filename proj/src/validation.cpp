#include "clusterkit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace clusterkit {

namespace {

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "labelings have lengths " + std::to_string(pred.size()) +
                                               " and " + std::to_string(truth.size()));
  }
}

std::map<int, std::size_t> value_index(const std::vector<int>& labels) {
  std::map<int, std::size_t> idx;
  for (int v : labels) idx.emplace(v, 0);
  std::size_t next = 0;
  for (auto& [v, i] : idx) i = next++;
  return idx;
}

double choose2(std::size_t x) {
  const double d = static_cast<double>(x);
  return d * (d - 1.0) / 2.0;
}

}  // namespace

ContingencyTable::ContingencyTable(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  const auto ri = value_index(pred);
  const auto ci = value_index(truth);
  row_sums_.assign(ri.size(), 0);
  col_sums_.assign(ci.size(), 0);
  counts_.assign(ri.size() * ci.size(), 0);
  for (std::size_t p = 0; p < pred.size(); ++p) {
    const std::size_t i = ri.at(pred[p]);
    const std::size_t j = ci.at(truth[p]);
    ++counts_[i * ci.size() + j];
    ++row_sums_[i];
    ++col_sums_[j];
  }
  total_ = pred.size();
}

bool ContingencyTable::same_partition() const {
  if (rows() != cols()) return false;
  for (std::size_t i = 0; i < rows(); ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < cols(); ++j) nonzero += count(i, j) > 0;
    if (nonzero != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Internal indices
// ---------------------------------------------------------------------------

namespace {

void require_no_noise(const LabelVector& labels) {
  if (labels.noise_count() > 0) {
    throw Error(ErrorCode::NoiseNotAllowed, "labels contain noise points");
  }
}

int max_label(const LabelVector& labels) {
  int mx = 0;
  for (int v : labels) mx = std::max(mx, v);
  return mx;
}

Matrix label_means(const Matrix& points, const LabelVector& labels, std::vector<std::size_t>& sizes) {
  const auto k = static_cast<std::size_t>(max_label(labels));
  Matrix means(k, points.cols());
  sizes.assign(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i] - 1);
    ++sizes[c];
    for (std::size_t j = 0; j < points.cols(); ++j) means(c, j) += points(i, j);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) continue;
    for (std::size_t j = 0; j < points.cols(); ++j) means(c, j) /= static_cast<double>(sizes[c]);
  }
  return means;
}

}  // namespace

double inertia(const Matrix& points, const LabelVector& labels,
               const std::optional<Matrix>& centroids) {
  if (labels.size() != points.rows()) {
    throw Error(ErrorCode::LabelLengthMismatch, "one label per point required");
  }
  require_no_noise(labels);
  std::vector<std::size_t> sizes;
  const Matrix means = centroids ? *centroids : label_means(points, labels, sizes);
  if (means.cols() != points.cols() || static_cast<int>(means.rows()) < max_label(labels)) {
    throw Error(ErrorCode::DimensionMismatch, "centroids do not cover every label");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    total += squared_euclidean(points.row(i), means.row(static_cast<std::size_t>(labels[i] - 1)));
  }
  return total;
}

double inertia(const Dataset& data, const LabelVector& labels,
               const std::optional<Matrix>& centroids) {
  return inertia(data.points(), labels, centroids);
}

SilhouetteResult silhouette(const CondensedDistanceMatrix& distances, const LabelVector& labels) {
  const std::size_t n = distances.n();
  if (labels.size() != n) throw Error(ErrorCode::LabelLengthMismatch, "one label per point required");
  const auto k = static_cast<std::size_t>(max_label(labels));
  std::vector<std::size_t> sizes(k + 1, 0);
  for (int v : labels) ++sizes[static_cast<std::size_t>(v)];
  std::size_t populated = 0;
  for (std::size_t c = 1; c <= k; ++c) populated += sizes[c] > 0;
  if (populated < 2) throw Error(ErrorCode::SingleCluster, "silhouette needs at least 2 clusters");

  SilhouetteResult out;
  out.scores.assign(n, 0.0);
  double sum = 0.0;
  std::size_t scored = 0;
  std::vector<double> sums(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(labels[i]);
    if (own == 0) continue;
    ++scored;
    if (sizes[own] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[static_cast<std::size_t>(labels[j])] += distances(i, j);
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c <= k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    out.scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    sum += out.scores[i];
  }
  out.mean = scored ? sum / static_cast<double>(scored) : 0.0;
  return out;
}

double calinski_harabasz(const Matrix& points, const LabelVector& labels) {
  if (labels.size() != points.rows()) {
    throw Error(ErrorCode::LabelLengthMismatch, "one label per point required");
  }
  require_no_noise(labels);
  const std::size_t n = points.rows();
  const std::size_t k = labels.n_clusters();
  if (k < 2) throw Error(ErrorCode::SingleCluster, "Calinski-Harabasz needs at least 2 clusters");
  if (k >= n) throw Error(ErrorCode::KOutOfRange, "Calinski-Harabasz needs k < n");
  std::vector<std::size_t> sizes;
  const Matrix means = label_means(points, labels, sizes);
  std::vector<double> overall(points.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < points.cols(); ++j) overall[j] += points(i, j);
  }
  for (double& v : overall) v /= static_cast<double>(n);

  double inter = 0.0;
  for (std::size_t c = 0; c < means.rows(); ++c) {
    if (sizes[c] == 0) continue;
    double d = 0.0;
    for (std::size_t j = 0; j < points.cols(); ++j) {
      d += (means(c, j) - overall[j]) * (means(c, j) - overall[j]);
    }
    inter += static_cast<double>(sizes[c]) * d;
  }
  const double intra = inertia(points, labels, means);
  if (intra == 0.0) return std::numeric_limits<double>::infinity();
  return inter / intra * static_cast<double>(n - k) / static_cast<double>(k - 1);
}

double calinski_harabasz(const Dataset& data, const LabelVector& labels) {
  return calinski_harabasz(data.points(), labels);
}

// ---------------------------------------------------------------------------
// External indices
// ---------------------------------------------------------------------------

double entropy_of(const std::vector<std::size_t>& marginal, std::size_t total) {
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t a : marginal) {
    if (a == 0) continue;
    const double p = static_cast<double>(a) / n;
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total());
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::size_t nij = t.count(i, j);
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      mi += x / n *
            std::log(n * x / (static_cast<double>(t.row_sums()[i]) * static_cast<double>(t.col_sums()[j])));
    }
  }
  return std::max(mi, 0.0);
}

double expected_mutual_information(const std::vector<std::size_t>& row_sums,
                                   const std::vector<std::size_t>& col_sums) {
  std::size_t total = 0;
  for (std::size_t a : row_sums) total += a;
  const double n = static_cast<double>(total);
  auto lf = [](double x) { return std::lgamma(x + 1.0); };
  double emi = 0.0;
  for (std::size_t a : row_sums) {
    for (std::size_t b : col_sums) {
      const std::size_t lo = std::max<std::size_t>(1, a + b > total ? a + b - total : 0);
      const std::size_t hi = std::min(a, b);
      const double da = static_cast<double>(a);
      const double db = static_cast<double>(b);
      const double fixed = lf(da) + lf(db) + lf(n - da) + lf(n - db) - lf(n);
      for (std::size_t nij = lo; nij <= hi; ++nij) {
        const double x = static_cast<double>(nij);
        const double log_p =
            fixed - lf(x) - lf(da - x) - lf(db - x) - lf(n - da - db + x);
        emi += x / n * std::log(n * x / (da * db)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

HomogeneityCompleteness homogeneity_completeness_v(const std::vector<int>& pred,
                                                   const std::vector<int>& truth) {
  const ContingencyTable t(pred, truth);
  const double mi = mutual_information(t);
  const double h_truth = entropy_of(t.col_sums(), t.total());
  const double h_pred = entropy_of(t.row_sums(), t.total());
  HomogeneityCompleteness out;
  // H(truth|pred) = H(truth) - MI.
  out.homogeneity = h_truth == 0.0 ? 1.0 : std::clamp(mi / h_truth, 0.0, 1.0);
  out.completeness = h_pred == 0.0 ? 1.0 : std::clamp(mi / h_pred, 0.0, 1.0);
  if (t.same_partition()) {
    out.homogeneity = out.completeness = 1.0;
  }
  const double s = out.homogeneity + out.completeness;
  out.v_measure = s == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / s;
  return out;
}

RandScores rand_ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable t(pred, truth);
  RandScores out;
  if (t.same_partition()) {
    out.rand = out.ari = 1.0;
    return out;
  }
  double sum_ij = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) sum_ij += choose2(t.count(i, j));
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t a : t.row_sums()) sum_a += choose2(a);
  for (std::size_t b : t.col_sums()) sum_b += choose2(b);
  const double pairs = choose2(t.total());
  // agreeing pairs: together in both, or apart in both
  out.rand = pairs == 0.0 ? 1.0 : (pairs + 2.0 * sum_ij - sum_a - sum_b) / pairs;
  const double expected = pairs == 0.0 ? 0.0 : sum_a * sum_b / pairs;
  const double max_index = 0.5 * (sum_a + sum_b);
  out.ari = max_index == expected ? 0.0 : (sum_ij - expected) / (max_index - expected);
  return out;
}

MutualInformation mi_nmi_ami(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable t(pred, truth);
  MutualInformation out;
  out.mi = mutual_information(t);
  if (t.same_partition()) {
    out.nmi = out.ami = 1.0;
    return out;
  }
  const double mean_h =
      0.5 * (entropy_of(t.row_sums(), t.total()) + entropy_of(t.col_sums(), t.total()));
  out.nmi = mean_h == 0.0 ? 0.0 : std::clamp(out.mi / mean_h, 0.0, 1.0);
  const double emi = expected_mutual_information(t.row_sums(), t.col_sums());
  const double denom = mean_h - emi;
  out.ami = std::abs(denom) < 1e-15 ? 0.0 : (out.mi - emi) / denom;
  return out;
}

std::optional<std::size_t> elbow_hint(const std::vector<std::size_t>& ks,
                                      const std::vector<double>& values) {
  if (ks.size() != values.size()) throw Error(ErrorCode::LengthMismatch, "ks and values differ");
  if (values.size() < 3) return std::nullopt;
  std::size_t best = 1;
  double best_d = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double d = values[i - 1] - 2.0 * values[i] + values[i + 1];
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return ks[best];
}

}  // namespace clusterkit
