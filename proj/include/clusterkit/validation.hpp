#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/metrics.hpp"

namespace clusterkit {

// Counts n_ij between two labelings. Rows follow the distinct values of
// `pred` in ascending order, columns those of `truth`; noise (0) is an
// ordinary value here.
class ContingencyTable {
 public:
  ContingencyTable(const std::vector<int>& pred, const std::vector<int>& truth);

  std::size_t rows() const noexcept { return row_sums_.size(); }
  std::size_t cols() const noexcept { return col_sums_.size(); }
  std::size_t total() const noexcept { return total_; }
  std::size_t count(std::size_t i, std::size_t j) const { return counts_[i * cols() + j]; }
  const std::vector<std::size_t>& row_sums() const noexcept { return row_sums_; }
  const std::vector<std::size_t>& col_sums() const noexcept { return col_sums_; }
  // True when both labelings induce the same partition.
  bool same_partition() const;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_sums_;
  std::size_t total_ = 0;
};

// Sum of squared distances to the cluster centroids (row c for label c+1);
// centroids default to the cluster means.
double inertia(const Dataset& data, const LabelVector& labels,
               const std::optional<Matrix>& centroids = std::nullopt);
double inertia(const Matrix& points, const LabelVector& labels,
               const std::optional<Matrix>& centroids = std::nullopt);

struct SilhouetteResult {
  std::vector<double> scores;  // noise points carry 0 and are left out of the mean
  double mean = 0.0;
};

SilhouetteResult silhouette(const CondensedDistanceMatrix& distances, const LabelVector& labels);

// +infinity when every cluster is collapsed onto its centroid.
double calinski_harabasz(const Dataset& data, const LabelVector& labels);
double calinski_harabasz(const Matrix& points, const LabelVector& labels);

struct HomogeneityCompleteness {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
};

HomogeneityCompleteness homogeneity_completeness_v(const std::vector<int>& pred,
                                                   const std::vector<int>& truth);

struct RandScores {
  double rand = 0.0;
  double ari = 0.0;
};

RandScores rand_ari(const std::vector<int>& pred, const std::vector<int>& truth);

struct MutualInformation {
  double mi = 0.0;
  double nmi = 0.0;
  double ami = 0.0;
};

MutualInformation mi_nmi_ami(const std::vector<int>& pred, const std::vector<int>& truth);

// Natural-log entropies and mutual information of a table.
double entropy_of(const std::vector<std::size_t>& marginal, std::size_t total);
double mutual_information(const ContingencyTable& table);
// Expected MI under the hypergeometric (fixed marginals) model.
double expected_mutual_information(const std::vector<std::size_t>& row_sums,
                                   const std::vector<std::size_t>& col_sums);

// k at the largest second difference of a curve sampled at consecutive ks.
std::optional<std::size_t> elbow_hint(const std::vector<std::size_t>& ks,
                                      const std::vector<double>& values);

}  // namespace clusterkit
