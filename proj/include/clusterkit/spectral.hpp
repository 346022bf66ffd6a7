#pragma once

#include <cstddef>

#include "clusterkit/core.hpp"
#include "clusterkit/linalg.hpp"
#include "clusterkit/metrics.hpp"
#include "clusterkit/neighbors.hpp"
#include "clusterkit/prototypes.hpp"

namespace clusterkit {

// Symmetric, non-negative, zero diagonal. Stored dense.
using AffinityMatrix = Matrix;

// S_ij = 1 for pairs kept by symmetrize_knn, 0 otherwise.
AffinityMatrix knn_affinity(const CondensedDistanceMatrix& distances, std::size_t k,
                            SymmetrizeMode mode);

AffinityMatrix gaussian_affinity(const CondensedDistanceMatrix& distances, double sigma);

// L = D - S.
Matrix laplacian(const AffinityMatrix& s);

// Eigenvectors of L for the k smallest eigenvalues as columns; each column
// flipped so its largest-magnitude entry is positive.
Matrix spectral_embed(const AffinityMatrix& s, std::size_t k);

// Sign convention used by spectral_embed, applied in place.
void fix_eigenvector_signs(Matrix& vectors);

enum class AffinityKind { Knn, Gaussian };

struct AffinityParams {
  AffinityKind kind = AffinityKind::Knn;
  std::size_t k = 10;
  SymmetrizeMode mode = SymmetrizeMode::Union;
  double sigma = 1.0;
  Metric metric = Metric::Euclidean;
};

AffinityMatrix build_affinity(const Dataset& data, const AffinityParams& params);

struct SpectralResult {
  LabelVector labels;
  Matrix embedding;
  std::vector<double> eigenvalues;  // full spectrum, ascending
};

// k-means on the n_clusters leading eigenvectors, none dropped.
SpectralResult spectral_cluster(const Dataset& data, const AffinityParams& affinity,
                                std::size_t n_clusters, KMeansParams kmeans_params);

}  // namespace clusterkit
