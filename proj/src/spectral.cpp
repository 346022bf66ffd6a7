#include "clusterkit/spectral.hpp"

#include <cmath>
#include <string>

namespace clusterkit {

AffinityMatrix knn_affinity(const CondensedDistanceMatrix& distances, std::size_t k,
                            SymmetrizeMode mode) {
  const std::size_t n = distances.n();
  const NeighborTable table = knn_neighbors(distances, k, false);
  AffinityMatrix s(n, n);
  for (const auto& [i, j] : symmetrize_knn(table, mode)) {
    s(i, j) = 1.0;
    s(j, i) = 1.0;
  }
  return s;
}

AffinityMatrix gaussian_affinity(const CondensedDistanceMatrix& distances, double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma must be > 0, got " + std::to_string(sigma));
  }
  const std::size_t n = distances.n();
  AffinityMatrix s(n, n);
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distances(i, j);
      s(i, j) = s(j, i) = std::exp(-d * d / denom);
    }
  }
  return s;
}

Matrix laplacian(const AffinityMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw Error(ErrorCode::DimensionMismatch, "affinity must be square");
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      degree += s(i, j);
      l(i, j) = -s(i, j);
    }
    l(i, i) = degree;
  }
  return l;
}

void fix_eigenvector_signs(Matrix& vectors) {
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, j)) > std::abs(vectors(arg, j))) arg = i;
    }
    if (vectors(arg, j) < 0.0) {
      for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, j) = -vectors(i, j);
    }
  }
}

namespace {

Matrix leading_columns(const EigenSystem& eig, std::size_t k) {
  const std::size_t n = eig.eigenvectors.rows();
  Matrix out(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) out(i, j) = eig.eigenvectors(i, j);
  }
  fix_eigenvector_signs(out);
  return out;
}

}  // namespace

Matrix spectral_embed(const AffinityMatrix& s, std::size_t k) {
  if (k < 1 || k > s.rows()) throw Error(ErrorCode::KOutOfRange, "k must be in [1, n]");
  return leading_columns(symmetric_eigen(laplacian(s)), k);
}

AffinityMatrix build_affinity(const Dataset& data, const AffinityParams& params) {
  const auto distances = pairwise(data, params.metric);
  if (params.kind == AffinityKind::Gaussian) return gaussian_affinity(distances, params.sigma);
  return knn_affinity(distances, params.k, params.mode);
}

SpectralResult spectral_cluster(const Dataset& data, const AffinityParams& affinity,
                                std::size_t n_clusters, KMeansParams kmeans_params) {
  if (n_clusters < 1 || n_clusters > data.n()) {
    throw Error(ErrorCode::KOutOfRange, "n_clusters must be in [1, n]");
  }
  const EigenSystem eig = symmetric_eigen(laplacian(build_affinity(data, affinity)));
  SpectralResult out;
  out.embedding = leading_columns(eig, n_clusters);
  out.eigenvalues = eig.eigenvalues;
  kmeans_params.k = n_clusters;
  out.labels = kmeans(out.embedding, kmeans_params).labels;
  return out;
}

}  // namespace clusterkit
