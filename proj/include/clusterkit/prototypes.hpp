#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/metrics.hpp"

namespace clusterkit {

// Seed for restart `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

enum class KMeansInit { Random, KMeansPlusPlus, Given };

KMeansInit parse_kmeans_init(std::string_view name);

struct KMeansParams {
  std::size_t k = 3;
  KMeansInit init = KMeansInit::KMeansPlusPlus;
  std::size_t n_restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  Matrix initial_centroids;  // used with KMeansInit::Given
};

struct KMeansModel {
  Matrix centroids;  // row c belongs to label c + 1
  LabelVector labels;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  // Inertia after every Lloyd iteration of the winning restart.
  std::vector<double> inertia_trace;
};

KMeansModel kmeans(const Matrix& points, const KMeansParams& params);
KMeansModel kmeans(const Dataset& data, const KMeansParams& params);

// First centroid uniform; each further one drawn with probability
// proportional to its squared distance to the nearest chosen centroid.
Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::mt19937_64& rng);
Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gaussian mixtures
// ---------------------------------------------------------------------------

enum class GmmInit { KMeans, Given };

struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> mean;
  Matrix covariance;
};

struct GmmParams {
  std::size_t k = 3;
  GmmInit init = GmmInit::KMeans;
  std::size_t n_restarts = 1;
  std::size_t max_iter = 200;
  double tol = 1e-7;
  double cov_reg = 1e-6;
  std::uint64_t seed = 0;
  std::vector<MixtureComponent> initial;  // used with GmmInit::Given
};

// Covariances take the MAP update (scatter_k + cov_reg I) / n_k, so the
// traced objective is the log-likelihood minus cov_reg / 2 * sum_k
// tr(cov_k^-1). EM never decreases it.
struct GmmModel {
  std::vector<MixtureComponent> components;
  Matrix responsibilities;  // n x k, rows sum to 1
  std::vector<double> log_likelihood_trace;
  LabelVector labels;  // argmax responsibility, component c -> label c + 1
  std::size_t iterations = 0;

  double log_likelihood() const {
    return log_likelihood_trace.empty() ? 0.0 : log_likelihood_trace.back();
  }
};

GmmModel gmm_em(const Matrix& points, const GmmParams& params);
GmmModel gmm_em(const Dataset& data, const GmmParams& params);

// ---------------------------------------------------------------------------
// Density peaks
// ---------------------------------------------------------------------------

// Point b is denser than a when rho_b > rho_a, or rho_b == rho_a and b < a.
struct DecisionGraph {
  double radius = 0.0;
  std::vector<std::size_t> rho;
  std::vector<double> delta;
  std::vector<std::optional<std::size_t>> nearest_denser;

  std::size_t size() const noexcept { return rho.size(); }
  // The single point without a denser point.
  std::size_t peak() const;
};

DecisionGraph density_peaks_graph(const CondensedDistanceMatrix& distances, double r);

// Indices of the k points with the largest rho * delta (ties by index),
// the usual "stand-out" reading of the decision graph.
std::vector<std::size_t> decision_graph_standouts(const DecisionGraph& graph, std::size_t k);

// selected[c] seeds label c + 1; every other point takes the label of its
// nearest denser point. Points whose chain ends at an unselected global
// peak are noise.
LabelVector density_peaks_assign(const DecisionGraph& graph,
                                 const std::vector<std::size_t>& selected);

}  // namespace clusterkit
