#include "clusterkit/prototypes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "clusterkit/linalg.hpp"

namespace clusterkit {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

KMeansInit parse_kmeans_init(std::string_view name) {
  if (name == "random") return KMeansInit::Random;
  if (name == "kmeanspp" || name == "k-means++") return KMeansInit::KMeansPlusPlus;
  if (name == "given") return KMeansInit::Given;
  throw Error(ErrorCode::InvalidArgument, "unknown k-means init '" + std::string(name) + "'");
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return std::generate_canonical<double, 53>(rng);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)), n - 1);
}

Matrix random_init(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(points.rows());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Matrix out(k, points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t pick = c + uniform_index(rng, idx.size() - c);
    std::swap(idx[c], idx[pick]);
    std::copy(points.row(idx[c]).begin(), points.row(idx[c]).end(), out.row(c).begin());
  }
  return out;
}

std::size_t nearest_centroid(std::span<const double> x, const Matrix& centroids, double* dist) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_euclidean(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

struct LloydRun {
  Matrix centroids;
  std::vector<std::size_t> assignment;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;
};

double assign_all(const Matrix& points, const Matrix& centroids,
                  std::vector<std::size_t>& assignment, std::vector<double>& dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    assignment[i] = nearest_centroid(points.row(i), centroids, &dist[i]);
    total += dist[i];
  }
  return total;
}

// Moves the point farthest from its centroid into each empty cluster.
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<std::size_t>& assignment,
                  std::vector<double>& dist) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t a : assignment) ++counts[a];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = points.rows();
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (counts[assignment[i]] < 2) continue;
      if (far == points.rows() || dist[i] > dist[far]) far = i;
    }
    if (far == points.rows()) break;
    --counts[assignment[far]];
    assignment[far] = c;
    counts[c] = 1;
    dist[far] = 0.0;
    std::copy(points.row(far).begin(), points.row(far).end(), centroids.row(c).begin());
  }
}

Matrix cluster_means(const Matrix& points, const std::vector<std::size_t>& assignment,
                     const Matrix& previous) {
  Matrix sums(previous.rows(), previous.cols());
  std::vector<std::size_t> counts(previous.rows(), 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    ++counts[assignment[i]];
    for (std::size_t j = 0; j < points.cols(); ++j) sums(assignment[i], j) += points(i, j);
  }
  for (std::size_t c = 0; c < previous.rows(); ++c) {
    for (std::size_t j = 0; j < previous.cols(); ++j) {
      sums(c, j) = counts[c] ? sums(c, j) / static_cast<double>(counts[c]) : previous(c, j);
    }
  }
  return sums;
}

LloydRun lloyd(const Matrix& points, Matrix centroids, std::size_t max_iter, double tol) {
  const std::size_t n = points.rows();
  LloydRun run;
  run.assignment.assign(n, 0);
  std::vector<double> dist(n);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    assign_all(points, centroids, run.assignment, dist);
    repair_empty(points, centroids, run.assignment, dist);
    Matrix updated = cluster_means(points, run.assignment, centroids);
    double shift = 0.0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      shift = std::max(shift, euclidean(updated.row(c), centroids.row(c)));
    }
    centroids = std::move(updated);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inertia += squared_euclidean(points.row(i), centroids.row(run.assignment[i]));
    }
    run.trace.push_back(inertia);
    run.iterations = iter + 1;
    if (shift < tol) break;
  }
  run.inertia = assign_all(points, centroids, run.assignment, dist);
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  if (k < 1 || k > n) throw Error(ErrorCode::KOutOfRange, "k must be in [1, n]");
  Matrix out(k, points.cols());
  auto take = [&](std::size_t c, std::size_t i) {
    std::copy(points.row(i).begin(), points.row(i).end(), out.row(c).begin());
  };
  take(0, uniform_index(rng, n));
  std::vector<double> dmin(n);
  for (std::size_t i = 0; i < n; ++i) dmin[i] = squared_euclidean(points.row(i), out.row(0));
  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(dmin.begin(), dmin.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (dmin[i] <= 0.0) continue;
        cumulative += dmin[i];
        pick = i;
        if (cumulative > target) break;
      }
    } else {
      pick = uniform_index(rng, n);
    }
    take(c, pick);
    for (std::size_t i = 0; i < n; ++i) {
      dmin[i] = std::min(dmin[i], squared_euclidean(points.row(i), out.row(c)));
    }
  }
  return out;
}

Matrix kmeanspp_init(const Matrix& points, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return kmeanspp_init(points, k, rng);
}

KMeansModel kmeans(const Matrix& points, const KMeansParams& params) {
  const std::size_t n = points.rows();
  if (params.k < 1 || params.k > n) {
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(params.k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (params.init == KMeansInit::Given &&
      (params.initial_centroids.rows() != params.k ||
       params.initial_centroids.cols() != points.cols())) {
    throw Error(ErrorCode::DimensionMismatch, "initial centroids must be k x m");
  }
  const std::size_t restarts =
      params.init == KMeansInit::Given ? 1 : std::max<std::size_t>(params.n_restarts, 1);

  LloydRun best;
  std::uint64_t best_seed = 0;
  bool have_best = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t seed = derive_seed(params.seed, r);
    std::mt19937_64 rng(seed);
    Matrix init;
    switch (params.init) {
      case KMeansInit::Random: init = random_init(points, params.k, rng); break;
      case KMeansInit::KMeansPlusPlus: init = kmeanspp_init(points, params.k, rng); break;
      case KMeansInit::Given: init = params.initial_centroids; break;
    }
    LloydRun run = lloyd(points, std::move(init), params.max_iter, params.tol);
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      best_seed = seed;
      have_best = true;
    }
  }

  std::vector<int> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(best.assignment[i]) + 1;
  LabelVector canonical = canonicalize_labels(LabelVector(raw));
  Matrix centroids(params.k, points.cols());
  std::vector<bool> placed(params.k, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto dst = static_cast<std::size_t>(canonical[i] - 1);
    if (placed[dst]) continue;
    placed[dst] = true;
    const auto src = best.centroids.row(best.assignment[i]);
    std::copy(src.begin(), src.end(), centroids.row(dst).begin());
  }
  // Centroids that ended up without members (only possible with duplicate
  // points) keep their relative order after the populated ones.
  std::size_t next = canonical.n_clusters();
  std::set<std::size_t> used(best.assignment.begin(), best.assignment.end());
  for (std::size_t c = 0; c < params.k; ++c) {
    if (used.count(c)) continue;
    std::copy(best.centroids.row(c).begin(), best.centroids.row(c).end(),
              centroids.row(next++).begin());
  }

  KMeansModel model;
  model.centroids = std::move(centroids);
  model.labels = std::move(canonical);
  model.inertia = best.inertia;
  model.iterations = best.iterations;
  model.seed = best_seed;
  model.inertia_trace = std::move(best.trace);
  return model;
}

KMeansModel kmeans(const Dataset& data, const KMeansParams& params) {
  return kmeans(data.points(), params);
}

// ---------------------------------------------------------------------------
// Gaussian mixture EM
// ---------------------------------------------------------------------------

namespace {

struct PreparedComponent {
  double log_weight;
  std::vector<double> mean;
  Matrix cholesky;
  double log_det;
};

PreparedComponent prepare(const MixtureComponent& c, std::size_t index) {
  PreparedComponent p;
  p.log_weight = std::log(c.weight);
  p.mean = c.mean;
  auto chol = cholesky(c.covariance);
  if (!chol) {
    throw Error(ErrorCode::SingularCovariance,
                "covariance of component " + std::to_string(index) + " is not positive definite");
  }
  p.cholesky = std::move(*chol);
  p.log_det = 0.0;
  for (std::size_t j = 0; j < p.cholesky.rows(); ++j) p.log_det += 2.0 * std::log(p.cholesky(j, j));
  return p;
}

double log_gaussian(std::span<const double> x, const PreparedComponent& c) {
  const std::size_t m = x.size();
  std::vector<double> diff(m);
  for (std::size_t j = 0; j < m; ++j) diff[j] = x[j] - c.mean[j];
  const auto z = forward_substitute(c.cholesky, diff);
  double quad = 0.0;
  for (double v : z) quad += v * v;
  return -0.5 * (static_cast<double>(m) * std::log(2.0 * std::numbers::pi) + c.log_det + quad);
}

// tr(S^-1) from the Cholesky factor: the squared Frobenius norm of L^-1.
double trace_of_inverse(const Matrix& lower) {
  const std::size_t m = lower.rows();
  double total = 0.0;
  std::vector<double> e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    for (double v : forward_substitute(lower, e)) total += v * v;
    e[j] = 0.0;
  }
  return total;
}

// E-step: fills responsibilities and returns the log-likelihood minus the
// covariance penalty cov_reg / 2 * sum_k tr(S_k^-1).
double expectation(const Matrix& points, const std::vector<MixtureComponent>& components,
                   double cov_reg, Matrix& resp) {
  std::vector<PreparedComponent> prepared;
  for (std::size_t c = 0; c < components.size(); ++c) prepared.push_back(prepare(components[c], c));
  const std::size_t k = components.size();
  double total = 0.0;
  std::vector<double> logp(k);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      logp[c] = prepared[c].log_weight + log_gaussian(points.row(i), prepared[c]);
      mx = std::max(mx, logp[c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += std::exp(logp[c] - mx);
    const double log_norm = mx + std::log(sum);
    total += log_norm;
    for (std::size_t c = 0; c < k; ++c) resp(i, c) = std::exp(logp[c] - log_norm);
  }
  for (const auto& p : prepared) total -= 0.5 * cov_reg * trace_of_inverse(p.cholesky);
  return total;
}

std::vector<MixtureComponent> maximization(const Matrix& points, const Matrix& resp,
                                           double cov_reg) {
  const std::size_t n = points.rows();
  const std::size_t m = points.cols();
  const std::size_t k = resp.cols();
  std::vector<MixtureComponent> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    double nk = 0.0;
    for (std::size_t i = 0; i < n; ++i) nk += resp(i, c);
    nk = std::max(nk, 10.0 * std::numeric_limits<double>::epsilon());
    auto& comp = out[c];
    comp.weight = nk / static_cast<double>(n);
    comp.mean.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) comp.mean[j] += resp(i, c) * points(i, j);
    }
    for (double& v : comp.mean) v /= nk;
    comp.covariance = Matrix(m, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < m; ++a) {
        const double da = points(i, a) - comp.mean[a];
        for (std::size_t b = a; b < m; ++b) {
          comp.covariance(a, b) += resp(i, c) * da * (points(i, b) - comp.mean[b]);
        }
      }
    }
    // MAP update under the penalty above: (scatter + cov_reg I) / n_k.
    for (std::size_t a = 0; a < m; ++a) {
      comp.covariance(a, a) += cov_reg;
      for (std::size_t b = a; b < m; ++b) {
        comp.covariance(a, b) /= nk;
        comp.covariance(b, a) = comp.covariance(a, b);
      }
    }
  }
  return out;
}

GmmModel run_em(const Matrix& points, std::vector<MixtureComponent> components,
                const GmmParams& params) {
  const std::size_t n = points.rows();
  const std::size_t k = components.size();
  GmmModel model;
  model.responsibilities = Matrix(n, k);
  double previous = expectation(points, components, params.cov_reg, model.responsibilities);
  model.log_likelihood_trace.push_back(previous);
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    components = maximization(points, model.responsibilities, params.cov_reg);
    const double current = expectation(points, components, params.cov_reg, model.responsibilities);
    model.log_likelihood_trace.push_back(current);
    model.iterations = iter + 1;
    const bool converged = current - previous < params.tol;
    previous = current;
    if (converged) break;
  }
  model.components = std::move(components);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (model.responsibilities(i, c) > model.responsibilities(i, best)) best = c;
    }
    labels[i] = static_cast<int>(best) + 1;
  }
  model.labels = LabelVector(std::move(labels));
  return model;
}

}  // namespace

GmmModel gmm_em(const Matrix& points, const GmmParams& params) {
  const std::size_t n = points.rows();
  if (params.k < 1 || params.k > n) throw Error(ErrorCode::KOutOfRange, "k must be in [1, n]");
  if (!(params.cov_reg > 0.0)) throw Error(ErrorCode::InvalidArgument, "cov_reg must be > 0");

  if (params.init == GmmInit::Given) {
    if (params.initial.size() != params.k) {
      throw Error(ErrorCode::DimensionMismatch, "need k initial components");
    }
    return run_em(points, params.initial, params);
  }

  GmmModel best;
  bool have_best = false;
  const std::size_t restarts = std::max<std::size_t>(params.n_restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    KMeansParams kp;
    kp.k = params.k;
    kp.n_restarts = 1;
    kp.seed = derive_seed(params.seed, r);
    const KMeansModel km = kmeans(points, kp);
    // Hard k-means memberships seed the first M-step.
    Matrix resp(n, params.k);
    for (std::size_t i = 0; i < n; ++i) resp(i, static_cast<std::size_t>(km.labels[i] - 1)) = 1.0;
    GmmModel model = run_em(points, maximization(points, resp, params.cov_reg), params);
    if (!have_best || model.log_likelihood() > best.log_likelihood()) {
      best = std::move(model);
      have_best = true;
    }
  }
  return best;
}

GmmModel gmm_em(const Dataset& data, const GmmParams& params) {
  return gmm_em(data.points(), params);
}

// ---------------------------------------------------------------------------
// Density peaks
// ---------------------------------------------------------------------------

std::size_t DecisionGraph::peak() const {
  for (std::size_t i = 0; i < nearest_denser.size(); ++i) {
    if (!nearest_denser[i]) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "decision graph has no peak");
}

DecisionGraph density_peaks_graph(const CondensedDistanceMatrix& distances, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::NegativeRadius, "radius must be > 0");
  const std::size_t n = distances.n();
  DecisionGraph g;
  g.radius = r;
  g.rho.assign(n, 0);
  g.delta.assign(n, 0.0);
  g.nearest_denser.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distances(i, j) <= r) {
        ++g.rho[i];
        ++g.rho[j];
      }
    }
  }
  auto denser = [&](std::size_t b, std::size_t a) {
    return g.rho[b] > g.rho[a] || (g.rho[b] == g.rho[a] && b < a);
  };
  const double diameter = distances.max();
  for (std::size_t a = 0; a < n; ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || !denser(b, a)) continue;
      const double d = distances(a, b);
      if (d < best) {
        best = d;
        g.nearest_denser[a] = b;
      }
    }
    g.delta[a] = g.nearest_denser[a] ? best : diameter;
  }
  return g;
}

std::vector<std::size_t> decision_graph_standouts(const DecisionGraph& graph, std::size_t k) {
  std::vector<std::size_t> idx(graph.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto gamma = [&](std::size_t i) { return static_cast<double>(graph.rho[i]) * graph.delta[i]; };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return gamma(a) > gamma(b); });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

LabelVector density_peaks_assign(const DecisionGraph& graph,
                                 const std::vector<std::size_t>& selected) {
  if (selected.empty()) throw Error(ErrorCode::EmptySelection, "no peaks selected");
  const std::size_t n = graph.size();
  std::vector<int> labels(n, -1);
  for (std::size_t c = 0; c < selected.size(); ++c) {
    const std::size_t s = selected[c];
    if (s >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "selected index " + std::to_string(s) + " >= n");
    }
    if (labels[s] != -1) {
      throw Error(ErrorCode::DuplicateSelection, "index " + std::to_string(s) + " selected twice");
    }
    labels[s] = static_cast<int>(c) + 1;
  }
  // Every nearest denser point precedes its dependents in this order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (graph.rho[a] != graph.rho[b]) return graph.rho[a] > graph.rho[b];
    return a < b;
  });
  for (std::size_t i : order) {
    if (labels[i] != -1) continue;
    const auto& parent = graph.nearest_denser[i];
    labels[i] = parent ? labels[*parent] : kNoise;
  }
  return LabelVector(std::move(labels));
}

}  // namespace clusterkit
