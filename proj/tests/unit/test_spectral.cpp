#include <doctest.h>

#include "clusterkit/io.hpp"
#include "clusterkit/linalg.hpp"
#include "clusterkit/spectral.hpp"
#include "clusterkit/validation.hpp"
#include "support.hpp"

using namespace clusterkit;

namespace {

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  }
  return a;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

void check_eigensystem(const Matrix& a, const EigenSystem& es, double tol) {
  const std::size_t n = a.rows();
  const Matrix& v = es.eigenvectors;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t k = 0; k < n; ++k) av += a(i, k) * v(k, c);
      CHECK(std::abs(av - es.eigenvalues[c] * v(i, c)) < tol);
    }
    for (std::size_t d = 0; d < n; ++d) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += v(k, c) * v(k, d);
      CHECK(std::abs(dot - (c == d ? 1.0 : 0.0)) < tol);
    }
  }
  for (std::size_t c = 1; c < n; ++c) CHECK(es.eigenvalues[c - 1] <= es.eigenvalues[c]);
}

}  // namespace

TEST_CASE("knn_affinity") {
  const CondensedDistanceMatrix two = pairwise(make_dataset({{0}, {1}}));
  CHECK(knn_affinity(two, 1, SymmetrizeMode::Union) == Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(knn_affinity(two, 2, SymmetrizeMode::Union), Error);

  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const CondensedDistanceMatrix dm = pairwise(make_dataset(testsupport::random_rows(rng, 15, 2)));
    const Matrix u = knn_affinity(dm, 3, SymmetrizeMode::Union);
    const Matrix m = knn_affinity(dm, 3, SymmetrizeMode::Mutual);
    for (std::size_t i = 0; i < 15; ++i) {
      CHECK(u(i, i) == 0.0);
      for (std::size_t j = 0; j < 15; ++j) {
        CHECK(u(i, j) == u(j, i));
        CHECK(m(i, j) <= u(i, j));
      }
    }
  }
}

TEST_CASE("gaussian_affinity") {
  const CondensedDistanceMatrix dm = pairwise(make_dataset({{0, 0}, {0, 0}, {std::sqrt(2.0), 0}}));
  const Matrix s = gaussian_affinity(dm, 1.0);
  CHECK(s(0, 1) == 1.0);
  CHECK(s(0, 2) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(s(0, 0) == 0.0);
  const Matrix wide = gaussian_affinity(dm, 1e6);
  CHECK(wide(1, 2) > 0.999999);
  CHECK_THROWS_AS(gaussian_affinity(dm, 0.0), Error);
}

TEST_CASE("laplacian") {
  CHECK(laplacian(Matrix::from_rows({{0, 1}, {1, 0}})) == Matrix::from_rows({{1, -1}, {-1, 1}}));
  const Matrix cliques = Matrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  const Matrix l = laplacian(cliques);
  CHECK(l(0, 2) == 0.0);
  const EigenSystem es = symmetric_eigen(l);
  CHECK(std::abs(es.eigenvalues[0]) < 1e-12);
  CHECK(std::abs(es.eigenvalues[1]) < 1e-12);
  CHECK(es.eigenvalues[2] == doctest::Approx(2.0));

  std::mt19937_64 rng(113);
  const Matrix s = gaussian_affinity(pairwise(make_dataset(testsupport::random_rows(rng, 12, 3))), 0.5);
  const Matrix ls = laplacian(s);
  for (std::size_t i = 0; i < 12; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 12; ++j) row += ls(i, j);
    CHECK(std::abs(row) < 1e-12);
  }
}

TEST_CASE("symmetric_eigen") {
  const Matrix d = Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  const EigenSystem es = symmetric_eigen(d);
  CHECK(es.eigenvalues == std::vector<double>{1, 2, 3});
  CHECK(std::abs(es.eigenvectors(1, 0)) == 1.0);
  CHECK(std::abs(es.eigenvectors(2, 1)) == 1.0);
  CHECK(std::abs(es.eigenvectors(0, 2)) == 1.0);

  const EigenSystem two = symmetric_eigen(Matrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(two.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(two.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(symmetric_eigen(Matrix::from_rows({{1, 2}, {0, 1}})), Error);
  std::mt19937_64 rng(1);
  try {
    symmetric_eigen(random_symmetric(rng, 10), 1e-8, 1);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("symmetric_eigen reconstructs random matrices") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_symmetric(rng, 20);
    const EigenSystem es = symmetric_eigen(a);
    check_eigensystem(a, es, 1e-8);
    Matrix back(20, 20);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 20; ++j) {
        for (std::size_t c = 0; c < 20; ++c) {
          back(i, j) += es.eigenvectors(i, c) * es.eigenvalues[c] * es.eigenvectors(j, c);
        }
      }
    }
    CHECK(max_abs_diff(back, a) < 1e-6);
  }
}

TEST_CASE("zero eigenvalues count connected components") {
  std::mt19937_64 rng(131);
  std::bernoulli_distribution edge(0.12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial % 30);
    Matrix s(n, n);
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!edge(rng)) continue;
        s(i, j) = s(j, i) = 1.0;
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
    const auto comps = testsupport::bfs_components(adj);
    const int n_comp = *std::max_element(comps.begin(), comps.end());
    const EigenSystem es = symmetric_eigen(laplacian(s));
    std::size_t zeros = 0;
    for (double v : es.eigenvalues) {
      CHECK(v >= -1e-8);
      zeros += v < 1e-8;
    }
    CHECK(zeros == static_cast<std::size_t>(n_comp));
  }
}

TEST_CASE("connected Laplacian has the constant vector first") {
  std::mt19937_64 rng(137);
  const Matrix s = gaussian_affinity(pairwise(make_dataset(testsupport::random_rows(rng, 10, 2))), 1.0);
  const Matrix v = spectral_embed(s, 1);
  for (std::size_t i = 0; i < 10; ++i) CHECK(v(i, 0) == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-8));
}

TEST_CASE("spectral_embed") {
  const Matrix cliques = Matrix::from_rows({{0, 1, 1, 0, 0}, {1, 0, 1, 0, 0}, {1, 1, 0, 0, 0},
                                            {0, 0, 0, 0, 1}, {0, 0, 0, 1, 0}});
  const Matrix e = spectral_embed(cliques, 2);
  CHECK(e.cols() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(std::abs(e(0, c) - e(1, c)) < 1e-8);
    CHECK(std::abs(e(1, c) - e(2, c)) < 1e-8);
    CHECK(std::abs(e(3, c) - e(4, c)) < 1e-8);
  }
  CHECK_THROWS_AS(spectral_embed(cliques, 6), Error);
  CHECK_THROWS_AS(spectral_embed(cliques, 0), Error);

  // Largest-magnitude entry positive, ties to the lowest index.
  Matrix v = Matrix::from_rows({{-0.5, 0.5}, {0.5, -0.5}});
  fix_eigenvector_signs(v);
  CHECK(v == Matrix::from_rows({{0.5, 0.5}, {-0.5, -0.5}}));
}

TEST_CASE("Iris spectral embedding separates three groups") {
  const Dataset d = testsupport::iris();
  AffinityParams ap;
  ap.k = 26;
  const Matrix e = spectral_embed(build_affinity(d, ap), 3);
  KMeansParams kp;
  kp.k = 3;
  const SpectralResult r = spectral_cluster(d, ap, 3, kp);
  CHECK(r.embedding.cols() == 3);
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(r.embedding(i, c) - e(i, c)) < 1e-9);
  }
  CHECK(testsupport::near(match_percentage(r.labels, *d.true_labels()), 0.91, 0.01));
}

TEST_CASE("spectral_cluster on separated groups") {
  const Dataset blobs = gen_blobs(90, {{0, 0}, {15, 0}, {0, 15}}, 0.8, 6);
  AffinityParams ap;
  ap.k = 8;
  KMeansParams kp;
  kp.k = 3;
  const SpectralResult r = spectral_cluster(blobs, ap, 3, kp);
  CHECK(rand_ari(r.labels.values(), *blobs.true_labels()).ari == doctest::Approx(1.0));

  const Dataset pairs = make_dataset({{0, 0}, {0.1, 0}, {0, 0.1}, {9, 9}, {9.1, 9}, {9, 9.1}});
  ap.k = 2;
  kp.k = 2;
  CHECK(match_percentage(spectral_cluster(pairs, ap, 2, kp).labels, std::vector<int>{1, 1, 1, 2, 2, 2}) == 1.0);
}
