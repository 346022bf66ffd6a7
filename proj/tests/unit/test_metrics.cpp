#include <doctest.h>

#include "clusterkit/metrics.hpp"
#include "support.hpp"

using namespace clusterkit;

namespace {

std::vector<double> row(const Dataset& d, std::size_t i) {
  const auto r = d.point(i);
  return {r.begin(), r.end()};
}

}  // namespace

TEST_CASE("euclidean on Iris rows") {
  const Dataset d = testsupport::iris();
  CHECK(euclidean(d.point(0), d.point(1)) == doctest::Approx(0.5385).epsilon(1e-4));
  CHECK(euclidean(d.point(2), d.point(3)) == doctest::Approx(0.2449).epsilon(1e-4));
  CHECK(euclidean(d.point(0), d.point(1)) == doctest::Approx(testsupport::dist(row(d, 0), row(d, 1))));
  CHECK(euclidean(d.point(4), d.point(4)) == 0.0);
  const std::vector<double> a{1, 2}, b{1, 2, 3};
  CHECK_THROWS_AS(euclidean(a, b), Error);
}

TEST_CASE("squared_euclidean") {
  const Dataset d = testsupport::iris();
  CHECK(squared_euclidean(d.point(0), d.point(1)) == doctest::Approx(0.29).epsilon(1e-9));
  const std::vector<double> e1{1, 0}, e2{0, 1};
  CHECK(squared_euclidean(e1, e2) == 2.0);
  CHECK(squared_euclidean(e1, e1) == 0.0);
}

TEST_CASE("manhattan and hamming on binary rows") {
  const std::vector<double> x0{1, 0, 1, 1}, x1{0, 0, 0, 1}, x2{0, 0, 1, 1};
  CHECK(manhattan(x0, x1) == 2.0);
  CHECK(manhattan(x0, x2) == 1.0);
  CHECK(manhattan(x0, x0) == 0.0);
  CHECK(hamming(x0, x1) == 2.0);
  CHECK(hamming(x0, x0) == 0.0);
  // Categories coded as integers: [a, b] vs [a, c].
  const std::vector<double> c0{0, 1}, c1{0, 2};
  CHECK(hamming(c0, c1) == 1.0);
  CHECK_THROWS_AS(hamming(x0, c0), Error);
}

TEST_CASE("pairwise on the first Iris rows") {
  const Dataset d = testsupport::iris();
  const Dataset head = make_dataset({row(d, 0), row(d, 1), row(d, 2), row(d, 3)});
  const CondensedDistanceMatrix dm = pairwise(head);
  const std::vector<double> expected{0.54, 0.51, 0.65, 0.30, 0.33, 0.24};
  REQUIRE(dm.values().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::round(dm.values()[i] * 100.0) / 100.0 == doctest::Approx(expected[i]));
  }
  CHECK(pairwise(make_dataset({{1, 1}, {1, 1}})).values() == std::vector<double>{0.0});
  CHECK(pairwise(d).values().size() == 11175);
  CHECK(CondensedDistanceMatrix::storage_size(150) == 11175);
}

TEST_CASE("pairwise entries equal direct metric calls") {
  std::mt19937_64 rng(17);
  const Matrix pts = Matrix::from_rows(testsupport::random_rows(rng, 25, 3, -2, 2));
  for (Metric metric : {Metric::Euclidean, Metric::SquaredEuclidean, Metric::Manhattan, Metric::Hamming}) {
    const CondensedDistanceMatrix dm = pairwise(pts, metric);
    for (std::size_t i = 0; i < pts.rows(); ++i) {
      CHECK(dm(i, i) == 0.0);
      for (std::size_t j = i + 1; j < pts.rows(); ++j) {
        CHECK(dm(i, j) == distance(metric, pts.row(i), pts.row(j)));
        CHECK(dm(j, i) == dm(i, j));
      }
    }
  }
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> small(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    auto rows = testsupport::random_rows(rng, 3, 4, -3, 3);
    // Coarse integer copies give Hamming something to count.
    std::vector<std::vector<double>> ints(3, std::vector<double>(4));
    for (auto& r : ints) {
      for (double& v : r) v = small(rng);
    }
    for (const auto* set : {&rows, &ints}) {
      const auto& x = (*set)[0];
      const auto& y = (*set)[1];
      const auto& z = (*set)[2];
      for (Metric metric : {Metric::Euclidean, Metric::SquaredEuclidean, Metric::Manhattan, Metric::Hamming}) {
        const double dxy = distance(metric, x, y);
        CHECK(dxy >= 0.0);
        CHECK(dxy == distance(metric, y, x));
        CHECK(distance(metric, x, x) == 0.0);
        if (metric != Metric::SquaredEuclidean) {
          CHECK(dxy <= distance(metric, x, z) + distance(metric, z, y) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("parse_metric") {
  CHECK(parse_metric("euclidean") == Metric::Euclidean);
  CHECK(parse_metric("manhattan") == Metric::Manhattan);
  CHECK_THROWS_AS(parse_metric("cosine"), Error);
}
