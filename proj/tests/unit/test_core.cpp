#include <doctest.h>

#include <random>

#include "clusterkit/core.hpp"
#include "support.hpp"

using namespace clusterkit;

TEST_CASE("make_dataset builds the first Iris rows") {
  const Dataset d = make_dataset({{5.1, 3.5, 1.4, 0.2}, {4.9, 3.0, 1.4, 0.2}, {4.7, 3.2, 1.3, 0.2},
                                  {4.6, 3.1, 1.5, 0.2}},
                                 {"sepal_length", "sepal_width", "petal_length", "petal_width"},
                                 std::vector<int>{1, 1, 1, 1});
  CHECK(d.n() == 4);
  CHECK(d.m() == 4);
  CHECK(d.points()(2, 0) == doctest::Approx(4.7));
  CHECK(d.has_labels());
}

TEST_CASE("make_dataset minimal and malformed input") {
  const Dataset one = make_dataset({{0.0}});
  CHECK(one.n() == 1);
  CHECK(one.m() == 1);
  CHECK(one.feature_names() == std::vector<std::string>{"f0"});

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
  };
  CHECK(code_of([] { make_dataset({{1, 2, 3, 4}, {1, 2, 3}}); }) == ErrorCode::RaggedRows);
  CHECK(code_of([] { make_dataset({{1, std::nan("")}}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { make_dataset({{1, INFINITY}}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { make_dataset({{1}, {2}}, {}, std::vector<int>{1}); }) ==
        ErrorCode::LabelLengthMismatch);
}

TEST_CASE("canonicalize_labels") {
  CHECK(canonicalize_labels(LabelVector({5, 5, 9, 0})).values() == std::vector<int>{1, 1, 2, 0});
  CHECK(canonicalize_labels(LabelVector({1, 2})).values() == std::vector<int>{1, 2});
  CHECK(canonicalize_labels(LabelVector({2, 1})).values() == std::vector<int>{1, 2});
  CHECK(canonicalize_labels(LabelVector({0, 0, 0})).values() == std::vector<int>{0, 0, 0});
  CHECK(canonicalize_labels(LabelVector({3, 7, 7, 3, 3})).values() ==
        std::vector<int>{1, 2, 2, 1, 1});
  CHECK_THROWS_AS(LabelVector({-1}), Error);
}

TEST_CASE("canonicalize_labels is idempotent and keeps the partition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = testsupport::random_labels(rng, 25, 6, true);
    const LabelVector once = canonicalize_labels(LabelVector(raw));
    CHECK(canonicalize_labels(once) == once);
    CHECK(testsupport::same_partition(raw, once.values()));
    // Sizes are non-increasing in label order.
    std::vector<std::size_t> sizes(once.n_clusters() + 1, 0);
    for (int v : once) ++sizes[static_cast<std::size_t>(v)];
    for (std::size_t c = 2; c < sizes.size(); ++c) CHECK(sizes[c - 1] >= sizes[c]);
  }
}

TEST_CASE("LabelVector counts") {
  const LabelVector l({0, 1, 2, 2, 0, 3});
  CHECK(l.n_clusters() == 3);
  CHECK(l.noise_count() == 2);
}

TEST_CASE("match_percentage small cases") {
  CHECK(match_percentage(LabelVector({1, 1, 2, 2}), std::vector<int>{2, 2, 1, 1}) == 1.0);
  CHECK(match_percentage(LabelVector({1, 1, 1, 1}), std::vector<int>{1, 1, 2, 2}) == 0.5);
  // Noise counts as a miss unless ignored.
  CHECK(match_percentage(LabelVector({1, 1, 0, 2}), std::vector<int>{1, 1, 2, 2}) == 0.75);
  CHECK(match_percentage(LabelVector({1, 1, 0, 2}), std::vector<int>{1, 1, 2, 2}, true) == 1.0);
  // More clusters than classes: one cluster stays unmapped.
  CHECK(match_percentage(LabelVector({1, 2, 3}), std::vector<int>{1, 1, 2}) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(match_percentage(LabelVector({0, 0}), std::vector<int>{1, 1}, true) == 0.0);
  CHECK_THROWS_AS(match_percentage(LabelVector({1, 2}), std::vector<int>{1}), Error);
}

TEST_CASE("match_percentage rejects too many clusters") {
  std::vector<int> pred(13);
  std::iota(pred.begin(), pred.end(), 1);
  try {
    match_percentage(LabelVector(pred), std::vector<int>(13, 1));
    FAIL("expected TooManyClustersForExactMatching");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyClustersForExactMatching);
  }
}

TEST_CASE("match_percentage agrees with the permutation oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const auto pred = testsupport::random_labels(rng, 20, 4, true);
    const auto truth = testsupport::random_labels(rng, 20, 3);
    for (bool ignore : {false, true}) {
      CHECK(match_percentage(LabelVector(pred), truth, ignore) ==
            doctest::Approx(testsupport::brute_force_match(pred, truth, ignore)));
    }
    // Relabeling either side changes nothing.
    std::vector<int> shifted = truth;
    for (int& v : shifted) v = 10 - v;
    CHECK(match_percentage(LabelVector(pred), shifted) ==
          doctest::Approx(match_percentage(LabelVector(pred), truth)));
  }
}

TEST_CASE("match_percentage identity on Iris classes") {
  const Dataset d = testsupport::iris();
  CHECK(match_percentage(LabelVector(*d.true_labels()), *d.true_labels()) == 1.0);
}

TEST_CASE("Matrix helpers") {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(m.column(1) == std::vector<double>{2, 4});
  CHECK(Matrix::identity(2) == Matrix::from_rows({{1, 0}, {0, 1}}));
}

TEST_CASE("error codes classify config versus data problems") {
  CHECK(is_config_error(ErrorCode::UnknownMethod));
  CHECK(is_config_error(ErrorCode::NegativeRadius));
  CHECK_FALSE(is_config_error(ErrorCode::ParseError));
  CHECK_FALSE(is_config_error(ErrorCode::NonFiniteValue));
  CHECK(to_string(ErrorCode::KOutOfRange) == "KOutOfRange");
}
