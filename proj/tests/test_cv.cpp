#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fselect/cv.hpp"
#include "fselect/synthetic.hpp"
#include "support/testutil.hpp"

using namespace fselect;
using testutil::Rng;

namespace {

DiscreteDataset two_class_rows(Index rows) {
  Rng rng(1);
  return testutil::random_dataset(rng, rows, 2, 3, 2);
}

// training rows = everything outside the fold
std::vector<Index> train_of(const FoldPlan& plan, std::size_t fold, Index rows) {
  std::vector<bool> in_fold(static_cast<std::size_t>(rows), false);
  for (const Index i : plan.folds[fold]) in_fold[static_cast<std::size_t>(i)] = true;
  std::vector<Index> train;
  for (Index i = 0; i < rows; ++i)
    if (!in_fold[static_cast<std::size_t>(i)]) train.push_back(i);
  return train;
}

}  // namespace

TEST_SUITE("cv") {

TEST_CASE("fold sizes") {
  SUBCASE("even split") {
    const auto data = two_class_rows(10);
    const auto plan = make_folds(data, 5, 42, false);
    REQUIRE(plan.folds.size() == 5);
    for (const auto& fold : plan.folds) CHECK(fold.size() == 2);
  }
  SUBCASE("remainder distribution") {
    const auto data = two_class_rows(10);
    const auto plan = make_folds(data, 3, 42, false);
    std::vector<std::size_t> sizes;
    for (const auto& fold : plan.folds) sizes.push_back(fold.size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{3, 3, 4});
  }
}

TEST_CASE("stratified folds hold per-class balance") {
  DiscreteDataset data;
  data.codes = CodeMatrix::Zero(12, 1);
  for (Index i = 0; i < 12; ++i) data.codes(i, 0) = static_cast<std::int32_t>(i % 2);
  data.cards.resize(1);
  data.cards[0] = 2;
  data.label_codes.resize(12);
  for (Index i = 0; i < 12; ++i) data.label_codes[i] = i < 6 ? 0 : 1;
  data.class_count = 2;
  data.feature_names = {"f0"};
  data.class_names = {"c0", "c1"};

  const auto plan = make_folds(data, 3, 7, true);
  CHECK(plan.stratified);
  for (const auto& fold : plan.folds) {
    int class0 = 0;
    int class1 = 0;
    for (const Index i : fold) (data.label_codes[i] == 0 ? class0 : class1)++;
    CHECK(class0 == 2);
    CHECK(class1 == 2);
  }
}

TEST_CASE("folds partition the rows for random shapes") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Index rows = 5 + rng.uniform(120);
    const int k_folds = 2 + static_cast<int>(rng.uniform(std::min<Index>(rows, 8) - 1));
    const bool stratified = rng.uniform(2) == 0;
    const auto data = testutil::random_dataset(rng, rows, 2, 3, 2 + rng.uniform(3));
    const auto plan = make_folds(data, k_folds, rng.next(), stratified);

    std::vector<int> seen(static_cast<std::size_t>(rows), 0);
    std::size_t total = 0;
    std::size_t smallest = static_cast<std::size_t>(rows);
    std::size_t largest = 0;
    for (const auto& fold : plan.folds) {
      total += fold.size();
      smallest = std::min(smallest, fold.size());
      largest = std::max(largest, fold.size());
      for (const Index i : fold) {
        REQUIRE(i >= 0);
        REQUIRE(i < rows);
        ++seen[static_cast<std::size_t>(i)];
      }
    }
    CHECK(total == static_cast<std::size_t>(rows));
    CHECK(*std::max_element(seen.begin(), seen.end()) == 1);
    CHECK(*std::min_element(seen.begin(), seen.end()) == 1);
    if (!plan.stratified) CHECK(largest - smallest <= 1);
  }
}

TEST_CASE("stratification falls back when a class is too small") {
  DiscreteDataset data;
  data.codes = CodeMatrix::Zero(8, 1);
  for (Index i = 0; i < 8; ++i) data.codes(i, 0) = static_cast<std::int32_t>(i % 2);
  data.cards.resize(1);
  data.cards[0] = 2;
  data.label_codes.resize(8);
  for (Index i = 0; i < 8; ++i) data.label_codes[i] = i < 6 ? 0 : 1;  // class 1 has 2 members
  data.class_count = 2;
  data.feature_names = {"f0"};
  data.class_names = {"c0", "c1"};

  const auto plan = make_folds(data, 4, 42, true);
  CHECK_FALSE(plan.stratified);
  REQUIRE(plan.warnings.size() == 1);
  CHECK(plan.warnings[0].find("stratification disabled") != std::string::npos);
}

TEST_CASE("make_folds validates") {
  const auto data = two_class_rows(6);
  CHECK_THROWS_AS(make_folds(data, 1, 42, false), ConfigError);
  CHECK_THROWS_AS(make_folds(data, 7, 42, false), ConfigError);
}

TEST_CASE("naive Bayes separates separable data") {
  // feature value equals the class in training; same in test
  DiscreteDataset data;
  data.codes.resize(12, 1);
  data.label_codes.resize(12);
  for (Index i = 0; i < 12; ++i) {
    data.label_codes[i] = static_cast<std::int32_t>(i % 2);
    data.codes(i, 0) = data.label_codes[i];
  }
  data.cards.resize(1);
  data.cards[0] = 2;
  data.class_count = 2;
  data.feature_names = {"f0"};
  data.class_names = {"c0", "c1"};

  const std::vector<Index> train{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<Index> test{8, 9, 10, 11};
  const std::vector<Index> features{0};
  CHECK(nb_classify(train, test, features, data) == 1.0);
}

TEST_CASE("constant feature predicts the prior argmax") {
  DiscreteDataset data;
  data.codes = CodeMatrix::Zero(10, 1);
  data.cards.resize(1);
  data.cards[0] = 1;
  data.label_codes.resize(10);
  // balanced training -> equal priors -> tie -> lowest class code 0
  for (Index i = 0; i < 8; ++i) data.label_codes[i] = static_cast<std::int32_t>(i % 2);
  data.label_codes[8] = 0;
  data.label_codes[9] = 1;
  data.class_count = 2;
  data.feature_names = {"f0"};
  data.class_names = {"c0", "c1"};

  const std::vector<Index> train{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<Index> features{0};
  const std::vector<Index> test{8, 9};
  // exactly the class-0 fraction of the test set
  CHECK(nb_classify(train, test, features, data) == 0.5);
}

TEST_CASE("smoothing flips the unsmoothed decision on the 8-row example") {
  // train: one class-0 row with f=1; five class-1 rows, exactly one with f=1.
  // unsmoothed posteriors for f=1 tie at 1/6 (tie -> class 0); add-one
  // smoothing gives 2/8*2/3 = 1/6 vs 6/8*2/7 = 3/14, so class 1 wins.
  DiscreteDataset data;
  data.codes.resize(8, 1);
  data.label_codes.resize(8);
  const std::int32_t feature[8] = {1, 1, 0, 0, 0, 0, 1, 0};
  const std::int32_t label[8] = {0, 1, 1, 1, 1, 1, 1, 1};
  for (Index i = 0; i < 8; ++i) {
    data.codes(i, 0) = feature[i];
    data.label_codes[i] = label[i];
  }
  data.cards.resize(1);
  data.cards[0] = 2;
  data.class_count = 2;
  data.feature_names = {"f0"};
  data.class_names = {"c0", "c1"};

  const std::vector<Index> train{0, 1, 2, 3, 4, 5};
  const std::vector<Index> features{0};
  // test rows 6 (f=1, class 1) and 7 (f=0, class 1): both predicted class 1
  const std::vector<Index> test{6, 7};
  CHECK(nb_classify(train, test, features, data) == 1.0);
  // flipping the true label of the f=1 test row shows the prediction really
  // is class 1, not a tie-break to class 0
  DiscreteDataset relabeled = data;
  relabeled.label_codes[6] = 0;
  const std::vector<Index> flip_test{6};
  CHECK(nb_classify(train, flip_test, features, relabeled) == 0.0);
}

TEST_CASE("nb_classify validates") {
  const auto data = two_class_rows(6);
  const std::vector<Index> rows{0, 1, 2};
  const std::vector<Index> none{};
  CHECK_THROWS_AS(nb_classify(none, rows, rows, data), ConfigError);
  CHECK_THROWS_AS(nb_classify(rows, rows, none, data), ConfigError);
}

TEST_CASE("planted informative feature keeps best_k small") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.rows = 400;
    spec.features = 8;
    spec.classes = 2;
    spec.informative = 1;
    spec.card = 4;
    spec.noise = 0.1;
    spec.seed = seed;
    const auto data = make_synthetic(spec);
    ParallelEngine engine({2, 4});
    const auto report = select(data, {ObjectiveKind::mmaiq, 1.0}, 8, engine);
    CvOptions options;
    options.folds = 5;
    options.seed = seed;
    const auto curve = cv_curve(data, report, options, engine);
    CHECK(curve.accuracy.minCoeff() >= 0.0);
    CHECK(curve.accuracy.maxCoeff() <= 1.0);
    if (curve.best_k <= 3) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("cv_curve deterministic across worker counts") {
  Rng rng(29);
  const auto data = testutil::random_dataset(rng, 80, 6, 4, 3);
  CvOptions options;
  options.folds = 4;
  options.seed = 11;

  CvCurve baseline;
  for (const int workers : {1, 2, 4}) {
    ParallelEngine engine({workers, 0});
    const auto report = select(data, {ObjectiveKind::mmais, 1.0}, 6, engine);
    const auto curve = cv_curve(data, report, options, engine);
    if (workers == 1) {
      baseline = curve;
      continue;
    }
    CHECK(curve.best_k == baseline.best_k);
    REQUIRE(curve.accuracy.size() == baseline.accuracy.size());
    for (Index k = 0; k < curve.accuracy.size(); ++k)
      CHECK(curve.accuracy[k] == baseline.accuracy[k]);
    for (Index f = 0; f < curve.fold_accuracies.rows(); ++f)
      for (Index k = 0; k < curve.fold_accuracies.cols(); ++k)
        CHECK(curve.fold_accuracies(f, k) == baseline.fold_accuracies(f, k));
  }
}

TEST_CASE("fold accuracy means reproduce the curve exactly") {
  Rng rng(37);
  const auto data = testutil::random_dataset(rng, 60, 5, 4, 2);
  ParallelEngine engine({2, 8});
  const auto report = select(data, {ObjectiveKind::mmaiq, 1.0}, 5, engine);
  CvOptions options;
  const auto curve = cv_curve(data, report, options, engine);
  REQUIRE(curve.fold_accuracies.rows() == 5);
  for (Index k = 0; k < curve.accuracy.size(); ++k) {
    const double mean = curve.fold_accuracies.col(k).mean();
    CHECK(curve.accuracy[k] == mean);
    CHECK(curve.accuracy[k] >= 0.0);
    CHECK(curve.accuracy[k] <= 1.0);
  }
  CHECK(curve.best_k >= 1);
  CHECK(curve.accuracy[curve.best_k - 1] == curve.accuracy.maxCoeff());
}

TEST_CASE("reselect mode re-ranks per fold and stays deterministic") {
  Rng rng(43);
  const auto data = testutil::random_dataset(rng, 60, 5, 4, 2);
  ParallelEngine engine({2, 0});
  const auto report = select(data, {ObjectiveKind::mmaiq, 1.0}, 4, engine);
  CvOptions options;
  options.folds = 3;
  options.reselect = true;
  const auto first = cv_curve(data, report, options, engine);
  const auto second = cv_curve(data, report, options, engine);
  CHECK(first.best_k == second.best_k);
  for (Index k = 0; k < first.accuracy.size(); ++k)
    CHECK(first.accuracy[k] == second.accuracy[k]);
}

}  // TEST_SUITE
