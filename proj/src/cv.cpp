#include "fselect/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fselect {

namespace {

// Seeded Fisher-Yates with explicit modulo draws; std::shuffle's draw
// sequence is implementation-defined, this one is not.
void deterministic_shuffle(std::vector<Index>& order, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (Index i = static_cast<Index>(order.size()) - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
}

}  // namespace

FoldPlan make_folds(const DiscreteDataset& data, int k_folds, std::uint64_t seed,
                    bool stratified) {
  const Index r = data.rows();
  if (k_folds < 2) throw ConfigError("make_folds: need at least 2 folds");
  if (static_cast<Index>(k_folds) > r)
    throw ConfigError("make_folds: more folds than rows");

  FoldPlan plan;
  plan.seed = seed;
  plan.folds.assign(static_cast<std::size_t>(k_folds), {});

  std::vector<Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), Index{0});
  deterministic_shuffle(order, seed);

  bool apply_stratified = stratified;
  if (stratified) {
    Eigen::VectorXi class_sizes = Eigen::VectorXi::Zero(data.class_count);
    for (Index i = 0; i < r; ++i) ++class_sizes[data.label_codes[i]];
    if (class_sizes.minCoeff() < k_folds) {
      apply_stratified = false;
      plan.warnings.push_back(
          "stratification disabled: some class has fewer than " +
          std::to_string(k_folds) + " members");
    }
  }
  plan.stratified = apply_stratified;

  if (apply_stratified) {
    for (std::int32_t c = 0; c < data.class_count; ++c) {
      Index position = 0;
      for (const Index row : order) {
        if (data.label_codes[row] != c) continue;
        plan.folds[static_cast<std::size_t>(position % k_folds)].push_back(row);
        ++position;
      }
    }
  } else {
    for (std::size_t i = 0; i < order.size(); ++i)
      plan.folds[i % static_cast<std::size_t>(k_folds)].push_back(order[i]);
  }
  return plan;
}

double nb_classify(std::span<const Index> train, std::span<const Index> test,
                   std::span<const Index> features, const DiscreteDataset& data) {
  if (features.empty()) throw ConfigError("nb_classify: no features given");
  if (train.empty()) throw ConfigError("nb_classify: empty training set");
  if (test.empty()) throw ConfigError("nb_classify: empty test set");

  const auto classes = static_cast<Index>(data.class_count);
  Eigen::VectorXd class_counts = Eigen::VectorXd::Zero(classes);
  for (const Index row : train) class_counts[data.label_codes[row]] += 1.0;

  const double n_train = static_cast<double>(train.size());
  const Eigen::VectorXd log_prior =
      ((class_counts.array() + 1.0) / (n_train + static_cast<double>(classes)))
          .log()
          .matrix();

  // Per-feature smoothed log conditionals, classes x card.
  std::vector<Eigen::MatrixXd> log_cond;
  log_cond.reserve(features.size());
  for (const Index f : features) {
    const Index card = data.cards[f];
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(classes, card);
    for (const Index row : train)
      counts(data.label_codes[row], data.codes(row, f)) += 1.0;
    for (Index c = 0; c < classes; ++c) {
      counts.row(c) = ((counts.row(c).array() + 1.0) /
                       (class_counts[c] + static_cast<double>(card)))
                          .log();
    }
    log_cond.push_back(std::move(counts));
  }

  Index correct = 0;
  Eigen::VectorXd posterior(classes);
  for (const Index row : test) {
    posterior = log_prior;
    for (std::size_t fi = 0; fi < features.size(); ++fi)
      posterior += log_cond[fi].col(data.codes(row, features[fi]));
    Index best = 0;
    for (Index c = 1; c < classes; ++c)
      if (posterior[c] > posterior[best]) best = c;
    if (best == data.label_codes[row]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

CvCurve cv_curve(const DiscreteDataset& data, const SelectionReport& ranking,
                 const CvOptions& options, ParallelEngine& engine) {
  if (ranking.ranking.empty()) throw ConfigError("cv_curve: empty ranking");

  const auto k_max = static_cast<Index>(ranking.ranking.size());
  FoldPlan plan = make_folds(data, options.folds, options.seed, options.stratified);
  const auto folds = static_cast<Index>(plan.folds.size());

  CvCurve curve;
  curve.warnings = plan.warnings;
  curve.fold_accuracies.resize(folds, k_max);

  std::vector<std::vector<Index>> train_rows(static_cast<std::size_t>(folds));
  for (Index f = 0; f < folds; ++f) {
    auto& rows = train_rows[static_cast<std::size_t>(f)];
    rows.reserve(static_cast<std::size_t>(data.rows()) -
                 plan.folds[static_cast<std::size_t>(f)].size());
    for (Index g = 0; g < folds; ++g) {
      if (g == f) continue;
      const auto& fold = plan.folds[static_cast<std::size_t>(g)];
      rows.insert(rows.end(), fold.begin(), fold.end());
    }
  }

  // One ranked feature list per fold; all folds share the precomputed
  // ranking unless reselection is requested.
  std::vector<std::vector<Index>> fold_features(static_cast<std::size_t>(folds));
  std::vector<Index> shared_features;
  shared_features.reserve(static_cast<std::size_t>(k_max));
  for (const auto& entry : ranking.ranking)
    shared_features.push_back(entry.feature_index);

  if (options.reselect) {
    // Selection re-runs serially per fold; the engine allows one
    // coordinating thread at a time.
    bool truncated = false;
    for (Index f = 0; f < folds; ++f) {
      const DiscreteDataset sub = subset_rows(data, train_rows[static_cast<std::size_t>(f)]);
      const SelectionReport fold_report =
          select(sub, ranking.objective, k_max, engine);
      auto& features = fold_features[static_cast<std::size_t>(f)];
      for (const auto& entry : fold_report.ranking)
        features.push_back(entry.feature_index);
      if (static_cast<Index>(features.size()) < k_max) truncated = true;
    }
    if (truncated) {
      curve.warnings.push_back(
          "reselection produced fewer rankable features in some folds; "
          "longer prefixes reuse the full fold ranking");
    }
  } else {
    for (Index f = 0; f < folds; ++f)
      fold_features[static_cast<std::size_t>(f)] = shared_features;
  }

  engine.for_blocks(folds * k_max, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      const Index f = static_cast<Index>(t) / k_max;
      const Index k = static_cast<Index>(t) % k_max + 1;
      const auto& features = fold_features[static_cast<std::size_t>(f)];
      const auto prefix = static_cast<std::size_t>(
          std::min<Index>(k, static_cast<Index>(features.size())));
      curve.fold_accuracies(f, k - 1) =
          nb_classify(train_rows[static_cast<std::size_t>(f)],
                      plan.folds[static_cast<std::size_t>(f)],
                      std::span<const Index>(features.data(), prefix), data);
    }
  });

  curve.accuracy = curve.fold_accuracies.colwise().mean();
  curve.best_k = 1;
  for (Index k = 2; k <= k_max; ++k)
    if (curve.accuracy[k - 1] > curve.accuracy[curve.best_k - 1]) curve.best_k = k;
  return curve;
}

}  // namespace fselect
