#include "fselect/selector.hpp"

#include <algorithm>
#include <numeric>

namespace fselect {

double step_score(const Objective& objective, double relevance_j,
                  double red_sum_j, Index p) {
  if (p < 2) throw ConfigError("step_score: p must be >= 2");
  if (red_sum_j < 0.0) throw ConfigError("step_score: negative redundancy sum");
  const double mean_redundancy = red_sum_j / static_cast<double>(p - 1);
  if (objective.kind == ObjectiveKind::mmais)
    return relevance_j - objective.lambda * mean_redundancy;
  return relevance_j / std::max(mean_redundancy, kRedundancyFloor);
}

Eigen::VectorXd relevance_vector(const DiscreteDataset& data, ParallelEngine& engine) {
  TaskBatch batch;
  batch.candidates.resize(static_cast<std::size_t>(data.feature_count()));
  std::iota(batch.candidates.begin(), batch.candidates.end(), Index{0});
  batch.partner_feature = std::nullopt;

  const auto values = par_fold(batch, data, engine);
  Eigen::VectorXd relevance(data.feature_count());
  for (Index j = 0; j < data.feature_count(); ++j)
    relevance[j] = values[static_cast<std::size_t>(j)].v;
  return relevance;
}

SelectionState begin_selection(const DiscreteDataset& data, ParallelEngine& engine) {
  const Index m = data.feature_count();
  SelectionState state;
  state.relevance = relevance_vector(data, engine);
  state.red_sum = Eigen::VectorXd::Zero(m);
  state.selected_mask.assign(static_cast<std::size_t>(m), false);
  state.rankable.resize(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    state.rankable[static_cast<std::size_t>(j)] = data.cards[j] > 1;
    if (data.cards[j] > 1) ++state.rankable_count;
  }
  return state;
}

StepOutcome selection_step(SelectionState& state, const DiscreteDataset& data,
                           const Objective& objective, ParallelEngine& engine) {
  const Index m = data.feature_count();
  const Index p = state.p();
  StepOutcome outcome;

  if (p == 1) {
    Index best = -1;
    for (Index j = 0; j < m; ++j) {
      if (!state.rankable[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || state.relevance[j] > state.relevance[best]) best = j;
    }
    if (best < 0) return outcome;
    outcome.feature = best;
    outcome.score = state.relevance[best];
  } else {
    // Every unselected feature is tested against the last selected one; the
    // sums for constant features stay 0 and they never win the argmax.
    TaskBatch batch;
    batch.candidates.reserve(static_cast<std::size_t>(m - p + 1));
    for (Index j = 0; j < m; ++j)
      if (!state.selected_mask[static_cast<std::size_t>(j)])
        batch.candidates.push_back(j);
    batch.partner_feature = state.selected.back();

    outcome.candidate_values = par_fold(batch, data, engine);
    for (std::size_t i = 0; i < batch.candidates.size(); ++i)
      state.red_sum[batch.candidates[i]] += outcome.candidate_values[i].v;

    Index best = -1;
    double best_score = 0.0;
    for (const Index j : batch.candidates) {
      if (!state.rankable[static_cast<std::size_t>(j)]) continue;
      const double score = step_score(objective, state.relevance[j],
                                      state.red_sum[j], p);
      if (best < 0 || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    outcome.candidates = std::move(batch.candidates);
    if (best < 0) return outcome;
    outcome.feature = best;
    outcome.score = best_score;
    outcome.mean_redundancy = state.red_sum[best] / static_cast<double>(p - 1);
  }

  state.selected_mask[static_cast<std::size_t>(outcome.feature)] = true;
  state.selected.push_back(outcome.feature);
  return outcome;
}

SelectionReport select(const DiscreteDataset& data, const Objective& objective,
                       Index k, ParallelEngine& engine) {
  const Index m = data.feature_count();
  if (k < 1 || k > m) throw ConfigError("select: k must be in [1, m]");
  if (objective.lambda <= 0.0) throw ConfigError("select: lambda must be > 0");

  SelectionReport report;
  report.objective = objective;
  report.k_requested = k;
  report.warnings = data.warnings;

  const std::uint64_t calls_before = engine.cvtest_calls();
  SelectionState state = begin_selection(data, engine);

  const Index k_effective = std::min(k, state.rankable_count);
  if (k_effective < k) {
    report.warnings.push_back(
        "ranking truncated to " + std::to_string(k_effective) + " of " +
        std::to_string(k) + " requested features (constant features cannot be ranked)");
  }

  // Column p-2 holds V(candidate, feature selected at step p-1), kept so the
  // ranked prefix's pairwise block can be emitted without re-testing.
  Eigen::MatrixXd step_v =
      Eigen::MatrixXd::Zero(m, std::max<Index>(k_effective - 1, 0));

  for (Index p = 1; p <= k_effective; ++p) {
    const StepOutcome outcome = selection_step(state, data, objective, engine);
    if (p >= 2) {
      for (std::size_t i = 0; i < outcome.candidates.size(); ++i)
        step_v(outcome.candidates[i], p - 2) = outcome.candidate_values[i].v;
    }
    RankedFeature entry;
    entry.feature_index = outcome.feature;
    entry.feature_name = data.feature_names[static_cast<std::size_t>(outcome.feature)];
    entry.score = outcome.score;
    entry.relevance = state.relevance[outcome.feature];
    entry.mean_redundancy = outcome.mean_redundancy;
    report.ranking.push_back(std::move(entry));
  }

  report.pairwise_v = Eigen::MatrixXd::Identity(k_effective, k_effective);
  for (Index b = 0; b < k_effective; ++b) {
    for (Index a = 0; a < b; ++a) {
      const double v = step_v(state.selected[static_cast<std::size_t>(b)], a);
      report.pairwise_v(a, b) = v;
      report.pairwise_v(b, a) = v;
    }
  }
  report.cvtest_calls = engine.cvtest_calls() - calls_before;
  return report;
}

std::vector<ScorePoint> score_curve(const SelectionReport& report) {
  if (report.ranking.empty())
    throw ConfigError("score_curve: empty ranking");
  std::vector<ScorePoint> curve;
  curve.reserve(report.ranking.size());
  double relevance_sum = 0.0;
  for (Index k = 1; k <= static_cast<Index>(report.ranking.size()); ++k) {
    relevance_sum += report.ranking[static_cast<std::size_t>(k - 1)].relevance;
    ScorePoint point;
    point.k = k;
    point.association = relevance_sum / static_cast<double>(k);
    point.redundancy =
        report.pairwise_v.topLeftCorner(k, k).sum() / static_cast<double>(k * k);
    curve.push_back(point);
  }
  return curve;
}

}  // namespace fselect
