#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fselect/dataset.hpp"
#include "fselect/parallel.hpp"
#include "fselect/types.hpp"

namespace fselect {

enum class ObjectiveKind { mmaiq, mmais };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::mmaiq;
  double lambda = 1.0;  // used by mmais only
};

/// Floor on mean redundancy in the quotient objective. A candidate with no
/// association to anything selected scores relevance / this floor, which
/// outranks every finite-redundancy candidate; among several such candidates
/// the ordering degenerates to plain relevance.
inline constexpr double kRedundancyFloor = 1e-12;

/// Score of candidate j at step p (p >= 2), given its relevance and the
/// accumulated sum of V(x_j, x_i) over the selected prefix.
/// mmais: relevance - lambda * mean_redundancy.
/// mmaiq: relevance / max(mean_redundancy, floor); lambda drops out because
/// scaling every candidate's denominator uniformly cannot change the argmax.
double step_score(const Objective& objective, double relevance_j,
                  double red_sum_j, Index p);

/// Incremental greedy search state. red_sum[j] accumulates one V(x_j, x_i)
/// term per step, so a full sweep costs one association test per remaining
/// candidate instead of |selected|. Entries for already-selected features are
/// frozen and never read again.
struct SelectionState {
  std::vector<Index> selected;       // selection order
  std::vector<bool> selected_mask;   // length m
  std::vector<bool> rankable;        // length m; false for constant features
  Eigen::VectorXd relevance;         // V(feature, labels)
  Eigen::VectorXd red_sum;           // sum of V(feature, selected)
  Index rankable_count = 0;

  Index p() const { return static_cast<Index>(selected.size()) + 1; }
};

/// Outcome of one greedy step, including the per-candidate association
/// values so callers can keep pairwise bookkeeping without re-testing.
struct StepOutcome {
  Index feature = -1;  // -1 when no rankable candidate remains
  double score = 0.0;
  double mean_redundancy = 0.0;
  std::vector<Index> candidates;               // empty at step 1
  std::vector<AssociationValue> candidate_values;
};

/// Computes the relevance vector (one engine batch) and an empty prefix.
SelectionState begin_selection(const DiscreteDataset& data, ParallelEngine& engine);

/// Performs step p: at p == 1 takes the relevance argmax; at p >= 2 tests
/// every unselected feature against the last-selected one through the
/// engine, folds the values into red_sum, and takes the step_score argmax
/// over non-constant candidates. Ties break to the lowest feature index.
StepOutcome selection_step(SelectionState& state, const DiscreteDataset& data,
                           const Objective& objective, ParallelEngine& engine);

/// V(feature i, labels) for every feature, evaluated through the engine as
/// one batch of independent tasks.
Eigen::VectorXd relevance_vector(const DiscreteDataset& data, ParallelEngine& engine);

struct RankedFeature {
  Index feature_index = 0;
  std::string feature_name;
  double score = 0.0;            // winning step score (relevance at step 1)
  double relevance = 0.0;        // V(feature, labels)
  double mean_redundancy = 0.0;  // red_sum / (p - 1), 0 at step 1
};

struct SelectionReport {
  std::vector<RankedFeature> ranking;
  Objective objective;
  Index k_requested = 0;
  std::vector<std::string> warnings;
  /// Pairwise V among the ranked features (diagonal 1), captured during the
  /// greedy sweep; lets score_curve run without extra association tests.
  Eigen::MatrixXd pairwise_v;
  /// cvtest evaluations spent by this select call (engine instrumentation).
  std::uint64_t cvtest_calls = 0;
};

/// Greedy forward ranking of k features. Constant (card-1) features are
/// never ranked; if fewer than k non-constant features exist the ranking
/// truncates with a warning. Deterministic for any engine configuration.
SelectionReport select(const DiscreteDataset& data, const Objective& objective,
                       Index k, ParallelEngine& engine);

struct ScorePoint {
  Index k = 0;
  double association = 0.0;  // mean V(feature, labels) over the prefix
  double redundancy = 0.0;   // mean pairwise V over the prefix, diagonal included
};

/// Cumulative association/redundancy diagnostics for every prefix of the
/// ranking.
std::vector<ScorePoint> score_curve(const SelectionReport& report);

}  // namespace fselect
