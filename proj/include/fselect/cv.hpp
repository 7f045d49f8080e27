#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fselect/dataset.hpp"
#include "fselect/parallel.hpp"
#include "fselect/selector.hpp"
#include "fselect/types.hpp"

namespace fselect {

struct FoldPlan {
  std::vector<std::vector<Index>> folds;  // disjoint, union = [0, r)
  std::uint64_t seed = 0;
  bool stratified = false;                // what was actually applied
  std::vector<std::string> warnings;
};

/// Deterministic K-fold partition: Fisher-Yates shuffle by seed, then
/// round-robin assignment (within each class when stratified). Falls back to
/// an unstratified split with a warning when some class has fewer than K
/// members.
FoldPlan make_folds(const DiscreteDataset& data, int k_folds, std::uint64_t seed,
                    bool stratified);

/// Multinomial naive Bayes on category codes with add-one smoothing:
/// priors (count_c + 1) / (n_train + C), per-feature conditionals
/// (count_{c,f,code} + 1) / (count_c + card_f). Ties break to the lowest
/// class code. Returns the fraction of test rows predicted correctly.
double nb_classify(std::span<const Index> train, std::span<const Index> test,
                   std::span<const Index> features, const DiscreteDataset& data);

struct CvOptions {
  int folds = 5;
  std::uint64_t seed = 42;
  bool stratified = true;
  /// Re-run feature selection inside each training fold instead of reusing
  /// the full-data ranking. Slower but avoids selection bias.
  bool reselect = false;
};

struct CvCurve {
  Eigen::VectorXd accuracy;        // index k-1 -> mean accuracy at prefix size k
  Eigen::MatrixXd fold_accuracies; // folds x k_max
  Index best_k = 0;                // argmax of accuracy, ties to smallest k
  std::vector<std::string> warnings;
};

/// Classification rate as a function of ranking-prefix size.
///
/// The ranking comes in precomputed on the full dataset; only the classifier
/// is cross-validated (the reselect option re-ranks per training fold
/// instead). All fold-by-prefix cells are independent tasks dispatched
/// through the engine; the curve is deterministic given (data, ranking,
/// folds, seed) for any worker count.
CvCurve cv_curve(const DiscreteDataset& data, const SelectionReport& ranking,
                 const CvOptions& options, ParallelEngine& engine);

}  // namespace fselect
