#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fselect/dataset.hpp"
#include "fselect/types.hpp"

namespace fselect {

/// Cross-tabulation of two categorical variables with marginals.
struct ContingencyTable {
  CountMatrix counts;          // rows: categories of x, cols: categories of y
  CountVector row_marginals;
  CountVector col_marginals;
  std::int64_t n = 0;

  Index rows() const { return counts.rows(); }
  Index cols() const { return counts.cols(); }
};

struct AssociationValue {
  double v = 0.0;     // Cramer's V in [0, 1]
  double chi2 = 0.0;
  int effective_rows = 0;  // categories with nonzero marginal
  int effective_cols = 0;
};

/// Builds the contingency table of two code columns in one counting pass.
/// Pure function of the multiset of (x, y) pairs.
template <typename DerivedX, typename DerivedY>
ContingencyTable gen_ct(const Eigen::MatrixBase<DerivedX>& x,
                        const Eigen::MatrixBase<DerivedY>& y,
                        Index card_x, Index card_y) {
  if (x.size() != y.size())
    throw std::invalid_argument("gen_ct: column length mismatch");
  if (x.size() < 1)
    throw std::invalid_argument("gen_ct: empty columns");
  if (card_x < 1 || card_y < 1)
    throw std::invalid_argument("gen_ct: cardinalities must be positive");

  ContingencyTable table;
  table.counts = CountMatrix::Zero(card_x, card_y);
  for (Index i = 0; i < x.size(); ++i) {
    const auto a = x(i);
    const auto b = y(i);
    if (a < 0 || a >= card_x || b < 0 || b >= card_y)
      throw std::out_of_range("gen_ct: code out of range");
    ++table.counts(a, b);
  }
  table.row_marginals = table.counts.rowwise().sum();
  table.col_marginals = table.counts.colwise().sum().transpose();
  table.n = static_cast<std::int64_t>(x.size());
  return table;
}

/// Pearson chi-square over cells with positive expected count.
/// Zero-marginal rows/columns contribute nothing, so a table with a single
/// effective row or column yields exactly 0.
double chi2(const ContingencyTable& table);

/// Cramer's V with "effective" category counts: categories that never occur
/// are excluded from both the statistic and the min(r-1, s-1) denominator.
/// A variable with one effective category has no association by convention
/// (v = 0). No continuity correction is applied.
AssociationValue cramers_v(const ContingencyTable& table);

/// The atomic unit of work for the selector and the parallel engine:
/// cramers_v(gen_ct(x, y)).
template <typename DerivedX, typename DerivedY>
AssociationValue cvtest(const Eigen::MatrixBase<DerivedX>& x,
                        const Eigen::MatrixBase<DerivedY>& y,
                        Index card_x, Index card_y) {
  return cramers_v(gen_ct(x, y, card_x, card_y));
}

/// Feature-vs-feature association on a discretized dataset.
AssociationValue cvtest(const DiscreteDataset& data, Index feature_a, Index feature_b);

/// Feature-vs-label association on a discretized dataset.
AssociationValue cvtest_label(const DiscreteDataset& data, Index feature);

}  // namespace fselect
