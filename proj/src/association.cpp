#include "fselect/association.hpp"

#include <vector>

namespace fselect {

double chi2(const ContingencyTable& table) {
  if (table.n < 1) throw std::invalid_argument("chi2: empty table");
  const double n = static_cast<double>(table.n);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(table.rows() * table.cols()));
  for (Index i = 0; i < table.rows(); ++i) {
    const double row_marginal = static_cast<double>(table.row_marginals[i]);
    if (row_marginal == 0.0) continue;
    for (Index j = 0; j < table.cols(); ++j) {
      const double col_marginal = static_cast<double>(table.col_marginals[j]);
      if (col_marginal == 0.0) continue;
      const double expected = row_marginal * col_marginal / n;
      const double diff = static_cast<double>(table.counts(i, j)) - expected;
      terms.push_back(diff * diff / expected);
    }
  }
  // The term multiset is invariant under table transpose and category
  // relabeling; summing in sorted order keeps the result bit-identical
  // under both.
  std::sort(terms.begin(), terms.end());
  double stat = 0.0;
  for (const double term : terms) stat += term;
  return stat;
}

AssociationValue cramers_v(const ContingencyTable& table) {
  AssociationValue out;
  out.chi2 = chi2(table);
  out.effective_rows = static_cast<int>((table.row_marginals.array() > 0).count());
  out.effective_cols = static_cast<int>((table.col_marginals.array() > 0).count());
  const int dof = std::min(out.effective_rows - 1, out.effective_cols - 1);
  if (dof > 0) {
    out.v = std::sqrt(out.chi2 / (static_cast<double>(table.n) * dof));
    out.v = std::clamp(out.v, 0.0, 1.0);
  }
  return out;
}

AssociationValue cvtest(const DiscreteDataset& data, Index feature_a, Index feature_b) {
  return cvtest(data.codes.col(feature_a), data.codes.col(feature_b),
                data.cards[feature_a], data.cards[feature_b]);
}

AssociationValue cvtest_label(const DiscreteDataset& data, Index feature) {
  return cvtest(data.codes.col(feature), data.label_codes, data.cards[feature],
                data.class_count);
}

}  // namespace fselect
