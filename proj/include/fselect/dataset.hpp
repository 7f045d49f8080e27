#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fselect/types.hpp"

namespace fselect {

/// Tabular data as loaded from disk, before discretization.
/// Categorical string columns are already coded (first-appearance order)
/// and flagged so that discretization passes them through unchanged.
struct RawDataset {
  Eigen::MatrixXd values;                 // r x m feature matrix, label column removed
  std::vector<std::string> labels;        // length r class identifiers
  std::vector<std::string> feature_names; // length m, unique
  std::vector<std::uint8_t> categorical;  // length m, nonzero => passthrough column

  Index rows() const { return values.rows(); }
  Index feature_count() const { return values.cols(); }
};

enum class BinningMethod { equal_frequency, equal_width, passthrough };

struct DiscretizerSpec {
  BinningMethod method = BinningMethod::equal_frequency;
  int bins = 16;
};

/// Discretized dataset: every statistic downstream is computed over this.
/// Immutable by convention once built; concurrent readers are safe.
///
/// Invariants: codes(i, j) in [0, cards[j]) with every code occurring at
/// least once per column, label_codes in [0, class_count) with every class
/// occurring. Row subsets taken for cross-validation keep the original
/// cards and may leave some codes unused; the association statistics only
/// ever look at categories that actually occur.
struct DiscreteDataset {
  CodeMatrix codes;           // r x m
  Eigen::VectorXi cards;      // per-feature category counts
  CodeVector label_codes;     // length r
  std::int32_t class_count = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;   // class code -> original label
  std::vector<std::string> warnings;      // constant columns etc.

  Index rows() const { return codes.rows(); }
  Index feature_count() const { return codes.cols(); }
};

/// Loads an RFC-4180-style CSV with a mandatory header row.
/// `label_col` is a column name, or a 0-based column index if no name matches.
/// A feature column is categorical iff any cell fails to parse as a finite
/// real number; such columns are coded by first appearance. Missing (empty)
/// cells, ragged rows and datasets with fewer than 2 rows or 2 classes are
/// rejected with IoError.
RawDataset load_csv(const std::string& path, const std::string& label_col,
                    char delimiter = ',');

/// Same parser over an in-memory buffer; load_csv delegates here.
RawDataset parse_csv(const std::string& text, const std::string& label_col,
                     char delimiter, const std::string& origin);

/// Maps every column to dense category codes.
///
/// equal_frequency cuts at sorted-order quantile positions; equal values
/// always land in the same bin (the bin of their leftmost occurrence).
/// equal_width splits [min, max] into `bins` equal intervals. A column
/// whose distinct-value count fits the bin budget is coded one code per
/// distinct value in ascending order, which also covers passthrough
/// columns. Constant columns are allowed (card 1) and recorded as a
/// warning; they can never be selected.
DiscreteDataset discretize(const RawDataset& raw, const DiscretizerSpec& spec);

/// Row subset with unchanged cards/class metadata (for cross-validation).
/// The dense-codes invariant is intentionally not re-established.
DiscreteDataset subset_rows(const DiscreteDataset& data, std::span<const Index> rows);

}  // namespace fselect
