#include "fselect/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fselect {

namespace {

std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    char delimiter,
                                                    const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  std::size_t pos = 0;
  // UTF-8 BOM
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) pos = 3;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      end_record();
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw IoError(origin + ": unterminated quoted field");
  if (!field.empty() || !record.empty() || field_was_quoted) end_record();
  return records;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_finite_double(const std::string& cell, double& out) {
  std::string t = trimmed(cell);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;  // from_chars rejects a leading plus
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return false;
  if (!std::isfinite(value)) return false;
  out = value;
  return true;
}

// Ascending map from distinct value to dense code; shared by the
// passthrough path and the small-cardinality bypass of both binners.
std::vector<double> distinct_sorted(std::vector<double> column) {
  std::sort(column.begin(), column.end());
  column.erase(std::unique(column.begin(), column.end()), column.end());
  return column;
}

void densify_codes(std::vector<std::int64_t>& raw, Eigen::Ref<CodeMatrix> codes,
                   Index column, Eigen::VectorXi& cards) {
  std::vector<std::int64_t> seen = raw;
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (Index i = 0; i < static_cast<Index>(raw.size()); ++i) {
    const auto it = std::lower_bound(seen.begin(), seen.end(), raw[i]);
    codes(i, column) = static_cast<std::int32_t>(it - seen.begin());
  }
  cards[column] = static_cast<int>(seen.size());
}

}  // namespace

RawDataset parse_csv(const std::string& text, const std::string& label_col,
                     char delimiter, const std::string& origin) {
  auto records = parse_records(text, delimiter, origin);
  if (records.empty()) throw IoError(origin + ": empty file");

  const auto& header = records.front();
  const std::size_t width = header.size();
  if (width < 2)
    throw IoError(origin + ": need a label column and at least one feature column");

  // Label column: exact header match first, then a 0-based index.
  Index label_index = -1;
  for (std::size_t j = 0; j < width; ++j) {
    if (header[j] == label_col) {
      if (label_index >= 0)
        throw IoError(origin + ": label column '" + label_col + "' is ambiguous");
      label_index = static_cast<Index>(j);
    }
  }
  if (label_index < 0) {
    int idx = -1;
    auto t = trimmed(label_col);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
    if (ec == std::errc{} && ptr == t.data() + t.size() && idx >= 0 &&
        static_cast<std::size_t>(idx) < width) {
      label_index = idx;
    } else {
      throw IoError(origin + ": label column '" + label_col + "' not found");
    }
  }

  RawDataset raw;
  std::unordered_set<std::string> name_set;
  for (std::size_t j = 0; j < width; ++j) {
    if (static_cast<Index>(j) == label_index) continue;
    if (!name_set.insert(header[j]).second)
      throw IoError(origin + ": duplicate feature name '" + header[j] + "'");
    raw.feature_names.push_back(header[j]);
  }

  const Index r = static_cast<Index>(records.size()) - 1;
  const Index m = static_cast<Index>(width) - 1;
  if (r < 2) throw IoError(origin + ": fewer than 2 data rows");

  for (Index i = 0; i < r; ++i) {
    if (records[i + 1].size() != width) {
      throw IoError(origin + ": ragged row " + std::to_string(i + 2) + " (expected " +
                    std::to_string(width) + " fields, got " +
                    std::to_string(records[i + 1].size()) + ")");
    }
  }

  raw.values.resize(r, m);
  raw.labels.reserve(r);
  raw.categorical.assign(m, 0);

  for (Index i = 0; i < r; ++i) {
    const std::string& cell = records[i + 1][label_index];
    if (trimmed(cell).empty())
      throw IoError(origin + ": missing label in row " + std::to_string(i + 2));
    raw.labels.push_back(cell);
  }

  Index out_col = 0;
  for (std::size_t j = 0; j < width; ++j) {
    if (static_cast<Index>(j) == label_index) continue;
    bool numeric = true;
    for (Index i = 0; i < r; ++i) {
      const std::string& cell = records[i + 1][j];
      if (trimmed(cell).empty())
        throw IoError(origin + ": missing value in row " + std::to_string(i + 2) +
                      ", column '" + header[j] + "'");
      double value;
      if (!parse_finite_double(cell, value)) {
        numeric = false;
        break;
      }
      raw.values(i, out_col) = value;
    }
    if (!numeric) {
      // Categorical: first-appearance codes, stored as doubles and flagged
      // so discretization passes them through.
      raw.categorical[out_col] = 1;
      std::unordered_map<std::string, double> code_of;
      for (Index i = 0; i < r; ++i) {
        const std::string& cell = records[i + 1][j];
        auto [it, inserted] =
            code_of.try_emplace(cell, static_cast<double>(code_of.size()));
        raw.values(i, out_col) = it->second;
      }
    }
    ++out_col;
  }

  std::unordered_set<std::string> classes(raw.labels.begin(), raw.labels.end());
  if (classes.size() < 2) throw IoError(origin + ": fewer than 2 classes");

  return raw;
}

RawDataset load_csv(const std::string& path, const std::string& label_col,
                    char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failure");
  return parse_csv(buffer.str(), label_col, delimiter, path);
}

DiscreteDataset discretize(const RawDataset& raw, const DiscretizerSpec& spec) {
  if (spec.method != BinningMethod::passthrough && spec.bins < 2)
    throw ConfigError("discretize: bins must be >= 2");
  const Index r = raw.rows();
  const Index m = raw.feature_count();
  if (r < 2 || m < 1) throw ConfigError("discretize: dataset must have r >= 2, m >= 1");
  if (static_cast<Index>(raw.labels.size()) != r ||
      static_cast<Index>(raw.feature_names.size()) != m ||
      static_cast<Index>(raw.categorical.size()) != m)
    throw ConfigError("discretize: inconsistent dataset shape");

  DiscreteDataset data;
  data.codes.resize(r, m);
  data.cards.resize(m);
  data.feature_names = raw.feature_names;

  // Class codes by first appearance.
  data.label_codes.resize(r);
  std::unordered_map<std::string, std::int32_t> class_of;
  for (Index i = 0; i < r; ++i) {
    auto [it, inserted] = class_of.try_emplace(
        raw.labels[i], static_cast<std::int32_t>(class_of.size()));
    if (inserted) data.class_names.push_back(raw.labels[i]);
    data.label_codes[i] = it->second;
  }
  data.class_count = static_cast<std::int32_t>(class_of.size());
  if (data.class_count < 2) throw IoError("discretize: fewer than 2 classes");

  const std::int64_t bins = spec.bins;
  std::vector<double> column(r);
  std::vector<std::int64_t> raw_codes(r);

  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < r; ++i) column[i] = raw.values(i, j);
    const std::vector<double> distinct = distinct_sorted(column);
    const auto d = static_cast<std::int64_t>(distinct.size());

    const bool pass = raw.categorical[j] != 0 ||
                      spec.method == BinningMethod::passthrough;
    const bool few_distinct = spec.method == BinningMethod::equal_frequency
                                  ? d <= bins
                                  : d < bins;
    if (pass || few_distinct) {
      // One code per distinct value, ascending. For columns coded at load
      // time this reproduces the first-appearance codes unchanged.
      for (Index i = 0; i < r; ++i) {
        const auto it =
            std::lower_bound(distinct.begin(), distinct.end(), column[i]);
        data.codes(i, j) = static_cast<std::int32_t>(it - distinct.begin());
      }
      data.cards[j] = static_cast<int>(d);
    } else if (spec.method == BinningMethod::equal_frequency) {
      // Quantile cuts over the sorted order; a value's bin is the bin of its
      // leftmost occurrence, so equal values never split.
      std::vector<double> sorted = column;
      std::sort(sorted.begin(), sorted.end());
      for (Index i = 0; i < r; ++i) {
        const auto first_rank = static_cast<std::int64_t>(
            std::lower_bound(sorted.begin(), sorted.end(), column[i]) -
            sorted.begin());
        raw_codes[i] = first_rank * bins / r;
      }
      densify_codes(raw_codes, data.codes, j, data.cards);
    } else {
      // equal_width over [min, max].
      const double lo = distinct.front();
      const double hi = distinct.back();
      for (Index i = 0; i < r; ++i) {
        auto bin = static_cast<std::int64_t>(
            std::floor((column[i] - lo) * static_cast<double>(bins) / (hi - lo)));
        raw_codes[i] = std::clamp<std::int64_t>(bin, 0, bins - 1);
      }
      densify_codes(raw_codes, data.codes, j, data.cards);
    }

    if (data.cards[j] == 1) {
      data.warnings.push_back("feature '" + raw.feature_names[j] +
                              "' is constant (single category) and can never be selected");
    }
  }
  return data;
}

DiscreteDataset subset_rows(const DiscreteDataset& data, std::span<const Index> rows) {
  DiscreteDataset out;
  out.codes.resize(static_cast<Index>(rows.size()), data.feature_count());
  out.label_codes.resize(static_cast<Index>(rows.size()));
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
    out.codes.row(i) = data.codes.row(rows[i]);
    out.label_codes[i] = data.label_codes[rows[i]];
  }
  out.cards = data.cards;
  out.class_count = data.class_count;
  out.feature_names = data.feature_names;
  out.class_names = data.class_names;
  return out;
}

}  // namespace fselect
