#include "fselect/synthetic.hpp"

#include <random>
#include <string>
#include <vector>

namespace fselect {

namespace {

void densify_column(Eigen::Ref<CodeVector> column, int& card) {
  std::vector<std::int32_t> seen(column.data(), column.data() + column.size());
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (Index i = 0; i < column.size(); ++i) {
    const auto it = std::lower_bound(seen.begin(), seen.end(), column[i]);
    column[i] = static_cast<std::int32_t>(it - seen.begin());
  }
  card = static_cast<int>(seen.size());
}

}  // namespace

DiscreteDataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.rows < 2 || spec.features < 1 || spec.classes < 2 || spec.card < 2)
    throw ConfigError("make_synthetic: invalid shape");
  if (spec.informative < 0 || spec.informative > spec.features)
    throw ConfigError("make_synthetic: informative out of range");
  if (spec.noise < 0.0 || spec.noise > 1.0)
    throw ConfigError("make_synthetic: noise must be in [0, 1]");

  std::mt19937_64 rng(spec.seed);
  const auto uniform = [&rng](std::int64_t n) {
    return static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(n));
  };

  DiscreteDataset data;
  data.codes.resize(spec.rows, spec.features);
  data.cards.resize(spec.features);
  data.label_codes.resize(spec.rows);

  // Draw order is fixed: labels first, then features column by column.
  for (Index i = 0; i < spec.rows; ++i) data.label_codes[i] = uniform(spec.classes);

  const std::int32_t group = std::max(1, spec.card / spec.classes);
  const auto noise_cut =
      static_cast<std::uint64_t>(spec.noise * 1048576.0);  // out of 2^20
  for (Index j = 0; j < spec.features; ++j) {
    const bool informative = j < static_cast<Index>(spec.informative);
    for (Index i = 0; i < spec.rows; ++i) {
      const bool corrupt = (rng() & 0xFFFFF) < noise_cut;
      if (informative && !corrupt) {
        data.codes(i, j) =
            std::min<std::int32_t>(data.label_codes[i] * group + uniform(group),
                                   spec.card - 1);
      } else {
        data.codes(i, j) = uniform(spec.card);
      }
    }
  }

  for (Index j = 0; j < spec.features; ++j) {
    int card = 0;
    densify_column(data.codes.col(j), card);
    data.cards[j] = card;
  }
  int class_count = 0;
  densify_column(data.label_codes, class_count);
  data.class_count = class_count;
  if (data.class_count < 2)
    throw ConfigError("make_synthetic: degenerate draw produced one class");

  data.feature_names.reserve(static_cast<std::size_t>(spec.features));
  for (Index j = 0; j < spec.features; ++j)
    data.feature_names.push_back("f" + std::to_string(j));
  for (int c = 0; c < data.class_count; ++c)
    data.class_names.push_back("c" + std::to_string(c));
  return data;
}

}  // namespace fselect
