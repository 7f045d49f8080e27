#pragma once

#include <cstdint>

#include "fselect/dataset.hpp"
#include "fselect/types.hpp"

namespace fselect {

/// Seeded generator for benchmark and test datasets. The first `informative`
/// features carry the class signal (a class-derived code, replaced by a
/// uniform draw with probability `noise`); the rest are uniform noise.
struct SyntheticSpec {
  Index rows = 20000;
  Index features = 200;
  int classes = 8;
  int informative = 20;
  int card = 16;        // per-feature category budget
  double noise = 0.25;
  std::uint64_t seed = 42;
};

DiscreteDataset make_synthetic(const SyntheticSpec& spec);

}  // namespace fselect
