#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "fselect/dataset.hpp"
#include "support/testutil.hpp"

using namespace fselect;
using testutil::Rng;

namespace {

RawDataset raw_from_column(const std::vector<double>& column,
                           const std::vector<std::string>& labels) {
  RawDataset raw;
  raw.values.resize(static_cast<Index>(column.size()), 1);
  for (std::size_t i = 0; i < column.size(); ++i)
    raw.values(static_cast<Index>(i), 0) = column[i];
  raw.labels = labels;
  raw.feature_names = {"x"};
  raw.categorical = {0};
  return raw;
}

std::vector<std::string> alternating_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 2 == 0 ? "a" : "b";
  return labels;
}

std::vector<std::int32_t> column_of(const DiscreteDataset& data, Index j) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i)
    out[static_cast<std::size_t>(i)] = data.codes(i, j);
  return out;
}

// first-appearance relabeling, for comparing code columns up to renaming
std::vector<std::int32_t> canonical(std::vector<std::int32_t> codes) {
  std::vector<std::int32_t> map(64, -1);
  std::int32_t next = 0;
  for (auto& c : codes) {
    if (map[static_cast<std::size_t>(c)] < 0) map[static_cast<std::size_t>(c)] = next++;
    c = map[static_cast<std::size_t>(c)];
  }
  return codes;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("parse_csv shape bookkeeping") {
  const auto raw = parse_csv("a,b,class\n1,2,x\n3,4,y\n5,6,x\n7,8,y\n", "class", ',', "mem");
  CHECK(raw.rows() == 4);
  CHECK(raw.feature_count() == 2);
  CHECK(raw.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(raw.labels.size() == 4);
  CHECK(raw.values(2, 1) == 6.0);
}

TEST_CASE("parse_csv rejects degenerate input") {
  CHECK_THROWS_WITH_AS(parse_csv("a,class\n1,x\n2,x\n", "class", ',', "mem"),
                       doctest::Contains("fewer than 2 classes"), IoError);
  CHECK_THROWS_WITH_AS(parse_csv("a,class\n1,x\n", "class", ',', "mem"),
                       doctest::Contains("fewer than 2 data rows"), IoError);
  CHECK_THROWS_WITH_AS(parse_csv("a,class\n1,x\n2\n3,y\n", "class", ',', "mem"),
                       doctest::Contains("ragged"), IoError);
  CHECK_THROWS_WITH_AS(parse_csv("a,class\n1,x\n,y\n", "class", ',', "mem"),
                       doctest::Contains("missing value"), IoError);
  CHECK_THROWS_WITH_AS(parse_csv("a,class\n1,x\n2,y\n", "klass", ',', "mem"),
                       doctest::Contains("not found"), IoError);
  CHECK_THROWS_WITH_AS(parse_csv("a,a,class\n1,2,x\n3,4,y\n", "class", ',', "mem"),
                       doctest::Contains("duplicate feature name"), IoError);
}

TEST_CASE("parse_csv categorical column coded by first appearance") {
  const auto raw =
      parse_csv("color,n,class\nred,1,x\nblue,2,y\nred,3,x\n", "class", ',', "mem");
  CHECK(raw.categorical[0] != 0);
  CHECK(raw.categorical[1] == 0);
  CHECK(raw.values(0, 0) == 0.0);
  CHECK(raw.values(1, 0) == 1.0);
  CHECK(raw.values(2, 0) == 0.0);
}

TEST_CASE("parse_csv label column by index, quoting, delimiters") {
  const auto raw = parse_csv("a;b;c\n1;\"x;1\";2\n3;\"y\"\"q\";4\n", "1", ';', "mem");
  CHECK(raw.feature_names == std::vector<std::string>{"a", "c"});
  CHECK(raw.labels[0] == "x;1");
  CHECK(raw.labels[1] == "y\"q");

  const auto crlf = parse_csv("a,class\r\n1,x\r\n2,y\r\n", "class", ',', "mem");
  CHECK(crlf.rows() == 2);
}

TEST_CASE("equal_frequency median split") {
  const auto raw = raw_from_column({1.0, 2.0, 3.0, 4.0}, alternating_labels(4));
  const auto data = discretize(raw, {BinningMethod::equal_frequency, 2});
  CHECK(column_of(data, 0) == std::vector<std::int32_t>{0, 0, 1, 1});
  CHECK(data.cards[0] == 2);
}

TEST_CASE("constant column keeps card 1 and warns") {
  const auto raw = raw_from_column({5.0, 5.0, 5.0}, {"a", "b", "a"});
  const auto data = discretize(raw, {BinningMethod::equal_frequency, 4});
  CHECK(column_of(data, 0) == std::vector<std::int32_t>{0, 0, 0});
  CHECK(data.cards[0] == 1);
  REQUIRE(data.warnings.size() == 1);
  CHECK(data.warnings[0].find("constant") != std::string::npos);
}

TEST_CASE("equal_width interval rule") {
  const auto raw =
      raw_from_column({0.0, 1.0, 1.0, 1.0, 9.0, 10.0}, alternating_labels(6));
  const auto data = discretize(raw, {BinningMethod::equal_width, 2});
  CHECK(column_of(data, 0) == std::vector<std::int32_t>{0, 0, 0, 0, 1, 1});
}

TEST_CASE("equal_frequency ties never split") {
  // the quantile cut at rank 3 falls inside the run of 2s; the whole run
  // stays in the bin of its leftmost occurrence
  const auto raw =
      raw_from_column({1.0, 2.0, 2.0, 2.0, 2.0, 3.0}, alternating_labels(6));
  const auto data = discretize(raw, {BinningMethod::equal_frequency, 3});
  const auto codes = column_of(data, 0);
  CHECK(codes[1] == codes[2]);
  CHECK(codes[2] == codes[3]);
  CHECK(codes[3] == codes[4]);
  CHECK(codes[0] < codes[1]);
  CHECK(codes[4] < codes[5]);
}

TEST_CASE("labels coded by first appearance") {
  const auto raw = raw_from_column({1.0, 2.0, 3.0}, {"z", "q", "z"});
  const auto data = discretize(raw, {BinningMethod::equal_frequency, 2});
  CHECK(data.class_names == std::vector<std::string>{"z", "q"});
  CHECK(data.label_codes(0) == 0);
  CHECK(data.label_codes(1) == 1);
  CHECK(data.class_count == 2);
}

TEST_CASE("bijection when bins cover all distinct values") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = 4 + rng.uniform(40);
    std::vector<double> column(static_cast<std::size_t>(rows));
    for (auto& v : column) v = static_cast<double>(rng.uniform(6)) * 0.5;
    const auto raw = raw_from_column(column, alternating_labels(static_cast<std::size_t>(rows)));
    const auto data = discretize(raw, {BinningMethod::equal_frequency, 16});

    std::vector<double> distinct = column;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    CHECK(data.cards[0] == static_cast<int>(distinct.size()));
    for (Index i = 0; i < rows; ++i) {
      const auto rank = std::lower_bound(distinct.begin(), distinct.end(),
                                         column[static_cast<std::size_t>(i)]) -
                        distinct.begin();
      CHECK(data.codes(i, 0) == static_cast<std::int32_t>(rank));
    }
  }
}

TEST_CASE("binned codes are monotone in value and dense") {
  Rng rng(13);
  for (const auto method : {BinningMethod::equal_frequency, BinningMethod::equal_width}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Index rows = 10 + rng.uniform(80);
      std::vector<double> column(static_cast<std::size_t>(rows));
      for (auto& v : column) v = rng.real01() * 10.0;
      const auto raw =
          raw_from_column(column, alternating_labels(static_cast<std::size_t>(rows)));
      const auto data = discretize(raw, {method, 2 + static_cast<int>(rng.uniform(6))});

      // dense: every code below card occurs
      std::vector<int> seen(static_cast<std::size_t>(data.cards[0]), 0);
      for (Index i = 0; i < rows; ++i) {
        REQUIRE(data.codes(i, 0) >= 0);
        REQUIRE(data.codes(i, 0) < data.cards[0]);
        seen[static_cast<std::size_t>(data.codes(i, 0))] = 1;
      }
      CHECK(std::accumulate(seen.begin(), seen.end(), 0) == data.cards[0]);

      // monotone: sorting rows by value sorts codes
      std::vector<Index> order(static_cast<std::size_t>(rows));
      std::iota(order.begin(), order.end(), Index{0});
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return column[static_cast<std::size_t>(a)] < column[static_cast<std::size_t>(b)];
      });
      for (std::size_t i = 1; i < order.size(); ++i)
        CHECK(data.codes(order[i - 1], 0) <= data.codes(order[i], 0));
    }
  }
}

TEST_CASE("discretization is order-insensitive up to relabeling") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const Index rows = 8 + rng.uniform(40);
    RawDataset raw;
    raw.values.resize(rows, 2);
    for (Index i = 0; i < rows; ++i) {
      raw.values(i, 0) = rng.real01() * 4.0;
      raw.values(i, 1) = static_cast<double>(rng.uniform(3));  // passthrough codes
    }
    raw.labels.resize(static_cast<std::size_t>(rows));
    for (Index i = 0; i < rows; ++i)
      raw.labels[static_cast<std::size_t>(i)] = i % 2 == 0 ? "a" : "b";
    raw.feature_names = {"num", "cat"};
    raw.categorical = {0, 1};

    std::vector<Index> perm(static_cast<std::size_t>(rows));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = rows - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(rng.uniform(i + 1))]);

    RawDataset shuffled = raw;
    for (Index i = 0; i < rows; ++i) {
      shuffled.values.row(i) = raw.values.row(perm[static_cast<std::size_t>(i)]);
      shuffled.labels[static_cast<std::size_t>(i)] =
          raw.labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }

    const DiscretizerSpec spec{BinningMethod::equal_frequency, 3};
    const auto base = discretize(raw, spec);
    const auto moved = discretize(shuffled, spec);

    for (Index j = 0; j < 2; ++j) {
      // un-permute the shuffled codes, then compare up to relabeling
      std::vector<std::int32_t> restored(static_cast<std::size_t>(rows));
      for (Index i = 0; i < rows; ++i)
        restored[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
            moved.codes(i, j);
      CHECK(canonical(restored) == canonical(column_of(base, j)));
    }
  }
}

TEST_CASE("discretize validates spec") {
  const auto raw = raw_from_column({1.0, 2.0}, {"a", "b"});
  CHECK_THROWS_AS(discretize(raw, {BinningMethod::equal_frequency, 1}), ConfigError);
  CHECK_NOTHROW(discretize(raw, {BinningMethod::passthrough, 0}));
}

TEST_CASE("subset_rows keeps metadata") {
  Rng rng(5);
  const auto data = testutil::random_dataset(rng, 20, 3, 4, 2);
  const std::vector<Index> picks{3, 5, 19};
  const auto sub = subset_rows(data, picks);
  CHECK(sub.rows() == 3);
  CHECK(sub.cards == data.cards);
  CHECK(sub.class_count == data.class_count);
  for (Index i = 0; i < 3; ++i) {
    CHECK(sub.codes.row(i) == data.codes.row(picks[static_cast<std::size_t>(i)]));
    CHECK(sub.label_codes[i] == data.label_codes[picks[static_cast<std::size_t>(i)]]);
  }
}

}  // TEST_SUITE
