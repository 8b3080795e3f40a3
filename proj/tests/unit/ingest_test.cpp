// Copyright 2026 The pfcm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <charconv>
#include <random>
#include <sstream>
#include <string>

#include "pfcm/error.hpp"
#include "pfcm/ingest.hpp"
#include "test_util.hpp"

namespace pfcm {
namespace {

RawTable parse(const std::string& text, DatasetSchema schema = {}) {
  std::istringstream in(text);
  return read_records(in, schema);
}

Matrix features(const std::string& text, DatasetSchema schema = {}) {
  return encode_categorical(parse(text, schema), schema).features;
}

TEST(ReadRecords, Basic) {
  const Matrix m = features("1.0,2.0\n3.0,4.0");
  EXPECT_EQ(m, (Matrix{{1, 2}, {3, 4}}));
}

TEST(ReadRecords, TrimsWhitespaceAndSkipsBlankLines) {
  EXPECT_EQ(features(" 1.0 , 2.0 "), (Matrix{{1, 2}}));
  EXPECT_EQ(features("\n1,2\r\n\n  \n3,4\n"), (Matrix{{1, 2}, {3, 4}}));
}

TEST(ReadRecords, ScientificAndSigned) {
  EXPECT_EQ(features("1e3,-2.5E-1,+4"), (Matrix{{1000, -0.25, 4}}));
}

TEST(ReadRecords, UnparseableNumberReportsLineAndColumn) {
  try {
    parse("1.0,abc");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 2u);
  }
  try {
    parse("1,2\n\n3,x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(ReadRecords, WrongFieldCount) {
  try {
    parse("1,2,3\n4,5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("1,nan\n"), ParseError);
}

TEST(ReadRecords, EmptyInput) {
  EXPECT_THROW(parse(""), InvalidInput);
  EXPECT_THROW(parse("\n  \n"), InvalidInput);
  DatasetSchema header;
  header.has_header = true;
  EXPECT_THROW(parse("a,b\n", header), InvalidInput);
}

TEST(ReadRecords, HeaderAndLabelColumn) {
  DatasetSchema s;
  s.has_header = true;
  s.label_column = -1;
  s.delimiter = ';';
  const RawTable t = parse("x;y;class\n1;2;A\n3;4;B\n", s);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y", "class"}));
  ASSERT_EQ(t.label_column, 2u);
  const auto enc = encode_categorical(t, s);
  EXPECT_EQ(enc.features, (Matrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(enc.labels, (std::vector<std::string>{"A", "B"}));

  s.label_column = 0;
  s.has_header = false;
  const auto first = encode_categorical(parse("A;1;2\nB;3;4\n", s), s);
  EXPECT_EQ(first.features, (Matrix{{1, 2}, {3, 4}}));
  s.label_column = 5;
  EXPECT_THROW(parse("A;1;2\n", s), InvalidInput);
}

TEST(EncodeCategorical, FirstAppearanceCodes) {
  DatasetSchema s;
  s.categorical_columns = {1};
  const auto enc = encode_categorical(parse("1,tcp\n2,udp\n3,tcp\n", s), s);
  EXPECT_EQ(enc.features, (Matrix{{1, 0}, {2, 1}, {3, 0}}));
  ASSERT_EQ(enc.dictionaries.size(), 1u);
  EXPECT_EQ(enc.dictionaries[0].tokens, (std::vector<std::string>{"tcp", "udp"}));
  EXPECT_EQ(enc.dictionaries[0].column, 1u);
}

TEST(EncodeCategorical, SingleTokenIsZero) {
  DatasetSchema s;
  s.categorical_columns = {0};
  EXPECT_EQ(features("a,1\na,2\na,3\n", s), (Matrix{{0, 1}, {0, 2}, {0, 3}}));
}

TEST(EncodeCategorical, ColumnsAreIndependent) {
  DatasetSchema s;
  s.categorical_columns = {0, 1, 2};
  const auto enc = encode_categorical(parse("x,y,x\ny,x,z\nx,x,x\n", s), s);
  EXPECT_EQ(enc.features, (Matrix{{0, 0, 0}, {1, 1, 1}, {0, 1, 0}}));
  EXPECT_EQ(enc.dictionaries[0].tokens, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(enc.dictionaries[1].tokens, (std::vector<std::string>{"y", "x"}));
  EXPECT_EQ(enc.dictionaries[2].tokens, (std::vector<std::string>{"x", "z"}));
}

TEST(EncodeCategorical, OneHot) {
  DatasetSchema s;
  s.categorical_columns = {1};
  s.encoding = CategoricalEncoding::kOneHot;
  EXPECT_EQ(features("5,a\n6,b\n7,c\n8,a\n", s),
            (Matrix{{5, 1, 0, 0}, {6, 0, 1, 0}, {7, 0, 0, 1}, {8, 1, 0, 0}}));
}

TEST(EncodeCategorical, ReusedDictionariesKeepCodes) {
  DatasetSchema s;
  s.categorical_columns = {0};
  const auto first = encode_categorical(parse("b,1\na,2\n", s), s);
  const auto again = encode_categorical(parse("a,1\nb,2\nc,3\n", s), s, first.dictionaries);
  EXPECT_EQ(again.features, (Matrix{{1, 1}, {0, 2}, {2, 3}}));
}

TEST(Normalize, Examples) {
  auto [a, ra] = normalize_minmax(Matrix{{0.0}, {5.0}, {10.0}});
  EXPECT_EQ(a, (Matrix{{0.0}, {0.5}, {1.0}}));
  EXPECT_EQ(ra[0].min, 0.0);
  EXPECT_EQ(ra[0].max, 10.0);
  EXPECT_EQ(normalize_minmax(Matrix{{7.0}, {7.0}, {7.0}}).first, (Matrix{{0.0}, {0.0}, {0.0}}));
  EXPECT_EQ(normalize_minmax(Matrix{{0.0}, {1.0}}).first, (Matrix{{0.0}, {1.0}}));
  EXPECT_THROW(normalize_minmax(Matrix{}), InvalidInput);
  EXPECT_THROW(normalize_minmax(Matrix{{1.0}, {INFINITY}}), InvalidInput);
}

TEST(Normalize, UnitRangeAndReapplicationIsExact) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix raw = testing::random_points(100, 5, rng, -1e4, 1e4);
    const auto [norm, ranges] = normalize_minmax(raw);
    for (double x : norm.data()) {
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
    EXPECT_EQ(apply_minmax(raw, ranges), norm);
  }
  EXPECT_THROW(apply_minmax(Matrix{{1.0, 2.0}}, {FeatureRange{}}), InvalidInput);
}

TEST(PlanPartitions, Examples) {
  const auto a = plan_partitions(10, 3);
  ASSERT_EQ(a.count(), 3u);
  EXPECT_EQ(a.ranges[0], (std::pair<std::size_t, std::size_t>{0, 4}));
  EXPECT_EQ(a.ranges[1], (std::pair<std::size_t, std::size_t>{4, 7}));
  EXPECT_EQ(a.ranges[2], (std::pair<std::size_t, std::size_t>{7, 10}));
  EXPECT_FALSE(a.clamped);

  const auto b = plan_partitions(10, 1);
  ASSERT_EQ(b.count(), 1u);
  EXPECT_EQ(b.ranges[0], (std::pair<std::size_t, std::size_t>{0, 10}));

  const auto c = plan_partitions(3, 8);
  EXPECT_EQ(c.count(), 3u);
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(c.requested, 8u);
  for (const auto& [lo, hi] : c.ranges) EXPECT_EQ(hi - lo, 1u);

  EXPECT_THROW(plan_partitions(0, 1), InvalidInput);
  EXPECT_THROW(plan_partitions(5, 0), InvalidInput);
}

TEST(PlanPartitions, ExhaustiveSmallDomain) {
  // Every 1 <= P <= n <= 300 plus sampled n up to 10^4.
  auto check = [](std::size_t n, std::size_t p) {
    const auto plan = plan_partitions(n, p);
    ASSERT_EQ(plan.count(), p);
    std::size_t next = 0, lo_size = n, hi_size = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const auto [b, e] = plan.ranges[i];
      ASSERT_EQ(b, next);
      ASSERT_GT(e, b);
      lo_size = std::min(lo_size, e - b);
      hi_size = std::max(hi_size, e - b);
      if (i < n % p) ASSERT_EQ(e - b, n / p + 1);
      next = e;
    }
    ASSERT_EQ(next, n);
    ASSERT_LE(hi_size - lo_size, 1u);
  };
  for (std::size_t n = 1; n <= 300; ++n)
    for (std::size_t p = 1; p <= n; ++p) check(n, p);
  for (std::size_t n : {997u, 4096u, 10000u})
    for (std::size_t p = 1; p <= n; p += (p < 64 ? 1 : 37)) check(n, p);
}

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

TEST(ReadRecords, FormatRoundTrip) {
  std::mt19937_64 rng(31);
  for (char delim : {',', '\t', ';', '|'}) {
    const Matrix data = testing::random_points(50, 4, rng, -1e6, 1e6);
    std::string text;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      for (std::size_t j = 0; j < data.dim(); ++j) {
        if (j) text += delim;
        text += shortest(data(i, j));
      }
      text += '\n';
    }
    DatasetSchema s;
    s.delimiter = delim;
    const Matrix back = features(text, s);
    ASSERT_EQ(back.rows(), data.rows());
    EXPECT_LE(testing::max_abs_diff(back, data), 1e-12);
  }
}

TEST(LoadDataset, StateRoundTripsThroughJson) {
  DatasetSchema s;
  s.has_header = true;
  s.label_column = -1;
  s.categorical_columns = {1};
  std::istringstream in("a,proto,b,label\n0,tcp,10,x\n5,udp,20,y\n10,tcp,30,x\n");
  const Dataset ds = load_dataset(in, s, true);
  EXPECT_EQ(ds.features, (Matrix{{0, 0, 0}, {0.5, 1, 0.5}, {1, 0, 1}}));
  EXPECT_EQ(ds.state.feature_count, 3u);

  const IngestState restored = ingest_state_from_json(to_json(ds.state));
  EXPECT_EQ(to_json(restored), to_json(ds.state));
  std::istringstream fresh("a,proto,b,label\n2.5,udp,15,y\n");
  const Dataset applied = apply_ingest(fresh, restored);
  EXPECT_EQ(applied.features, (Matrix{{0.25, 1, 0.25}}));
  EXPECT_EQ(applied.labels, (std::vector<std::string>{"y"}));

  std::istringstream wrong("a,b\n1,2\n");
  EXPECT_THROW(apply_ingest(wrong, restored), Error);
}

TEST(LoadDataset, MissingFileNamesPath) {
  try {
    load_dataset_file("/nonexistent/file.csv", {}, true);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/file.csv"), std::string::npos);
  }
}

TEST(LoadDataset, BundledFiles) {
  DatasetSchema s;
  s.has_header = true;
  s.label_column = -1;
  const Dataset iris = load_dataset_file(PFCM_DATA_DIR "/iris.csv", s, true);
  EXPECT_EQ(iris.features.rows(), 150u);
  EXPECT_EQ(iris.features.dim(), 4u);
  EXPECT_EQ(iris.labels.size(), 150u);
  const Dataset pima = load_dataset_file(PFCM_DATA_DIR "/pima.csv", s, true);
  EXPECT_EQ(pima.features.rows(), 768u);
  EXPECT_EQ(pima.features.dim(), 8u);
}

}  // namespace
}  // namespace pfcm
