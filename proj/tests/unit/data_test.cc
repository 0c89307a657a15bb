// Copyright 2026 The tocomm Authors.
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

#include "tocomm/data.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "tocomm/errors.h"

namespace tocomm::data {
namespace {

BlobSpec small_spec() { return {4, 10, 6, 3.0}; }

TEST(Blobs, ShapeOrderAndDeterminism) {
  const Dataset a = make_blobs(small_spec(), 9);
  EXPECT_EQ(a.size(), 40u);
  EXPECT_EQ(a.dim(), 6u);
  EXPECT_EQ(a.num_classes, 4u);
  EXPECT_EQ(a.labels[0], 0u);
  EXPECT_EQ(a.labels[39], 3u);
  EXPECT_EQ(a, make_blobs(small_spec(), 9));
  EXPECT_FALSE(a == make_blobs(small_spec(), 10));
  for (double v : a.features.data()) EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
}

TEST(Blobs, SplitSharesTrainAndCentres) {
  const BlobSplit s = make_blob_split(small_spec(), 5, 9);
  EXPECT_EQ(s.train, make_blobs(small_spec(), 9));
  EXPECT_EQ(s.test.size(), 20u);
}

TEST(Blobs, Validation) {
  BlobSpec bad = small_spec();
  bad.classes = 1;
  EXPECT_THROW(make_blobs(bad, 1), ConfigError);
}

TEST(Augment, IdentityConfig) {
  const Dataset a = make_blobs(small_spec(), 1);
  Rng rng = make_rng(1, 0);
  EXPECT_EQ(augment(a.features, AugmentConfig::identity(), rng), a.features);
}

TEST(Augment, FullMaskZeroes) {
  const Dataset a = make_blobs(small_spec(), 1);
  AugmentConfig cfg;
  cfg.mask_prob = 1.0;
  Rng rng = make_rng(1, 0);
  for (double v : augment(a.features, cfg, rng).data()) EXPECT_EQ(v, 0.0);
  cfg.mask_prob = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(LabelMask, StratifiedCeiling) {
  const Dataset a = make_blobs({3, 7, 4, 1.0}, 2);
  const LabelMask m = subsample_labels(a, 0.6, 5);
  // ceil(0.6 * 7) = 5 per class
  EXPECT_EQ(m.count(), 15u);
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a.labels[i] == c && m.available[i];
    EXPECT_EQ(n, 5u);
  }
  EXPECT_EQ(subsample_labels(a, 1.0, 5).count(), 21u);
  EXPECT_THROW(subsample_labels(a, 0.0, 5), ConfigError);
  const Dataset sub = labeled_subset(a, m);
  EXPECT_EQ(sub.size(), 15u);
  EXPECT_EQ(sub.class_counts(), (std::vector<std::size_t>{5, 5, 5}));
}

TEST(BatchSampler, EachEpochIsAPermutation) {
  BatchSampler s(10, 4, 3);
  EXPECT_EQ(s.batches_per_epoch(), 3u);
  const auto e1 = s.next_epoch();
  const auto e2 = s.next_epoch();
  std::vector<std::size_t> all;
  for (const auto& b : e1) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(e1.back().size(), 2u);
  EXPECT_NE(e1, e2);
}

TEST(RawFormat, RoundTrip) {
  const Dataset a = make_blobs(small_spec(), 4);
  const auto bytes = encode_raw(a);
  EXPECT_EQ(bytes.size(), 20u + 40u * 6u * 4u + 40u * 4u);
  EXPECT_EQ(decode_raw(bytes), a);
  const auto path = std::filesystem::temp_directory_path() / "tocomm_data_test.tocd";
  save_raw(a, path);
  EXPECT_EQ(load_raw(path), a);
  std::filesystem::remove(path);
}

TEST(RawFormat, TruncationReportsOffset) {
  const Dataset a = make_blobs(small_spec(), 4);
  auto bytes = encode_raw(a);
  bytes.resize(100);
  try {
    decode_raw(bytes);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
  auto bad = encode_raw(a);
  bad[0] = 'X';
  EXPECT_THROW(decode_raw(bad), ParseError);
  auto trailing = encode_raw(a);
  trailing.push_back(0);
  EXPECT_THROW(decode_raw(trailing), ParseError);
}

TEST(RawFormat, LabelOutOfRange) {
  Dataset a = make_blobs(small_spec(), 4);
  auto bytes = encode_raw(a);
  bytes[bytes.size() - 4] = 9;  // last label := 9 >= C
  EXPECT_THROW(decode_raw(bytes), ParseError);
}

}  // namespace
}  // namespace tocomm::data
