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

#ifndef TOCOMM_DATA_H_
#define TOCOMM_DATA_H_

// Datasets, two-view augmentation, stratified label subsampling, mini-batch
// sampling and the raw-tensor file format.
//
// Raw-tensor format (little-endian):
//   "TOCD" | u32 version = 1 | u32 N | u32 d | u32 C |
//   N*d float32 features, row-major | N u32 labels

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tocomm/autodiff.h"
#include "tocomm/random.h"

namespace tocomm::data {

struct Dataset {
  ad::Tensor features;              // [N x d]
  std::vector<std::size_t> labels;  // N entries in [0, num_classes)
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  // Labels in range, N >= 1, shapes consistent. Throws InputError.
  void validate() const;
  std::vector<std::size_t> class_counts() const;
  bool operator==(const Dataset& other) const = default;
};

struct BlobSpec {
  std::size_t classes = 20;
  std::size_t per_class = 200;
  std::size_t dim = 64;
  double separation = 5.0;

  void validate() const;
};

// Gaussian blobs: class c is centred at separation * u_c with u_c a random
// unit vector, and samples are centre + N(0, I). Samples are stored
// class-major and rounded to float32 so that the raw-tensor file reproduces
// them exactly.
Dataset make_blobs(const BlobSpec& spec, std::uint64_t seed);

struct BlobSplit {
  Dataset train;
  Dataset test;
};

// Train split identical to make_blobs(spec, seed); the test split shares
// the class centres and draws fresh noise from a disjoint stream.
BlobSplit make_blob_split(const BlobSpec& spec, std::size_t test_per_class,
                          std::uint64_t seed);

struct AugmentConfig {
  double jitter_sigma = 1.0;
  double mask_prob = 0.2;
  double scale_lo = 0.8;
  double scale_hi = 1.2;

  // All-zero augmentation (identity map).
  static AugmentConfig identity() { return {0.0, 0.0, 1.0, 1.0}; }
  void validate() const;
};

// x' = s * (x + e) with e ~ N(0, jitter_sigma^2) per coordinate,
// s ~ U[scale_lo, scale_hi] per row, and each coordinate zeroed
// independently with probability mask_prob (mask_prob = 1 zeroes x').
ad::Tensor augment(const ad::Tensor& x, const AugmentConfig& cfg, Rng& rng);

struct LabelMask {
  std::vector<char> available;  // one flag per sample
  double fraction = 1.0;

  std::size_t count() const;
};

// Per class c, marks ceil(fraction * n_c) randomly chosen samples as
// labeled. fraction must lie in (0, 1] (ConfigError otherwise).
LabelMask subsample_labels(const Dataset& ds, double fraction,
                           std::uint64_t seed);

// Samples whose label is available, in their original order.
Dataset labeled_subset(const Dataset& ds, const LabelMask& mask);

// Epoch-wise shuffled mini-batches. Each epoch is a fresh permutation of
// [0, N) cut into ceil(N / B) batches; the last one may be short.
class BatchSampler {
 public:
  BatchSampler(std::size_t num_samples, std::size_t batch_size,
               std::uint64_t shuffle_seed);

  std::vector<std::vector<std::size_t>> next_epoch();
  std::size_t batches_per_epoch() const;
  std::size_t epochs_drawn() const { return epoch_; }

 private:
  std::size_t num_samples_;
  std::size_t batch_size_;
  Rng rng_;
  std::size_t epoch_ = 0;
};

// Rows of `features` at `indices`.
ad::Tensor gather_rows(const ad::Tensor& features,
                       std::span<const std::size_t> indices);
std::vector<std::size_t> gather_labels(const Dataset& ds,
                                       std::span<const std::size_t> indices);

std::vector<std::uint8_t> encode_raw(const Dataset& ds);
// Throws ParseError carrying the byte offset of the first problem.
Dataset decode_raw(std::span<const std::uint8_t> bytes);

// Written atomically (temporary file, then rename).
void save_raw(const Dataset& ds, const std::filesystem::path& path);
Dataset load_raw(const std::filesystem::path& path);

}  // namespace tocomm::data

#endif  // TOCOMM_DATA_H_
