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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "tocomm/errors.h"
#include "tocomm/io.h"

namespace tocomm::data {
namespace {

constexpr char kMagic[4] = {'T', 'O', 'C', 'D'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 20;

// Stream ids for derive_seed().
enum Stream : std::uint64_t {
  kCentres = 1,
  kTrainNoise = 2,
  kTestNoise = 3,
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

std::vector<ad::Tensor> draw_centres(const BlobSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed, kCentres);
  std::vector<ad::Tensor> centres;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    ad::Tensor u({1, spec.dim});
    double sq = 0.0;
    do {
      sq = 0.0;
      for (double& v : u.data()) {
        v = standard_normal(rng);
        sq += v * v;
      }
    } while (!(sq > 0.0));
    const double s = spec.separation / std::sqrt(sq);
    for (double& v : u.data()) v *= s;
    centres.push_back(std::move(u));
  }
  return centres;
}

Dataset sample_blobs(const BlobSpec& spec, const std::vector<ad::Tensor>& centres,
                     std::size_t per_class, Rng& rng) {
  const std::size_t n = spec.classes * per_class;
  Dataset ds{ad::Tensor({n, spec.dim}), std::vector<std::size_t>(n), spec.classes};
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s) {
      const std::size_t row = c * per_class + s;
      ds.labels[row] = c;
      for (std::size_t j = 0; j < spec.dim; ++j) {
        const double v = centres[c].data()[j] + standard_normal(rng);
        ds.features(row, j) = static_cast<double>(static_cast<float>(v));
      }
    }
  }
  return ds;
}

}  // namespace

void Dataset::validate() const {
  if (labels.empty()) throw InputError("dataset is empty");
  if (features.rank() != 2 || features.rows() != labels.size()) {
    throw InputError("dataset features and labels disagree on N");
  }
  if (num_classes == 0) throw InputError("dataset has zero classes");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw InputError("label " + std::to_string(labels[i]) + " at sample " +
                       std::to_string(i) + " outside [0, " +
                       std::to_string(num_classes) + ")");
    }
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t y : labels) {
    if (y < num_classes) ++counts[y];
  }
  return counts;
}

void BlobSpec::validate() const {
  if (classes < 2) throw ConfigError("need at least 2 classes", "data.classes");
  if (per_class < 2) {
    throw ConfigError("need at least 2 samples per class", "data.per_class");
  }
  if (dim < 2) throw ConfigError("need dimension >= 2", "data.dim");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw ConfigError("separation must be a finite non-negative number",
                      "data.separation");
  }
}

Dataset make_blobs(const BlobSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto centres = draw_centres(spec, seed);
  Rng rng = make_rng(seed, kTrainNoise);
  return sample_blobs(spec, centres, spec.per_class, rng);
}

BlobSplit make_blob_split(const BlobSpec& spec, std::size_t test_per_class,
                          std::uint64_t seed) {
  spec.validate();
  if (test_per_class == 0) {
    throw ConfigError("test split needs samples", "data.test_per_class");
  }
  const auto centres = draw_centres(spec, seed);
  Rng train_rng = make_rng(seed, kTrainNoise);
  Rng test_rng = make_rng(seed, kTestNoise);
  return {sample_blobs(spec, centres, spec.per_class, train_rng),
          sample_blobs(spec, centres, test_per_class, test_rng)};
}

void AugmentConfig::validate() const {
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw ConfigError("jitter_sigma must be >= 0", "augment.jitter_sigma");
  }
  if (!(mask_prob >= 0.0 && mask_prob <= 1.0)) {
    throw ConfigError("mask_prob must lie in [0, 1]", "augment.mask_prob");
  }
  if (!(scale_lo > 0.0 && scale_lo <= 1.0 && scale_hi >= 1.0) ||
      !std::isfinite(scale_hi)) {
    throw ConfigError("scale range must satisfy 0 < lo <= 1 <= hi",
                      "augment.scale_lo");
  }
}

ad::Tensor augment(const ad::Tensor& x, const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  ad::Tensor out({x.rows(), x.cols()});
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double s = cfg.scale_lo == cfg.scale_hi
                         ? cfg.scale_lo
                         : uniform(rng, cfg.scale_lo, cfg.scale_hi);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double v = x(i, j);
      if (cfg.jitter_sigma > 0.0) v += cfg.jitter_sigma * standard_normal(rng);
      if (cfg.mask_prob > 0.0 && uniform(rng, 0.0, 1.0) < cfg.mask_prob) v = 0.0;
      out(i, j) = s * v;
    }
  }
  return out;
}

std::size_t LabelMask::count() const {
  return static_cast<std::size_t>(
      std::count(available.begin(), available.end(), char{1}));
}

LabelMask subsample_labels(const Dataset& ds, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("label fraction must lie in (0, 1]", "regime.label_fraction");
  }
  ds.validate();
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);

  LabelMask mask{std::vector<char>(ds.size(), 0), fraction};
  Rng rng(derive_seed(seed, 0x1abe1));
  for (auto& members : by_class) {
    const auto keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(members.size()) - 1e-9));
    shuffle(members, rng);
    for (std::size_t k = 0; k < std::min(keep, members.size()); ++k) {
      mask.available[members[k]] = 1;
    }
  }
  return mask;
}

Dataset labeled_subset(const Dataset& ds, const LabelMask& mask) {
  if (mask.available.size() != ds.size()) {
    throw DimensionError("label mask does not match the dataset");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (mask.available[i]) idx.push_back(i);
  }
  if (idx.empty()) throw ConfigError("no labeled samples available");
  return Dataset{gather_rows(ds.features, idx), gather_labels(ds, idx),
                 ds.num_classes};
}

BatchSampler::BatchSampler(std::size_t num_samples, std::size_t batch_size,
                           std::uint64_t shuffle_seed)
    : num_samples_(num_samples),
      batch_size_(batch_size),
      rng_(derive_seed(shuffle_seed, 0xba7c4)) {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1", "train.batch_size");
  if (num_samples == 0) throw ConfigError("cannot batch an empty dataset");
}

std::size_t BatchSampler::batches_per_epoch() const {
  return (num_samples_ + batch_size_ - 1) / batch_size_;
}

std::vector<std::vector<std::size_t>> BatchSampler::next_epoch() {
  std::vector<std::size_t> perm(num_samples_);
  for (std::size_t i = 0; i < num_samples_; ++i) perm[i] = i;
  shuffle(perm, rng_);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(batches_per_epoch());
  for (std::size_t start = 0; start < num_samples_; start += batch_size_) {
    const std::size_t end = std::min(num_samples_, start + batch_size_);
    out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                     perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  ++epoch_;
  return out;
}

ad::Tensor gather_rows(const ad::Tensor& features,
                       std::span<const std::size_t> indices) {
  const std::size_t d = features.cols();
  ad::Tensor out({indices.size(), d});
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= features.rows()) {
      throw InputError("row index " + std::to_string(indices[r]) + " out of range");
    }
    std::memcpy(&out.data()[r * d], &features.data()[indices[r] * d],
                d * sizeof(double));
  }
  return out;
}

std::vector<std::size_t> gather_labels(const Dataset& ds,
                                       std::span<const std::size_t> indices) {
  std::vector<std::size_t> out(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) out[r] = ds.labels.at(indices[r]);
  return out;
}

std::vector<std::uint8_t> encode_raw(const Dataset& ds) {
  ds.validate();
  const std::size_t n = ds.size(), d = ds.dim();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * n * d + 4 * n);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(d));
  put_u32(out, static_cast<std::uint32_t>(ds.num_classes));
  for (double v : ds.features.data()) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  for (std::size_t y : ds.labels) put_u32(out, static_cast<std::uint32_t>(y));
  return out;
}

Dataset decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw ParseError("truncated header: need " + std::to_string(kHeaderBytes) +
                         " bytes, missing " +
                         std::to_string(kHeaderBytes - bytes.size()),
                     bytes.size());
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("bad magic: expected \"TOCD\"", 0);
  }
  if (const std::uint32_t version = get_u32(bytes, 4); version != kVersion) {
    throw ParseError("unsupported version " + std::to_string(version), 4);
  }
  const std::uint64_t n = get_u32(bytes, 8);
  const std::uint64_t d = get_u32(bytes, 12);
  const std::uint64_t classes = get_u32(bytes, 16);
  if (n == 0) throw ParseError("header declares N = 0", 8);
  if (d == 0) throw ParseError("header declares d = 0", 12);
  if (classes == 0) throw ParseError("header declares C = 0", 16);

  const std::uint64_t expected = kHeaderBytes + 4 * n * d + 4 * n;
  if (bytes.size() < expected) {
    throw ParseError("truncated payload: header N*d implies " +
                         std::to_string(expected) + " bytes, missing " +
                         std::to_string(expected - bytes.size()) + " bytes",
                     bytes.size());
  }
  if (bytes.size() > expected) {
    throw ParseError("payload length mismatch: header N*d implies " +
                         std::to_string(expected) + " bytes but file has " +
                         std::to_string(bytes.size() - expected) +
                         " trailing bytes",
                     expected);
  }

  Dataset ds{ad::Tensor({n, d}), std::vector<std::size_t>(n), classes};
  std::size_t at = kHeaderBytes;
  for (double& v : ds.features.data()) {
    const float f = std::bit_cast<float>(get_u32(bytes, at));
    if (!std::isfinite(f)) throw ParseError("non-finite feature value", at);
    v = static_cast<double>(f);
    at += 4;
  }
  for (std::size_t i = 0; i < n; ++i, at += 4) {
    const std::uint32_t y = get_u32(bytes, at);
    if (y >= classes) {
      throw ParseError("label " + std::to_string(y) + " of sample " +
                           std::to_string(i) + " outside [0, " +
                           std::to_string(classes) + ")",
                       at);
    }
    ds.labels[i] = y;
  }
  return ds;
}

void save_raw(const Dataset& ds, const std::filesystem::path& path) {
  const auto bytes = encode_raw(ds);
  io::write_file_atomic(
      path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                             bytes.size()));
}

Dataset load_raw(const std::filesystem::path& path) {
  const auto bytes = io::read_bytes(path);
  return decode_raw(bytes);
}

}  // namespace tocomm::data
