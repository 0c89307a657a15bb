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

#ifndef TOCOMM_CHANNEL_H_
#define TOCOMM_CHANNEL_H_

// Wireless link between the edge device and the server.
//
// A feature row of even width k is read as k/2 complex symbols: the first
// half holds real parts, the second half imaginary parts. The received row
// is h (.) z + n with n ~ CN(0, sigma_n^2 I); for AWGN h = 1, for Rayleigh
// each symbol draws h ~ CN(0, 1). Noise and fading are constants for the
// backward pass, so gradients reach z exactly.

#include <string>
#include <string_view>
#include <vector>

#include "tocomm/autodiff.h"
#include "tocomm/random.h"

namespace tocomm::channel {

enum class Kind { kAwgn, kRayleigh };

std::string_view to_string(Kind kind);
// Accepts "awgn" / "rayleigh" (case-insensitive). Throws ConfigError.
Kind parse_kind(std::string_view text);

struct ChannelConfig {
  Kind kind = Kind::kAwgn;
  double snr_db = 10.0;
  double power = 1.0;
  bool equalize = true;
  double eq_epsilon = 1e-3;
  // Disables noise entirely (the snr -> infinity limit).
  bool noiseless = false;

  void validate() const;
  // sigma_n^2; 0 when noiseless.
  double noise_variance() const;
};

// sigma_n^2 = P / 10^(snr_db / 10).
double snr_to_sigma(double snr_db, double power);

// Rescales every row to (1/k) ||row||^2 = power. Differentiable. Requires an
// even k >= 2; a zero row raises DegenerateInputError.
ad::Var power_normalize(const ad::Var& z, double power);

struct ComplexFeature {
  ad::Tensor re;  // [batch x k/2]
  ad::Tensor im;  // [batch x k/2]
};

ComplexFeature pack_complex(const ad::Tensor& z);
ad::Tensor unpack_complex(const ComplexFeature& c);

// One channel draw for a batch: per-symbol coefficients and noise.
struct Realization {
  std::vector<double> h_re, h_im;  // [batch * k/2]; all ones/zeros for AWGN
  std::vector<double> n_re, n_im;  // [batch * k/2]
};

Realization draw_realization(std::size_t batch, std::size_t symbols,
                             const ChannelConfig& cfg, Rng& rng);

// Applies a fixed realization. With cfg.equalize on a Rayleigh link the
// receiver output is (h z + n) conj(h) / (|h|^2 + eq_epsilon).
ad::Var apply(const ad::Var& z, const Realization& draw,
              const ChannelConfig& cfg);

// Draws a realization and applies it. z should already satisfy the power
// constraint.
ad::Var transmit(const ad::Var& z, const ChannelConfig& cfg, Rng& rng);

}  // namespace tocomm::channel

#endif  // TOCOMM_CHANNEL_H_
