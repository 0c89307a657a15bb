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

#include "tocomm/channel.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

#include "tocomm/errors.h"

namespace tocomm::channel {
namespace {

void require_even_width(std::size_t k, const char* op) {
  if (k < 2 || k % 2 != 0) {
    throw DimensionError(std::string(op) +
                         ": feature width must be even and >= 2, got " +
                         std::to_string(k));
  }
}

}  // namespace

std::string_view to_string(Kind kind) {
  return kind == Kind::kAwgn ? "awgn" : "rayleigh";
}

Kind parse_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "awgn") return Kind::kAwgn;
  if (lower == "rayleigh") return Kind::kRayleigh;
  throw ConfigError("unknown channel kind '" + std::string(text) +
                        "' (expected awgn or rayleigh)",
                    "channel.kind");
}

void ChannelConfig::validate() const {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw ConfigError("channel power must be positive", "channel.power");
  }
  if (!std::isfinite(snr_db)) {
    throw ConfigError("channel snr_db must be finite", "channel.snr_db");
  }
  if (equalize && !(eq_epsilon > 0.0)) {
    throw ConfigError("eq_epsilon must be positive when equalizing",
                      "channel.eq_epsilon");
  }
  if (!noiseless && !(noise_variance() > 0.0)) {
    throw ConfigError("snr_db too large: noise variance underflows to zero",
                      "channel.snr_db");
  }
}

double ChannelConfig::noise_variance() const {
  return noiseless ? 0.0 : snr_to_sigma(snr_db, power);
}

double snr_to_sigma(double snr_db, double power) {
  if (!(power > 0.0)) throw ConfigError("power must be positive", "channel.power");
  return power / std::pow(10.0, snr_db / 10.0);
}

ad::Var power_normalize(const ad::Var& z, double power) {
  if (z.value().rank() != 2) {
    throw DimensionError("power_normalize: expected [batch x k]");
  }
  const std::size_t k = z.cols();
  require_even_width(k, "power_normalize");
  if (!(power > 0.0)) {
    throw ConfigError("power must be positive", "channel.power");
  }
  try {
    return ad::row_normalize(z, std::sqrt(static_cast<double>(k) * power));
  } catch (const DegenerateInputError&) {
    throw DegenerateInputError(
        "power_normalize: a feature row has zero norm and cannot meet the "
        "power constraint");
  }
}

ComplexFeature pack_complex(const ad::Tensor& z) {
  const std::size_t k = z.cols();
  require_even_width(k, "pack_complex");
  const std::size_t batch = z.rows(), half = k / 2;
  ComplexFeature c{ad::Tensor({batch, half}), ad::Tensor({batch, half})};
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t s = 0; s < half; ++s) {
      c.re(i, s) = z(i, s);
      c.im(i, s) = z(i, half + s);
    }
  }
  return c;
}

ad::Tensor unpack_complex(const ComplexFeature& c) {
  if (c.re.shape() != c.im.shape()) {
    throw DimensionError("unpack_complex: real and imaginary shapes differ");
  }
  const std::size_t batch = c.re.rows(), half = c.re.cols();
  ad::Tensor z({batch, 2 * half});
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t s = 0; s < half; ++s) {
      z(i, s) = c.re(i, s);
      z(i, half + s) = c.im(i, s);
    }
  }
  return z;
}

Realization draw_realization(std::size_t batch, std::size_t symbols,
                             const ChannelConfig& cfg, Rng& rng) {
  const std::size_t n = batch * symbols;
  Realization r;
  r.h_re.assign(n, 1.0);
  r.h_im.assign(n, 0.0);
  r.n_re.assign(n, 0.0);
  r.n_im.assign(n, 0.0);
  if (cfg.kind == Kind::kRayleigh) {
    const double s = std::sqrt(0.5);
    for (std::size_t i = 0; i < n; ++i) {
      r.h_re[i] = s * standard_normal(rng);
      r.h_im[i] = s * standard_normal(rng);
    }
  }
  const double sigma2 = cfg.noise_variance();
  if (sigma2 > 0.0) {
    const double s = std::sqrt(sigma2 / 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      r.n_re[i] = s * standard_normal(rng);
      r.n_im[i] = s * standard_normal(rng);
    }
  }
  return r;
}

ad::Var apply(const ad::Var& z, const Realization& draw,
              const ChannelConfig& cfg) {
  if (z.value().rank() != 2) throw DimensionError("transmit: expected [batch x k]");
  const std::size_t batch = z.rows(), k = z.cols();
  require_even_width(k, "transmit");
  const std::size_t half = k / 2, n = batch * half;
  if (draw.h_re.size() != n || draw.n_re.size() != n) {
    throw DimensionError("transmit: realization does not match the batch");
  }

  // Every symbol maps as out = a * z + b with complex a, b.
  std::vector<double> a_re(n), a_im(n), b_re(n), b_im(n);
  const bool equalize = cfg.equalize && cfg.kind == Kind::kRayleigh;
  for (std::size_t i = 0; i < n; ++i) {
    const double hr = draw.h_re[i], hi = draw.h_im[i];
    const double nr = draw.n_re[i], ni = draw.n_im[i];
    if (equalize) {
      // (h z + n) conj(h) / (|h|^2 + eps)
      const double mag2 = hr * hr + hi * hi;
      const double denom = mag2 + cfg.eq_epsilon;
      a_re[i] = mag2 / denom;
      a_im[i] = 0.0;
      b_re[i] = (nr * hr + ni * hi) / denom;
      b_im[i] = (ni * hr - nr * hi) / denom;
    } else {
      a_re[i] = hr;
      a_im[i] = hi;
      b_re[i] = nr;
      b_im[i] = ni;
    }
  }

  const ad::Tensor& in = z.value();
  ad::Tensor out({batch, k});
  for (std::size_t r = 0; r < batch; ++r) {
    for (std::size_t s = 0; s < half; ++s) {
      const std::size_t i = r * half + s;
      const double zr = in(r, s), zi = in(r, half + s);
      out(r, s) = a_re[i] * zr - a_im[i] * zi + b_re[i];
      out(r, half + s) = a_im[i] * zr + a_re[i] * zi + b_im[i];
    }
  }
  return z.graph().record(
      "transmit", {z}, std::move(out),
      [a_re = std::move(a_re), a_im = std::move(a_im), batch, half](
          std::span<const double> g, ad::GradBuffers grads) {
        if (!grads[0]) return;
        auto& dz = *grads[0];
        const std::size_t k = 2 * half;
        for (std::size_t r = 0; r < batch; ++r) {
          for (std::size_t s = 0; s < half; ++s) {
            const std::size_t i = r * half + s;
            const double gr = g[r * k + s], gi = g[r * k + half + s];
            // Transpose of [[a_re, -a_im], [a_im, a_re]].
            dz[r * k + s] += a_re[i] * gr + a_im[i] * gi;
            dz[r * k + half + s] += -a_im[i] * gr + a_re[i] * gi;
          }
        }
      });
}

ad::Var transmit(const ad::Var& z, const ChannelConfig& cfg, Rng& rng) {
  if (z.value().rank() != 2) throw DimensionError("transmit: expected [batch x k]");
  require_even_width(z.cols(), "transmit");
  const Realization draw = draw_realization(z.rows(), z.cols() / 2, cfg, rng);
  return apply(z, draw, cfg);
}

}  // namespace tocomm::channel
