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

#ifndef TOCOMM_INFOTHEORY_H_
#define TOCOMM_INFOTHEORY_H_

// Exact information measures on finite joint distributions, and checks of the
// mutual-information identities behind contrastive pre-training on the
// graphical model
//
//   X' <- Y -> X -> Z -> Zh        (optionally X' -> Z' -> Zh')
//
// All quantities are in bits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tocomm/random.h"

namespace tocomm::info {

struct Variable {
  std::string name;
  std::size_t size = 0;
};

using VarSet = std::vector<std::string>;

// Probability table over the product alphabet of `variables`, row-major with
// the first variable most significant.
class DiscreteJoint {
 public:
  // Entries must be >= 0 and sum to 1 within 1e-12 (InputError otherwise).
  DiscreteJoint(std::vector<Variable> variables, std::vector<double> table);

  const std::vector<Variable>& variables() const { return variables_; }
  std::span<const double> table() const { return table_; }
  // Throws InputError for an unknown name.
  std::size_t index_of(std::string_view name) const;
  double probability(std::span<const std::size_t> assignment) const;

  // Marginal over `names`, in that order.
  DiscreteJoint marginal(const VarSet& names) const;

 private:
  std::vector<Variable> variables_;
  std::vector<double> table_;
};

double entropy(const DiscreteJoint& joint, const VarSet& vars);
// I(A;B). A and B must be disjoint (InputError otherwise).
double mutual_information(const DiscreteJoint& joint, const VarSet& a,
                          const VarSet& b);
// I(A;B|C) = sum_c p(c) I(A;B | C = c). A, B, C pairwise disjoint.
double conditional_mi(const DiscreteJoint& joint, const VarSet& a,
                      const VarSet& b, const VarSet& c);
// Binary entropy H2(p).
double binary_entropy(double p);

// Row-stochastic matrix: rows index the conditioning value.
using Stochastic = std::vector<std::vector<double>>;

Stochastic identity_channel(std::size_t size);
// Deterministic map x -> mapping[x] as a stochastic matrix.
Stochastic deterministic_map(std::span<const std::size_t> mapping,
                             std::size_t out_size);

// Variable names used by Pgm::joint().
inline constexpr std::string_view kY = "Y";
inline constexpr std::string_view kX = "X";
inline constexpr std::string_view kXView = "X'";
inline constexpr std::string_view kZ = "Z";
inline constexpr std::string_view kZHat = "Zh";
inline constexpr std::string_view kZView = "Z'";
inline constexpr std::string_view kZHatView = "Zh'";

struct Pgm {
  std::vector<double> p_y;
  Stochastic x_given_y;   // p(X | Y)
  Stochastic xv_given_y;  // p(X' | Y)
  Stochastic encoder;     // p(Z | X)
  Stochastic channel;     // p(Zh | Z)
  // Optional second branch fed by the X' view.
  std::optional<Stochastic> view_encoder;  // p(Z' | X')
  std::optional<Stochastic> view_channel;  // p(Zh' | Z')

  std::size_t y_size() const { return p_y.size(); }
  std::size_t x_size() const;
  std::size_t xv_size() const;
  std::size_t z_size() const { return channel.size(); }
  bool has_view_branch() const { return view_encoder && view_channel; }

  // Shapes consistent and rows normalized (InputError otherwise).
  void validate() const;
  // p(y) p(x|y) p(x'|y) p(z|x) p(zh|z) [p(z'|x') p(zh'|z')].
  DiscreteJoint joint() const;
};

// --- Identity checks ---------------------------------------------------------

struct DecompositionReport {
  double x_zh = 0.0;        // I(X;Zh)
  double x_xv_zh = 0.0;     // I(X,X';Zh)
  double redundant = 0.0;   // I(X;Zh|X')
  double shared = 0.0;      // I(X';Zh)
  double residual_a = 0.0;  // |I(X;Zh) - I(X,X';Zh)|
  double residual_b = 0.0;  // |I(X,X';Zh) - redundant - shared|
  bool holds = false;
};
// I(X;Zh) = I(X,X';Zh) = I(X;Zh|X') + I(X';Zh), each within `tol` bits.
DecompositionReport verify_decomposition(const Pgm& pgm, double tol = 1e-9);

struct SurrogateReport {
  double zh_xv = 0.0;      // I(Zh;X')
  double zh_zhv = 0.0;     // I(Zh;Zh')
  double slack = 0.0;      // zh_xv - zh_zhv
  bool holds = false;
};
// I(Zh;X') >= I(Zh;Zh') - tol. Requires the view branch (InputError).
SurrogateReport verify_surrogate_bound(const Pgm& pgm, double tol = 1e-9);

struct DataProcessingReport {
  double y_x = 0.0, y_z = 0.0, y_zh = 0.0;
  bool holds = false;
};
// I(Y;X) >= I(Y;Z) >= I(Y;Zh) - tol.
DataProcessingReport verify_data_processing(const Pgm& pgm, double tol = 1e-9);

struct SeparationReport {
  double gap = 0.0;  // I(Zh;X'|Y)
  bool holds = false;
};
// Evaluates I(Zh;X'|Y) on the exact joint; holds when it is <= tol.
SeparationReport d_separation_check(const Pgm& pgm, double tol = 1e-9);
// Same test on an arbitrary joint containing Y, X' and Zh.
SeparationReport d_separation_check(const DiscreteJoint& joint, double tol = 1e-9);

// --- Encoder search ----------------------------------------------------------

enum class Target {
  kLabel,  // maximize I(Zh;Y)
  kView,   // maximize I(Zh;X')
};

struct EncoderSearch {
  std::vector<std::size_t> mapping;  // x -> z
  double value = 0.0;
  std::size_t cases = 0;
};

// Exhaustive search over deterministic encoders X -> Z (|Z| = rows of
// `channel`), scoring the target through `channel`. Encoders are visited in
// lexicographic order of (mapping[0], mapping[1], ...) and the first
// maximizer wins; later encoders replace it only when better by more than
// 1e-12 bits. Throws SizeError above `max_cases`.
EncoderSearch enumerate_optimal_encoder(const Pgm& pgm, const Stochastic& channel,
                                        Target target,
                                        std::size_t max_cases = 1'000'000);

struct TheoremReport {
  double i_xy = 0.0;            // I(X;Y)
  double i_sup = 0.0;           // I(Zh_sup;Y), noiseless link
  double i_ssl = 0.0;           // I(Zh_ssl;Y), noisy link
  double i_xy_given_xv = 0.0;   // I(X;Y|X')
  double eps_c = 0.0;           // max I(Z;X') - max I(Zh;X')
  double eps_c_at_encoder = 0.0;  // I(Z_ssl;X') - I(Zh_ssl;X')
  double lower_bound = 0.0;     // i_xy - i_xy_given_xv - eps_c
  double h_sup_given_y = 0.0;   // H(Zh_sup|Y), reported only
  double h_ssl_given_y = 0.0;   // H(Zh_ssl|Y), reported only
  // Slacks of the three inequalities; each must be >= -tol.
  double slack_sup = 0.0;       // i_xy - i_sup
  double slack_order = 0.0;     // i_sup - i_ssl
  double slack_lower = 0.0;     // i_ssl - lower_bound
  std::vector<std::size_t> sup_encoder, ssl_encoder;
  bool chain_holds = false;
};

// Checks I(X;Y) >= I(Zh_sup;Y) >= I(Zh_ssl;Y) >= I(X;Y) - I(X;Y|X') - eps_c.
// Zh_sup maximizes I(Zh;Y) over encoders with a noiseless link; Zh_ssl
// maximizes I(Zh;X') through pgm.channel (pgm.encoder is ignored). eps_c is
// the drop of the optimal view information caused by the channel. The
// lower bound relies on an identity encoder being available, i.e.
// |Z| >= |X|.
TheoremReport verify_theorem1(const Pgm& pgm, double tol = 1e-9,
                              std::size_t max_cases = 1'000'000);

// --- Random instances and sweeps ---------------------------------------------

// Random probability vector (normalized exponential draws).
std::vector<double> random_distribution(std::size_t size, Rng& rng);
Stochastic random_stochastic(std::size_t rows, std::size_t cols, Rng& rng);
// Random joint over the given alphabet sizes (named V0, V1, ...).
DiscreteJoint random_joint(std::span<const std::size_t> sizes, Rng& rng);

struct PgmShape {
  std::size_t min_alphabet = 2;
  std::size_t max_alphabet = 4;
  bool view_branch = false;
  // Draw |Z| >= |X| so that the identity encoder is available.
  bool z_covers_x = false;
};
// Random PGM; the channel is (1 - a) I + a R with a ~ U(0, 1) and R random.
Pgm random_pgm(const PgmShape& shape, Rng& rng);

struct CheckSummary {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  // Smallest observed slack (negative means violated by that much).
  double worst_slack = 0.0;
  // Human-readable dump of the first failing instance, if any.
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

// Chain rule and non-negativity on random unconstrained joints.
std::vector<CheckSummary> sweep_joint_identities(std::size_t count,
                                                 std::uint64_t seed,
                                                 double tol = 1e-9);
// Decomposition, surrogate bound, data processing and d-separation on
// random PGM-factorized instances.
std::vector<CheckSummary> sweep_pgm_identities(std::size_t count,
                                               std::uint64_t seed,
                                               double tol = 1e-9);
// Theorem chain on random instances with |Z| >= |X|.
CheckSummary sweep_theorem1(std::size_t count, std::uint64_t seed,
                            double tol = 1e-9);

std::string describe(const Pgm& pgm);

}  // namespace tocomm::info

#endif  // TOCOMM_INFOTHEORY_H_
