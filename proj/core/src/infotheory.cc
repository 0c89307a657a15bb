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

#include "tocomm/infotheory.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "tocomm/errors.h"

namespace tocomm::info {
namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kTieTolerance = 1e-12;

double plogp_ratio(double p, double num, double den) {
  return p > 0.0 ? p * std::log2(p * num / den) : 0.0;
}

// I(T;Zh) for a joint given as matrix p[t][zh].
double matrix_mi(const std::vector<std::vector<double>>& p) {
  if (p.empty()) return 0.0;
  const std::size_t rows = p.size(), cols = p[0].size();
  std::vector<double> pr(rows, 0.0), pc(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      pr[i] += p[i][j];
      pc[j] += p[i][j];
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (p[i][j] > 0.0) mi += p[i][j] * std::log2(p[i][j] / (pr[i] * pc[j]));
  return mi;
}

// out[t][k] = sum_s in[t][s] * m[s][k]
std::vector<std::vector<double>> compose(const std::vector<std::vector<double>>& in,
                                         const Stochastic& m) {
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  std::vector<std::vector<double>> out(in.size(), std::vector<double>(cols, 0.0));
  for (std::size_t t = 0; t < in.size(); ++t)
    for (std::size_t s = 0; s < m.size(); ++s)
      if (in[t][s] != 0.0)
        for (std::size_t k = 0; k < cols; ++k) out[t][k] += in[t][s] * m[s][k];
  return out;
}

// Joint p(t, z) for a deterministic encoder z = mapping[x], given p(t, x).
std::vector<std::vector<double>> push_forward(
    const std::vector<std::vector<double>>& p_tx,
    std::span<const std::size_t> mapping, std::size_t z_size) {
  std::vector<std::vector<double>> out(p_tx.size(), std::vector<double>(z_size, 0.0));
  for (std::size_t t = 0; t < p_tx.size(); ++t)
    for (std::size_t x = 0; x < mapping.size(); ++x) out[t][mapping[x]] += p_tx[t][x];
  return out;
}

void check_stochastic(const Stochastic& m, std::size_t rows, std::size_t cols,
                      const char* what) {
  if (m.size() != rows) {
    throw InputError(std::string(what) + ": expected " + std::to_string(rows) +
                     " rows, got " + std::to_string(m.size()));
  }
  for (const auto& row : m) {
    if (row.size() != cols || cols == 0) {
      throw InputError(std::string(what) + ": ragged or empty row");
    }
    double total = 0.0;
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError(std::string(what) + ": negative or non-finite entry");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw InputError(std::string(what) + ": row does not sum to 1");
    }
  }
}

std::vector<std::size_t> indices_of(const DiscreteJoint& joint, const VarSet& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(joint.index_of(n));
  return idx;
}

void require_disjoint(const DiscreteJoint& joint,
                      std::initializer_list<const VarSet*> sets) {
  std::vector<std::size_t> seen;
  for (const VarSet* s : sets) {
    for (std::size_t i : indices_of(joint, *s)) {
      if (std::find(seen.begin(), seen.end(), i) != seen.end()) {
        throw InputError("variable sets overlap on '" + joint.variables()[i].name + "'");
      }
      seen.push_back(i);
    }
  }
}

std::size_t alphabet(const DiscreteJoint& joint, const VarSet& names) {
  std::size_t n = 1;
  for (std::size_t i : indices_of(joint, names)) n *= joint.variables()[i].size;
  return n;
}

VarSet concat(std::initializer_list<const VarSet*> sets) {
  VarSet out;
  for (const VarSet* s : sets) out.insert(out.end(), s->begin(), s->end());
  return out;
}

std::string name(std::string_view v) { return std::string(v); }

// p(t, x) where t is Y (label) or X' (view).
std::vector<std::vector<double>> target_by_x(const Pgm& pgm, Target target) {
  const std::size_t nx = pgm.x_size();
  if (target == Target::kLabel) {
    std::vector<std::vector<double>> p(pgm.y_size(), std::vector<double>(nx, 0.0));
    for (std::size_t y = 0; y < pgm.y_size(); ++y)
      for (std::size_t x = 0; x < nx; ++x) p[y][x] = pgm.p_y[y] * pgm.x_given_y[y][x];
    return p;
  }
  std::vector<std::vector<double>> p(pgm.xv_size(), std::vector<double>(nx, 0.0));
  for (std::size_t y = 0; y < pgm.y_size(); ++y)
    for (std::size_t v = 0; v < pgm.xv_size(); ++v)
      for (std::size_t x = 0; x < nx; ++x)
        p[v][x] += pgm.p_y[y] * pgm.xv_given_y[y][v] * pgm.x_given_y[y][x];
  return p;
}

double conditional_entropy_given_target(const std::vector<std::vector<double>>& p_tz) {
  double h = 0.0;
  for (const auto& row : p_tz) {
    const double pt = std::accumulate(row.begin(), row.end(), 0.0);
    for (double v : row)
      if (v > 0.0) h -= v * std::log2(v / pt);
  }
  return h;
}

std::string format_stochastic(const Stochastic& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& row : m) {
    os << "    [";
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? ", " : "") << row[j];
    os << "]\n";
  }
  return os.str();
}

void record(CheckSummary& s, double slack, double tol, const std::string& dump) {
  ++s.instances;
  if (s.instances == 1 || slack < s.worst_slack) s.worst_slack = slack;
  if (slack < -tol) {
    if (s.failures == 0) s.first_failure = dump;
    ++s.failures;
  }
}

}  // namespace

// --- DiscreteJoint -----------------------------------------------------------

DiscreteJoint::DiscreteJoint(std::vector<Variable> variables,
                             std::vector<double> table)
    : variables_(std::move(variables)), table_(std::move(table)) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].size == 0) {
      throw InputError("variable '" + variables_[i].name + "' has an empty alphabet");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (variables_[j].name == variables_[i].name) {
        throw InputError("duplicate variable '" + variables_[i].name + "'");
      }
    }
    n *= variables_[i].size;
  }
  if (table_.size() != n) {
    throw InputError("joint table has " + std::to_string(table_.size()) +
                     " entries, alphabet product is " + std::to_string(n));
  }
  double total = 0.0;
  for (double p : table_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InputError("joint table entries must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InputError("joint table sums to " + std::to_string(total) + ", not 1");
  }
}

std::size_t DiscreteJoint::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  throw InputError("unknown variable '" + std::string(name) + "'");
}

double DiscreteJoint::probability(std::span<const std::size_t> assignment) const {
  if (assignment.size() != variables_.size()) {
    throw InputError("assignment length does not match the variable count");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (assignment[i] >= variables_[i].size) throw InputError("assignment out of range");
    flat = flat * variables_[i].size + assignment[i];
  }
  return table_[flat];
}

DiscreteJoint DiscreteJoint::marginal(const VarSet& names) const {
  const auto keep = indices_of(*this, names);
  std::vector<Variable> vars;
  for (std::size_t i : keep) vars.push_back(variables_[i]);

  // Stride of each source variable inside the marginal table.
  std::vector<std::size_t> out_stride(variables_.size(), 0);
  std::size_t stride = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    out_stride[keep[k]] += stride;
    stride *= variables_[keep[k]].size;
  }
  std::vector<double> out(stride, 0.0);
  std::vector<std::size_t> digit(variables_.size(), 0);
  std::size_t target = 0;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    out[target] += table_[flat];
    // Increment the mixed-radix counter (last variable fastest).
    for (std::size_t v = variables_.size(); v-- > 0;) {
      if (++digit[v] < variables_[v].size) {
        target += out_stride[v];
        break;
      }
      target -= out_stride[v] * (variables_[v].size - 1);
      digit[v] = 0;
    }
  }
  // Re-normalize away accumulated rounding so the invariant holds exactly
  // enough for the constructor check.
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& p : out) p /= total;
  return DiscreteJoint(std::move(vars), std::move(out));
}

double entropy(const DiscreteJoint& joint, const VarSet& vars) {
  const DiscreteJoint m = joint.marginal(vars);
  double h = 0.0;
  for (double p : m.table())
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double mutual_information(const DiscreteJoint& joint, const VarSet& a,
                          const VarSet& b) {
  require_disjoint(joint, {&a, &b});
  const std::size_t na = alphabet(joint, a), nb = alphabet(joint, b);
  const DiscreteJoint m = joint.marginal(concat({&a, &b}));
  const auto t = m.table();
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      pa[i] += t[i * nb + j];
      pb[j] += t[i * nb + j];
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      mi += plogp_ratio(t[i * nb + j], 1.0, pa[i] * pb[j]);
  return mi;
}

double conditional_mi(const DiscreteJoint& joint, const VarSet& a,
                      const VarSet& b, const VarSet& c) {
  require_disjoint(joint, {&a, &b, &c});
  const std::size_t na = alphabet(joint, a), nb = alphabet(joint, b),
                    nc = alphabet(joint, c);
  const DiscreteJoint m = joint.marginal(concat({&c, &a, &b}));
  const auto t = m.table();
  double cmi = 0.0;
  std::vector<double> pa(na), pb(nb);
  for (std::size_t k = 0; k < nc; ++k) {
    const double* block = t.data() + k * na * nb;
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    double pc = 0.0;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        pa[i] += block[i * nb + j];
        pb[j] += block[i * nb + j];
        pc += block[i * nb + j];
      }
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        cmi += plogp_ratio(block[i * nb + j], pc, pa[i] * pb[j]);
  }
  return cmi;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

Stochastic identity_channel(std::size_t size) {
  Stochastic m(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) m[i][i] = 1.0;
  return m;
}

Stochastic deterministic_map(std::span<const std::size_t> mapping,
                             std::size_t out_size) {
  Stochastic m(mapping.size(), std::vector<double>(out_size, 0.0));
  for (std::size_t x = 0; x < mapping.size(); ++x) {
    if (mapping[x] >= out_size) throw InputError("mapping target out of range");
    m[x][mapping[x]] = 1.0;
  }
  return m;
}

// --- Pgm ---------------------------------------------------------------------

std::size_t Pgm::x_size() const {
  return x_given_y.empty() ? 0 : x_given_y[0].size();
}

std::size_t Pgm::xv_size() const {
  return xv_given_y.empty() ? 0 : xv_given_y[0].size();
}

void Pgm::validate() const {
  if (p_y.empty()) throw InputError("pgm: p(Y) is empty");
  double total = 0.0;
  for (double p : p_y) {
    if (!(p >= 0.0)) throw InputError("pgm: negative p(Y)");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("pgm: p(Y) does not sum to 1");
  check_stochastic(x_given_y, y_size(), x_size(), "p(X|Y)");
  check_stochastic(xv_given_y, y_size(), xv_size(), "p(X'|Y)");
  if (channel.empty()) throw InputError("pgm: empty channel");
  check_stochastic(encoder, x_size(), z_size(), "p(Z|X)");
  check_stochastic(channel, z_size(), channel[0].size(), "p(Zh|Z)");
  if (view_encoder.has_value() != view_channel.has_value()) {
    throw InputError("pgm: view branch needs both encoder and channel");
  }
  if (has_view_branch()) {
    if (view_channel->empty()) throw InputError("pgm: empty view channel");
    check_stochastic(*view_encoder, xv_size(), view_channel->size(), "p(Z'|X')");
    check_stochastic(*view_channel, view_channel->size(), (*view_channel)[0].size(),
                     "p(Zh'|Z')");
  }
}

DiscreteJoint Pgm::joint() const {
  validate();
  const std::size_t ny = y_size(), nx = x_size(), nv = xv_size(), nz = z_size(),
                    nzh = channel[0].size();
  std::vector<Variable> vars{{name(kY), ny},  {name(kX), nx},  {name(kXView), nv},
                             {name(kZ), nz}, {name(kZHat), nzh}};
  std::size_t nzv = 1, nzhv = 1;
  if (has_view_branch()) {
    nzv = view_channel->size();
    nzhv = (*view_channel)[0].size();
    vars.push_back({name(kZView), nzv});
    vars.push_back({name(kZHatView), nzhv});
  }
  std::vector<double> table;
  table.reserve(ny * nx * nv * nz * nzh * nzv * nzhv);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t z = 0; z < nz; ++z)
          for (std::size_t zh = 0; zh < nzh; ++zh) {
            const double base = p_y[y] * x_given_y[y][x] * xv_given_y[y][v] *
                                encoder[x][z] * channel[z][zh];
            if (!has_view_branch()) {
              table.push_back(base);
              continue;
            }
            for (std::size_t zv = 0; zv < nzv; ++zv)
              for (std::size_t zhv = 0; zhv < nzhv; ++zhv)
                table.push_back(base * (*view_encoder)[v][zv] * (*view_channel)[zv][zhv]);
          }
  const double total = std::accumulate(table.begin(), table.end(), 0.0);
  for (double& p : table) p /= total;
  return DiscreteJoint(std::move(vars), std::move(table));
}

// --- Identity checks ---------------------------------------------------------

DecompositionReport verify_decomposition(const Pgm& pgm, double tol) {
  const DiscreteJoint j = pgm.joint();
  const VarSet x{name(kX)}, xv{name(kXView)}, zh{name(kZHat)}, both{name(kX), name(kXView)};
  DecompositionReport r;
  r.x_zh = mutual_information(j, x, zh);
  r.x_xv_zh = mutual_information(j, both, zh);
  r.redundant = conditional_mi(j, x, zh, xv);
  r.shared = mutual_information(j, xv, zh);
  r.residual_a = std::abs(r.x_zh - r.x_xv_zh);
  r.residual_b = std::abs(r.x_xv_zh - r.redundant - r.shared);
  r.holds = r.residual_a <= tol && r.residual_b <= tol;
  return r;
}

SurrogateReport verify_surrogate_bound(const Pgm& pgm, double tol) {
  if (!pgm.has_view_branch()) {
    throw InputError("surrogate bound needs the X' -> Z' -> Zh' branch");
  }
  const DiscreteJoint j = pgm.joint();
  SurrogateReport r;
  r.zh_xv = mutual_information(j, {name(kZHat)}, {name(kXView)});
  r.zh_zhv = mutual_information(j, {name(kZHat)}, {name(kZHatView)});
  r.slack = r.zh_xv - r.zh_zhv;
  r.holds = r.slack >= -tol;
  return r;
}

DataProcessingReport verify_data_processing(const Pgm& pgm, double tol) {
  const DiscreteJoint j = pgm.joint();
  const VarSet y{name(kY)};
  DataProcessingReport r;
  r.y_x = mutual_information(j, y, {name(kX)});
  r.y_z = mutual_information(j, y, {name(kZ)});
  r.y_zh = mutual_information(j, y, {name(kZHat)});
  r.holds = r.y_x - r.y_z >= -tol && r.y_z - r.y_zh >= -tol;
  return r;
}

SeparationReport d_separation_check(const DiscreteJoint& joint, double tol) {
  SeparationReport r;
  r.gap = conditional_mi(joint, {name(kZHat)}, {name(kXView)}, {name(kY)});
  r.holds = r.gap <= tol;
  return r;
}

SeparationReport d_separation_check(const Pgm& pgm, double tol) {
  return d_separation_check(pgm.joint(), tol);
}

// --- Encoder search ----------------------------------------------------------

EncoderSearch enumerate_optimal_encoder(const Pgm& pgm, const Stochastic& channel,
                                        Target target, std::size_t max_cases) {
  const std::size_t nx = pgm.x_size();
  if (nx == 0 || channel.empty()) throw InputError("encoder search: empty alphabet");
  const std::size_t nz = channel.size();
  check_stochastic(channel, nz, channel[0].size(), "p(Zh|Z)");

  // nz^nx with overflow guard.
  std::size_t cases = 1;
  for (std::size_t i = 0; i < nx; ++i) {
    if (cases > max_cases / nz) {
      throw SizeError("encoder search space " + std::to_string(nz) + "^" +
                      std::to_string(nx) + " exceeds the limit of " +
                      std::to_string(max_cases));
    }
    cases *= nz;
  }
  if (cases > max_cases) throw SizeError("encoder search space exceeds the limit");

  const auto p_tx = target_by_x(pgm, target);
  EncoderSearch best;
  best.value = -std::numeric_limits<double>::infinity();
  best.cases = cases;
  std::vector<std::size_t> mapping(nx, 0);
  for (std::size_t c = 0; c < cases; ++c) {
    const double value = matrix_mi(compose(push_forward(p_tx, mapping, nz), channel));
    if (value > best.value + kTieTolerance) {
      best.value = value;
      best.mapping = mapping;
    }
    // Lexicographic successor, mapping[0] most significant.
    for (std::size_t i = nx; i-- > 0;) {
      if (++mapping[i] < nz) break;
      mapping[i] = 0;
    }
  }
  return best;
}

TheoremReport verify_theorem1(const Pgm& pgm, double tol, std::size_t max_cases) {
  pgm.validate();
  const std::size_t nz = pgm.z_size();
  const Stochastic noiseless = identity_channel(nz);

  TheoremReport r;
  const DiscreteJoint xy = pgm.joint();
  r.i_xy = mutual_information(xy, {name(kX)}, {name(kY)});
  r.i_xy_given_xv = conditional_mi(xy, {name(kX)}, {name(kY)}, {name(kXView)});

  const EncoderSearch sup = enumerate_optimal_encoder(pgm, noiseless, Target::kLabel, max_cases);
  const EncoderSearch ssl = enumerate_optimal_encoder(pgm, pgm.channel, Target::kView, max_cases);
  const EncoderSearch view_noiseless =
      enumerate_optimal_encoder(pgm, noiseless, Target::kView, max_cases);
  r.sup_encoder = sup.mapping;
  r.ssl_encoder = ssl.mapping;
  r.i_sup = sup.value;

  const auto p_yx = target_by_x(pgm, Target::kLabel);
  const auto p_vx = target_by_x(pgm, Target::kView);
  const auto ssl_label = compose(push_forward(p_yx, ssl.mapping, nz), pgm.channel);
  r.i_ssl = matrix_mi(ssl_label);
  r.eps_c = view_noiseless.value - ssl.value;
  r.eps_c_at_encoder = matrix_mi(push_forward(p_vx, ssl.mapping, nz)) - ssl.value;
  r.lower_bound = r.i_xy - r.i_xy_given_xv - r.eps_c;
  r.h_sup_given_y = conditional_entropy_given_target(push_forward(p_yx, sup.mapping, nz));
  r.h_ssl_given_y = conditional_entropy_given_target(ssl_label);

  r.slack_sup = r.i_xy - r.i_sup;
  r.slack_order = r.i_sup - r.i_ssl;
  r.slack_lower = r.i_ssl - r.lower_bound;
  r.chain_holds = r.slack_sup >= -tol && r.slack_order >= -tol && r.slack_lower >= -tol;
  return r;
}

// --- Random instances and sweeps ---------------------------------------------

std::vector<double> random_distribution(std::size_t size, Rng& rng) {
  std::vector<double> p(size);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform(rng, 0.0, 1.0));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

Stochastic random_stochastic(std::size_t rows, std::size_t cols, Rng& rng) {
  Stochastic m(rows);
  for (auto& row : m) row = random_distribution(cols, rng);
  return m;
}

DiscreteJoint random_joint(std::span<const std::size_t> sizes, Rng& rng) {
  std::vector<Variable> vars;
  std::size_t n = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    vars.push_back({"V" + std::to_string(i), sizes[i]});
    n *= sizes[i];
  }
  return DiscreteJoint(std::move(vars), random_distribution(n, rng));
}

namespace {

std::size_t draw_size(std::size_t lo, std::size_t hi, Rng& rng) {
  return lo + static_cast<std::size_t>(uniform_index(rng, hi - lo + 1));
}

Stochastic noisy_channel(std::size_t size, Rng& rng) {
  const double a = uniform(rng, 0.0, 1.0);
  Stochastic m = random_stochastic(size, size, rng);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      m[i][j] = (1.0 - a) * (i == j ? 1.0 : 0.0) + a * m[i][j];
  return m;
}

}  // namespace

Pgm random_pgm(const PgmShape& shape, Rng& rng) {
  if (shape.min_alphabet < 1 || shape.max_alphabet < shape.min_alphabet) {
    throw ConfigError("invalid alphabet range");
  }
  Pgm pgm;
  const std::size_t ny = draw_size(shape.min_alphabet, shape.max_alphabet, rng);
  const std::size_t nx = draw_size(shape.min_alphabet, shape.max_alphabet, rng);
  const std::size_t nv = draw_size(shape.min_alphabet, shape.max_alphabet, rng);
  const std::size_t z_lo = shape.z_covers_x ? std::max(nx, shape.min_alphabet)
                                            : shape.min_alphabet;
  const std::size_t nz = draw_size(z_lo, std::max(z_lo, shape.max_alphabet), rng);
  pgm.p_y = random_distribution(ny, rng);
  pgm.x_given_y = random_stochastic(ny, nx, rng);
  pgm.xv_given_y = random_stochastic(ny, nv, rng);
  pgm.encoder = random_stochastic(nx, nz, rng);
  pgm.channel = noisy_channel(nz, rng);
  if (shape.view_branch) {
    const std::size_t nzv = draw_size(shape.min_alphabet, shape.max_alphabet, rng);
    pgm.view_encoder = random_stochastic(nv, nzv, rng);
    pgm.view_channel = noisy_channel(nzv, rng);
  }
  return pgm;
}

std::string describe(const Pgm& pgm) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "  p(Y) = [";
  for (std::size_t i = 0; i < pgm.p_y.size(); ++i) os << (i ? ", " : "") << pgm.p_y[i];
  os << "]\n";
  os << "  p(X|Y) =\n" << format_stochastic(pgm.x_given_y);
  os << "  p(X'|Y) =\n" << format_stochastic(pgm.xv_given_y);
  os << "  p(Z|X) =\n" << format_stochastic(pgm.encoder);
  os << "  p(Zh|Z) =\n" << format_stochastic(pgm.channel);
  if (pgm.has_view_branch()) {
    os << "  p(Z'|X') =\n" << format_stochastic(*pgm.view_encoder);
    os << "  p(Zh'|Z') =\n" << format_stochastic(*pgm.view_channel);
  }
  return os.str();
}

std::vector<CheckSummary> sweep_joint_identities(std::size_t count,
                                                 std::uint64_t seed, double tol) {
  Rng rng = make_rng(seed, 31);
  CheckSummary chain;
  chain.name = "chain rule I(A,B;C) = I(A;C) + I(B;C|A)";
  CheckSummary nonneg;
  nonneg.name = "non-negativity of I(A;B), I(A;B|C)";
  CheckSummary upper;
  upper.name = "I(A;B) <= min(H(A), H(B))";
  const VarSet a{"V0"}, b{"V1"}, c{"V2"};
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t sizes[3] = {draw_size(2, 4, rng), draw_size(2, 4, rng),
                                  draw_size(2, 4, rng)};
    const DiscreteJoint j = random_joint(sizes, rng);
    const double lhs = mutual_information(j, {"V0", "V1"}, c);
    const double rhs = mutual_information(j, a, c) + conditional_mi(j, b, c, a);
    const std::string dump = "joint sizes " + std::to_string(sizes[0]) + "x" +
                             std::to_string(sizes[1]) + "x" + std::to_string(sizes[2]) +
                             " at instance " + std::to_string(n);
    record(chain, -std::abs(lhs - rhs), tol, dump);
    record(nonneg, std::min(mutual_information(j, a, b), conditional_mi(j, a, b, c)),
           tol, dump);
    record(upper,
           std::min(entropy(j, a), entropy(j, b)) - mutual_information(j, a, b), tol,
           dump);
  }
  return {chain, nonneg, upper};
}

std::vector<CheckSummary> sweep_pgm_identities(std::size_t count,
                                               std::uint64_t seed, double tol) {
  Rng rng = make_rng(seed, 32);
  CheckSummary decomposition;
  decomposition.name = "decomposition I(X;Zh) = I(X;Zh|X') + I(X';Zh)";
  CheckSummary surrogate;
  surrogate.name = "surrogate bound I(Zh;X') >= I(Zh;Zh')";
  CheckSummary dpi;
  dpi.name = "data processing I(Y;X) >= I(Y;Z) >= I(Y;Zh)";
  CheckSummary separation;
  separation.name = "d-separation I(Zh;X'|Y) = 0";
  PgmShape shape;
  shape.view_branch = true;
  for (std::size_t n = 0; n < count; ++n) {
    const Pgm pgm = random_pgm(shape, rng);
    const std::string dump = "instance " + std::to_string(n) + ":\n" + describe(pgm);
    const auto dec = verify_decomposition(pgm, tol);
    record(decomposition, -std::max(dec.residual_a, dec.residual_b), tol, dump);
    record(surrogate, verify_surrogate_bound(pgm, tol).slack, tol, dump);
    const auto dp = verify_data_processing(pgm, tol);
    record(dpi, std::min(dp.y_x - dp.y_z, dp.y_z - dp.y_zh), tol, dump);
    record(separation, -d_separation_check(pgm, tol).gap, tol, dump);
  }
  return {decomposition, surrogate, dpi, separation};
}

CheckSummary sweep_theorem1(std::size_t count, std::uint64_t seed, double tol) {
  Rng rng = make_rng(seed, 33);
  CheckSummary s;
  s.name = "theorem chain I(X;Y) >= I(Zh_sup;Y) >= I(Zh_ssl;Y) >= lower bound";
  PgmShape shape;
  shape.z_covers_x = true;
  for (std::size_t n = 0; n < count; ++n) {
    const Pgm pgm = random_pgm(shape, rng);
    const TheoremReport r = verify_theorem1(pgm, tol);
    std::ostringstream dump;
    dump << std::setprecision(17) << "instance " << n << ": I(X;Y)=" << r.i_xy
         << " I(Zh_sup;Y)=" << r.i_sup << " I(Zh_ssl;Y)=" << r.i_ssl
         << " I(X;Y|X')=" << r.i_xy_given_xv << " eps_c=" << r.eps_c << "\n"
         << describe(pgm);
    record(s, std::min({r.slack_sup, r.slack_order, r.slack_lower}), tol, dump.str());
  }
  return s;
}

}  // namespace tocomm::info
