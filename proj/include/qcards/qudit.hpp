// Copyright 2026 The qcards Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcards/error.hpp"
#include "qcards/rng.hpp"

namespace qcards {

using Amplitude = std::complex<double>;

/// Unitarity and normalization tolerance.
inline constexpr double kNormTolerance = 1e-10;
/// Default tolerance for comparing two states.
inline constexpr double kStateTolerance = 1e-9;
/// Probabilities below this are treated as zero in listings.
inline constexpr double kProbabilityCutoff = 1e-12;
inline constexpr int kMaxQudits = 8;

inline void check_dimension(int dim) {
  if (dim != 2 && dim != 3)
    throw Error(Errc::invalid_argument,
                "dimension must be 2 or 3, got " + std::to_string(dim));
}

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// One digit per measured qudit; position k belongs to qudit k.
struct Outcome {
  std::vector<int> values;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(values[i]);
    }
    return s;
  }

  friend auto operator<=>(const Outcome&, const Outcome&) = default;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Histogram {
  std::map<Outcome, std::size_t> counts;
  std::size_t shots = 0;

  std::size_t count(const Outcome& o) const {
    auto it = counts.find(o);
    return it == counts.end() ? 0 : it->second;
  }
};

/**
 * Dense row-major d^k x d^k matrix acting on k = arity qudits.
 *
 * For two-qudit matrices the first qudit is the most significant digit of
 * the row/column index, so |c,t> has index c*d + t.
 */
class GateMatrix {
 public:
  GateMatrix() = default;

  GateMatrix(int dim, int arity, std::vector<Amplitude> entries)
      : dim_(dim), arity_(arity), entries_(std::move(entries)) {
    if (arity < 1 || arity > 2)
      throw Error(Errc::invalid_argument, "gate arity must be 1 or 2");
    const std::size_t n = size();
    if (entries_.size() != n * n)
      throw Error(Errc::dimension_mismatch,
                  "gate matrix needs " + std::to_string(n * n) + " entries");
  }

  static GateMatrix identity(int dim, int arity = 1) {
    const std::size_t n = ipow(static_cast<std::size_t>(dim), arity);
    std::vector<Amplitude> e(n * n);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return GateMatrix(dim, arity, std::move(e));
  }

  int dim() const noexcept { return dim_; }
  int arity() const noexcept { return arity_; }
  std::size_t size() const noexcept {
    return ipow(static_cast<std::size_t>(dim_), static_cast<std::size_t>(arity_));
  }

  const Amplitude& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * size() + col];
  }
  Amplitude& operator()(std::size_t row, std::size_t col) {
    return entries_[row * size() + col];
  }

  std::span<const Amplitude> entries() const noexcept { return entries_; }

  GateMatrix adjoint() const {
    GateMatrix r = *this;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  friend GateMatrix operator*(const GateMatrix& a, const GateMatrix& b) {
    if (a.dim_ != b.dim_ || a.arity_ != b.arity_)
      throw Error(Errc::dimension_mismatch, "gate product shape mismatch");
    const std::size_t n = a.size();
    GateMatrix r(a.dim_, a.arity_, std::vector<Amplitude>(n * n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Amplitude aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  /// Largest entrywise modulus of a - b.
  friend double max_abs_diff(const GateMatrix& a, const GateMatrix& b) {
    if (a.entries_.size() != b.entries_.size())
      throw Error(Errc::dimension_mismatch, "gate shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      m = std::max(m, std::abs(a.entries_[i] - b.entries_[i]));
    return m;
  }

 private:
  int dim_ = 2;
  int arity_ = 1;
  std::vector<Amplitude> entries_;
};

/**
 * Pure state of n qudits of dimension d, stored as d^n amplitudes.
 *
 * Basis index i encodes (v1,...,vn) big-endian in base d: qudit 0 is the
 * most significant digit, matching the left-to-right ket |v1,v2,...>.
 */
class StateVector {
 public:
  /// Validates shape, finiteness and unit norm.
  StateVector(int dim, int num_qudits, std::vector<Amplitude> amps)
      : dim_(dim), num_qudits_(num_qudits), amps_(std::move(amps)) {
    check_dimension(dim);
    if (num_qudits < 1 || num_qudits > kMaxQudits)
      throw Error(Errc::invalid_argument,
                  "number of qudits must be in 1.." + std::to_string(kMaxQudits));
    if (amps_.size() != ipow(dim, num_qudits))
      throw Error(Errc::dimension_mismatch,
                  "expected " + std::to_string(ipow(dim, num_qudits)) +
                      " amplitudes, got " + std::to_string(amps_.size()));
    for (const auto& a : amps_)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(Errc::invalid_argument, "non-finite amplitude");
    if (std::abs(norm_squared() - 1.0) > kNormTolerance)
      throw Error(Errc::not_normalized, "state is not normalized");
  }

  int dim() const noexcept { return dim_; }
  int num_qudits() const noexcept { return num_qudits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  Outcome outcome_of(std::size_t index) const {
    Outcome o;
    o.values.assign(num_qudits_, 0);
    for (int q = num_qudits_ - 1; q >= 0; --q) {
      o.values[q] = static_cast<int>(index % dim_);
      index /= dim_;
    }
    return o;
  }

  std::size_t index_of(std::span<const int> values) const {
    if (values.size() != static_cast<std::size_t>(num_qudits_))
      throw Error(Errc::dimension_mismatch, "outcome length mismatch");
    std::size_t idx = 0;
    for (int v : values) {
      if (v < 0 || v >= dim_)
        throw Error(Errc::index_out_of_range, "digit out of range");
      idx = idx * dim_ + static_cast<std::size_t>(v);
    }
    return idx;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  int dim_;
  int num_qudits_;
  std::vector<Amplitude> amps_;
};

inline StateVector basis_state(int dim, std::span<const int> values) {
  check_dimension(dim);
  if (values.empty())
    throw Error(Errc::invalid_argument, "basis state needs at least one qudit");
  if (values.size() > static_cast<std::size_t>(kMaxQudits))
    throw Error(Errc::invalid_argument, "too many qudits");
  std::size_t idx = 0;
  for (int v : values) {
    if (v < 0 || v >= dim)
      throw Error(Errc::digit_out_of_range,
                  "digit " + std::to_string(v) + " is not below " +
                      std::to_string(dim));
    idx = idx * dim + static_cast<std::size_t>(v);
  }
  std::vector<Amplitude> amps(ipow(dim, values.size()));
  amps[idx] = 1.0;
  return StateVector(dim, static_cast<int>(values.size()), std::move(amps));
}

inline StateVector basis_state(int dim, std::initializer_list<int> values) {
  return basis_state(dim, std::span<const int>(values.begin(), values.size()));
}

namespace detail {

inline std::size_t stride_of(int dim, int num_qudits, std::size_t qudit) {
  return ipow(dim, num_qudits - 1 - qudit);
}

inline void check_targets(int num_qudits, std::span<const std::size_t> targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= static_cast<std::size_t>(num_qudits))
      throw Error(Errc::index_out_of_range,
                  "qudit index " + std::to_string(targets[i] + 1) +
                      " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j])
        throw Error(Errc::duplicate_target, "duplicate target qudit");
  }
}

/**
 * Applies g to the listed qudits of a raw amplitude vector by index
 * arithmetic. No normalization is assumed or enforced, so the kernel is
 * also usable on arbitrary (e.g. unnormalized) vectors.
 */
inline std::vector<Amplitude> apply_gate_kernel(
    int dim, int num_qudits, std::span<const Amplitude> in, const GateMatrix& g,
    std::span<const std::size_t> targets) {
  const std::size_t k = targets.size();
  const std::size_t block = g.size();
  std::vector<std::size_t> offsets(block, 0);
  for (std::size_t s = 0; s < block; ++s) {
    std::size_t rem = s;
    for (std::size_t j = k; j-- > 0;) {
      offsets[s] += (rem % dim) * stride_of(dim, num_qudits, targets[j]);
      rem /= dim;
    }
  }

  std::vector<Amplitude> out(in.size());
  std::vector<Amplitude> local(block);
  for (std::size_t base = 0; base < in.size(); ++base) {
    bool is_base = true;
    for (std::size_t t : targets)
      if ((base / stride_of(dim, num_qudits, t)) % dim != 0) {
        is_base = false;
        break;
      }
    if (!is_base) continue;
    for (std::size_t s = 0; s < block; ++s) local[s] = in[base + offsets[s]];
    for (std::size_t r = 0; r < block; ++r) {
      Amplitude acc = 0.0;
      for (std::size_t c = 0; c < block; ++c) acc += g(r, c) * local[c];
      out[base + offsets[r]] = acc;
    }
  }
  return out;
}

/// Index into probs with cumulative mass exceeding u; skips zero entries.
inline std::size_t draw_index(std::span<const double> probs, double u) {
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last = i;
    if (u < cum) return i;
  }
  return last;
}

}  // namespace detail

/// (I x ... x g x ... x I)|state>; the first target takes the gate's first slot.
inline StateVector apply_gate(const StateVector& state, const GateMatrix& g,
                              std::span<const std::size_t> targets) {
  if (g.dim() != state.dim())
    throw Error(Errc::dimension_mismatch, "gate dimension does not match state");
  if (targets.size() != static_cast<std::size_t>(g.arity()))
    throw Error(Errc::dimension_mismatch,
                "gate acts on " + std::to_string(g.arity()) + " qudit(s), got " +
                    std::to_string(targets.size()) + " target(s)");
  detail::check_targets(state.num_qudits(), targets);
  auto out = detail::apply_gate_kernel(state.dim(), state.num_qudits(),
                                       state.amplitudes(), g, targets);
  return StateVector(state.dim(), state.num_qudits(), std::move(out));
}

inline StateVector apply_gate(const StateVector& state, const GateMatrix& g,
                              std::initializer_list<std::size_t> targets) {
  return apply_gate(state, g,
                    std::span<const std::size_t>(targets.begin(), targets.size()));
}

/// Born probabilities; entries below kProbabilityCutoff are omitted.
inline std::map<Outcome, double> probabilities(const StateVector& state) {
  std::map<Outcome, double> p;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double pi = std::norm(state[i]);
    if (pi >= kProbabilityCutoff) p.emplace(state.outcome_of(i), pi);
  }
  return p;
}

/// Marginal distribution of the listed qudits, values in listed order.
inline std::map<Outcome, double> marginal(const StateVector& state,
                                          std::span<const std::size_t> qudits) {
  if (qudits.empty())
    throw Error(Errc::invalid_argument, "no qudits to measure");
  detail::check_targets(state.num_qudits(), qudits);
  std::map<Outcome, double> acc;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double pi = std::norm(state[i]);
    if (pi == 0.0) continue;
    const Outcome full = state.outcome_of(i);
    Outcome part;
    for (std::size_t q : qudits) part.values.push_back(full.values[q]);
    acc[part] += pi;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second < kProbabilityCutoff; });
  return acc;
}

struct Projection {
  double probability;
  StateVector state;
};

/// Projects onto qudits[j] == values[j] and renormalizes.
inline Projection project(const StateVector& state,
                          std::span<const std::size_t> qudits,
                          std::span<const int> values) {
  if (qudits.empty())
    throw Error(Errc::invalid_argument, "no qudits to measure");
  if (qudits.size() != values.size())
    throw Error(Errc::dimension_mismatch, "one value per measured qudit needed");
  detail::check_targets(state.num_qudits(), qudits);
  std::vector<Amplitude> amps(state.size());
  double p = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Outcome full = state.outcome_of(i);
    bool match = true;
    for (std::size_t j = 0; j < qudits.size(); ++j)
      if (full.values[qudits[j]] != values[j]) {
        match = false;
        break;
      }
    if (!match) continue;
    amps[i] = state[i];
    p += std::norm(state[i]);
  }
  if (p < kProbabilityCutoff)
    throw Error(Errc::invalid_argument, "projection onto an impossible outcome");
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : amps) a *= scale;
  return {p, StateVector(state.dim(), state.num_qudits(), std::move(amps))};
}

struct Measurement {
  Outcome outcome;
  StateVector state;
};

/// Samples a full outcome and collapses onto that basis state. One draw.
inline Measurement measure_all(const StateVector& state, Rng& rng) {
  std::vector<double> probs(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) probs[i] = std::norm(state[i]);
  const std::size_t idx = detail::draw_index(probs, rng.uniform());
  Outcome o = state.outcome_of(idx);
  StateVector collapsed = basis_state(state.dim(), o.values);
  return {std::move(o), std::move(collapsed)};
}

/// Samples the listed qudits from their marginal; the rest stay coherent.
inline Measurement measure_subset(const StateVector& state,
                                  std::span<const std::size_t> qudits, Rng& rng) {
  const auto dist = marginal(state, qudits);
  std::vector<double> probs;
  std::vector<const Outcome*> keys;
  for (const auto& [o, p] : dist) {
    keys.push_back(&o);
    probs.push_back(p);
  }
  const Outcome chosen = *keys[detail::draw_index(probs, rng.uniform())];
  auto proj = project(state, qudits, chosen.values);
  return {chosen, std::move(proj.state)};
}

inline Measurement measure_subset(const StateVector& state,
                                  std::initializer_list<std::size_t> qudits,
                                  Rng& rng) {
  return measure_subset(
      state, std::span<const std::size_t>(qudits.begin(), qudits.size()), rng);
}

/// shots independent full measurements; the input is not modified.
inline Histogram sample(const StateVector& state, std::size_t shots, Rng& rng) {
  if (shots < 1) throw Error(Errc::invalid_argument, "shots must be at least 1");
  std::vector<double> cum(state.size());
  double total = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    total += std::norm(state[i]);
    cum[i] = total;
  }
  Histogram h;
  h.shots = shots;
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t idx = it == cum.end() ? cum.size() - 1
                                      : static_cast<std::size_t>(it - cum.begin());
    while (std::norm(state[idx]) == 0.0 && idx > 0) --idx;
    ++h.counts[state.outcome_of(idx)];
  }
  return h;
}

/**
 * True iff ||a - c b|| <= tol for some |c| = 1. The phase c is taken from
 * the largest-magnitude amplitude of b.
 */
inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                     double tol = kStateTolerance) {
  if (a.dim() != b.dim() || a.num_qudits() != b.num_qudits())
    throw Error(Errc::dimension_mismatch, "states have different shapes");
  std::size_t k = 0;
  for (std::size_t i = 1; i < b.size(); ++i)
    if (std::abs(b[i]) > std::abs(b[k])) k = i;
  Amplitude c = 1.0;
  if (std::abs(a[k]) > 0.0 && std::abs(b[k]) > 0.0) {
    c = a[k] / b[k];
    c /= std::abs(c);
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dist2 += std::norm(a[i] - c * b[i]);
  return std::sqrt(dist2) <= tol;
}

}  // namespace qcards
