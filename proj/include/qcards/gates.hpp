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

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcards/error.hpp"
#include "qcards/qudit.hpp"

namespace qcards {

/// Every playable card. All but Steal are quantum gates.
enum class Card { X1, X2, Y, Z, H1, H2, CX, Steal };

inline constexpr std::array<Card, 8> kAllCards = {
    Card::X1, Card::X2, Card::Y, Card::Z, Card::H1, Card::H2, Card::CX, Card::Steal};

inline constexpr std::string_view card_token(Card c) {
  switch (c) {
    case Card::X1: return "X1";
    case Card::X2: return "X2";
    case Card::Y: return "Y";
    case Card::Z: return "Z";
    case Card::H1: return "H1";
    case Card::H2: return "H2";
    case Card::CX: return "CX";
    case Card::Steal: return "STEAL";
  }
  return "?";
}

/// Case-sensitive token lookup.
inline std::optional<Card> card_from_token(std::string_view token) {
  for (Card c : kAllCards)
    if (card_token(c) == token) return c;
  return std::nullopt;
}

inline constexpr bool is_gate(Card c) { return c != Card::Steal; }

inline constexpr int gate_arity(Card c) { return c == Card::CX ? 2 : 1; }

/// X2 and H2 only exist for qutrits.
inline constexpr bool gate_valid_for(Card c, int dim) {
  if (!is_gate(c)) return false;
  if (c == Card::X2 || c == Card::H2) return dim == 3;
  return dim == 2 || dim == 3;
}

namespace detail {

inline Amplitude root_of_unity(int dim, long long power) {
  const long long p = ((power % dim) + dim) % dim;
  if (p == 0) return 1.0;
  // Exact values keep d=2 products free of rounding noise.
  if (dim == 2) return -1.0;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / dim;
  return {std::cos(angle), std::sin(angle)};
}

inline GateMatrix shift(int dim, int by) {
  std::vector<Amplitude> e(dim * dim);
  for (int k = 0; k < dim; ++k) e[((k + by) % dim) * dim + k] = 1.0;
  return GateMatrix(dim, 1, std::move(e));
}

inline GateMatrix fourier(int dim) {
  std::vector<Amplitude> e(dim * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k)
      e[j * dim + k] = root_of_unity(dim, static_cast<long long>(j) * k) * scale;
  return GateMatrix(dim, 1, std::move(e));
}

}  // namespace detail

/**
 * Canonical unitary for a gate card, with w = exp(2 pi i / d):
 *
 *   X1  |k> -> |k+1 mod d>          X2  |k> -> |k+2 mod d>   (d = 3)
 *   Z   |k> -> w^(k+1) |k>          (d = 2: diag(-1, 1))
 *   Y   d = 2: Pauli Y; d = 3: X1 * Z
 *   H1  F[j][k] = w^(jk) / sqrt(d)  H2  F^dagger              (d = 3)
 *   CX  |c,t> -> |c, t+c mod d>, control first
 *
 * Z carries an overall factor w relative to diag(w^k). That factor is a
 * global phase of the gate and invisible in every measurement, but it makes
 * Z|0> = -|0> at d = 2.
 */
inline GateMatrix gate_matrix(Card kind, int dim) {
  check_dimension(dim);
  if (!gate_valid_for(kind, dim))
    throw Error(Errc::invalid_argument,
                std::string(card_token(kind)) + " is not a gate at dimension " +
                    std::to_string(dim));
  switch (kind) {
    case Card::X1: return detail::shift(dim, 1);
    case Card::X2: return detail::shift(dim, 2);
    case Card::Z: {
      std::vector<Amplitude> e(dim * dim);
      for (int k = 0; k < dim; ++k) e[k * dim + k] = detail::root_of_unity(dim, k + 1);
      return GateMatrix(dim, 1, std::move(e));
    }
    case Card::Y:
      if (dim == 2) {
        return GateMatrix(2, 1, {0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0});
      }
      return detail::shift(dim, 1) * gate_matrix(Card::Z, dim);
    case Card::H1: return detail::fourier(dim);
    case Card::H2: return detail::fourier(dim).adjoint();
    case Card::CX: {
      const int n = dim * dim;
      std::vector<Amplitude> e(n * n);
      for (int c = 0; c < dim; ++c)
        for (int t = 0; t < dim; ++t)
          e[(c * dim + (t + c) % dim) * n + (c * dim + t)] = 1.0;
      return GateMatrix(dim, 2, std::move(e));
    }
    case Card::Steal: break;
  }
  throw Error(Errc::invalid_argument, "not a gate");
}

/// max |(G^dagger G - I)_ij| <= tol.
inline bool verify_unitary(const GateMatrix& g, double tol = kNormTolerance) {
  const auto gg = g.adjoint() * g;
  return max_abs_diff(gg, GateMatrix::identity(g.dim(), g.arity())) <= tol;
}

/// Row-major square matrix given as a flat list; checks squareness first.
inline bool verify_unitary(std::span<const Amplitude> entries, double tol = kNormTolerance) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(entries.size())));
  if (n == 0 || n * n != entries.size())
    throw Error(Errc::dimension_mismatch, "matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Amplitude acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += std::conj(entries[k * n + i]) * entries[k * n + j];
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  return true;
}

enum class Version { Easy, TwoD, ThreeD };

inline constexpr std::string_view version_token(Version v) {
  switch (v) {
    case Version::Easy: return "easy";
    case Version::TwoD: return "2d";
    case Version::ThreeD: return "3d";
  }
  return "?";
}

inline std::optional<Version> version_from_token(std::string_view s) {
  for (Version v : {Version::Easy, Version::TwoD, Version::ThreeD})
    if (version_token(v) == s) return v;
  return std::nullopt;
}

inline constexpr int version_dimension(Version v) {
  return v == Version::ThreeD ? 3 : 2;
}

/// Cards of one game version and how many copies each player contributes.
struct CardSet {
  Version version = Version::Easy;
  int dim = 2;
  std::map<Card, int> copies_per_player;

  bool contains(Card c) const { return copies_per_player.contains(c); }

  std::vector<Card> gate_kinds() const {
    std::vector<Card> out;
    for (const auto& [c, n] : copies_per_player)
      if (is_gate(c)) out.push_back(c);
    return out;
  }
};

/**
 * Default card sets. Easy leaves out the phase cards (Y, Z); 2d adds them;
 * 3d has every gate at d = 3. Easy gets five copies per gate so three rounds
 * of five-card hands still fit the deck.
 */
inline CardSet card_set(Version v) {
  CardSet s{v, version_dimension(v), {}};
  switch (v) {
    case Version::Easy:
      for (Card c : {Card::X1, Card::H1, Card::CX}) s.copies_per_player[c] = 5;
      break;
    case Version::TwoD:
      for (Card c : {Card::X1, Card::H1, Card::CX, Card::Y, Card::Z})
        s.copies_per_player[c] = 4;
      break;
    case Version::ThreeD:
      for (Card c : {Card::X1, Card::X2, Card::Y, Card::Z, Card::H1, Card::H2, Card::CX})
        s.copies_per_player[c] = 4;
      break;
  }
  s.copies_per_player[Card::Steal] = 1;
  return s;
}

}  // namespace qcards
