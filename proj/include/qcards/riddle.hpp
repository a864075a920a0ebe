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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "qcards/error.hpp"
#include "qcards/game.hpp"
#include "qcards/gates.hpp"
#include "qcards/qudit.hpp"

namespace qcards {

enum class Difficulty { Easy, Medium, Hard };

inline constexpr std::string_view difficulty_token(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "?";
}

inline std::optional<Difficulty> difficulty_from_token(std::string_view s) {
  for (Difficulty d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard})
    if (difficulty_token(d) == s) return d;
  return std::nullopt;
}

/**
 * Goal stated on the exact outcome distribution rather than the state.
 *
 *  AllEqual      every qudit shows the same digit, each of the d digits
 *                with probability 1/d
 *  ShiftedPair   digit(second) = digit(first) + shift mod d, the first
 *                qudit uniform over all d digits
 *  QuditAlways   digit(first) == value with certainty
 */
struct OutcomePredicate {
  enum class Kind { AllEqual, ShiftedPair, QuditAlways };
  Kind kind = Kind::AllEqual;
  std::size_t first = 0;
  std::size_t second = 1;
  int shift = 0;
  int value = 0;

  friend bool operator==(const OutcomePredicate&, const OutcomePredicate&) = default;
};

using RiddleGoal = std::variant<StateVector, OutcomePredicate>;

struct Riddle {
  std::string id;
  std::string title;
  int dim = 2;
  int num_qudits = 1;
  std::vector<int> init;
  std::vector<Card> allowed;  // multiset, sorted
  RiddleGoal goal = OutcomePredicate{};
  int max_cards = 1;
  Difficulty difficulty = Difficulty::Easy;
  std::string explanation;

  friend bool operator==(const Riddle&, const Riddle&) = default;
};

using Solution = std::vector<Move>;

inline void validate_riddle(const Riddle& r) {
  auto bad = [&](const std::string& msg) {
    throw Error(Errc::invalid_argument, "riddle " + r.id + ": " + msg);
  };
  check_dimension(r.dim);
  if (r.num_qudits < 1 || r.num_qudits > kMaxQudits) bad("bad number of qudits");
  if (r.init.size() != static_cast<std::size_t>(r.num_qudits))
    bad("init needs one digit per qudit");
  for (int v : r.init)
    if (v < 0 || v >= r.dim) bad("init digit out of range");
  if (r.max_cards < 1) bad("max_cards must be at least 1");
  for (Card c : r.allowed)
    if (!gate_valid_for(c, r.dim))
      bad(std::string(card_token(c)) + " is not a gate at this dimension");
  if (const auto* s = std::get_if<StateVector>(&r.goal)) {
    if (s->dim() != r.dim || s->num_qudits() != r.num_qudits)
      bad("goal state shape does not match");
  } else {
    const auto& p = std::get<OutcomePredicate>(r.goal);
    const auto n = static_cast<std::size_t>(r.num_qudits);
    using K = OutcomePredicate::Kind;
    if (p.kind != K::AllEqual && p.first >= n) bad("predicate qudit out of range");
    if (p.kind == K::ShiftedPair && (p.second >= n || p.second == p.first))
      bad("predicate needs two distinct qudits");
    if (p.kind == K::QuditAlways && (p.value < 0 || p.value >= r.dim))
      bad("predicate digit out of range");
  }
}

/// Exact check on amplitudes; no sampling involved.
inline bool predicate_holds(const OutcomePredicate& p, const StateVector& s,
                            double tol = kNormTolerance) {
  const int d = s.dim();
  const double uniform = 1.0 / d;
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  using K = OutcomePredicate::Kind;
  switch (p.kind) {
    case K::AllEqual:
      for (int k = 0; k < d; ++k) {
        std::vector<int> digits(s.num_qudits(), k);
        if (!near(std::norm(s[s.index_of(digits)]), uniform)) return false;
      }
      return true;
    case K::ShiftedPair: {
      std::vector<double> joint(d * d, 0.0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Outcome o = s.outcome_of(i);
        joint[o.values[p.first] * d + o.values[p.second]] += std::norm(s[i]);
      }
      for (int v = 0; v < d; ++v)
        if (!near(joint[v * d + ((v + p.shift) % d + d) % d], uniform)) return false;
      return true;
    }
    case K::QuditAlways: {
      double mass = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s.outcome_of(i).values[p.first] == p.value) mass += std::norm(s[i]);
      return near(mass, 1.0);
    }
  }
  return false;
}

inline bool goal_reached(const Riddle& r, const StateVector& s) {
  if (const auto* target = std::get_if<StateVector>(&r.goal))
    return equal_up_to_global_phase(s, *target, kStateTolerance);
  return predicate_holds(std::get<OutcomePredicate>(r.goal), s);
}

inline StateVector riddle_start(const Riddle& r) {
  return basis_state(r.dim, r.init);
}

namespace detail {

inline void check_riddle_move(const Riddle& r, const Move& m) {
  if (!is_gate(m.card))
    throw Error(Errc::disallowed_card, "only gate cards can be used in riddles");
  if (m.targets.size() != static_cast<std::size_t>(gate_arity(m.card)))
    throw Error(Errc::illegal_move, std::string(card_token(m.card)) + " needs " +
                                        std::to_string(gate_arity(m.card)) +
                                        " target(s)");
  for (std::size_t t : m.targets)
    if (t >= static_cast<std::size_t>(r.num_qudits))
      throw Error(Errc::illegal_move,
                  "qudit " + std::to_string(t + 1) + " does not exist");
  if (m.card == Card::CX && m.targets[0] == m.targets[1])
    throw Error(Errc::illegal_move, "CX control and target must differ");
}

}  // namespace detail

/// Rejects moves outside the allowed multiset or beyond max_cards.
inline void check_allowed(const Riddle& r, const Solution& s) {
  if (s.size() > static_cast<std::size_t>(r.max_cards))
    throw Error(Errc::disallowed_card,
                "at most " + std::to_string(r.max_cards) + " cards may be played");
  std::map<Card, int> left;
  for (Card c : r.allowed) ++left[c];
  for (const Move& m : s) {
    if (left[m.card]-- <= 0)
      throw Error(Errc::disallowed_card,
                  std::string(card_token(m.card)) + " is not available (any more)");
    detail::check_riddle_move(r, m);
  }
}

/// Applies moves to the start state; only move shapes are validated.
inline StateVector run_moves(const Riddle& r, const Solution& s) {
  StateVector state = riddle_start(r);
  for (const Move& m : s) {
    detail::check_riddle_move(r, m);
    state = apply_gate(state, gate_matrix(m.card, r.dim), m.targets);
  }
  return state;
}

struct CheckResult {
  bool solved;
  StateVector final_state;
};

inline CheckResult check_solution(const Riddle& r, const Solution& s) {
  check_allowed(r, s);
  StateVector final_state = run_moves(r, s);
  const bool ok = goal_reached(r, final_state);
  return {ok, std::move(final_state)};
}

/// Every single move for the riddle's cards, sorted by (token, targets).
inline std::vector<Move> candidate_moves(const Riddle& r) {
  std::vector<Card> kinds = r.allowed;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  std::sort(kinds.begin(), kinds.end(),
            [](Card a, Card b) { return card_token(a) < card_token(b); });
  const auto n = static_cast<std::size_t>(r.num_qudits);
  std::vector<Move> out;
  for (Card c : kinds) {
    if (gate_arity(c) == 1) {
      for (std::size_t q = 0; q < n; ++q) out.push_back({c, {q}});
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) out.push_back({c, {a, b}});
    }
  }
  return out;
}

inline constexpr int kMaxSolveDepth = 8;

namespace detail {

class RiddleSearch {
 public:
  explicit RiddleSearch(const Riddle& r) : riddle_(r), moves_(candidate_moves(r)) {
    for (Card c : r.allowed) ++left_[c];
    for (const Move& m : moves_) gates_.push_back(gate_matrix(m.card, r.dim));
  }

  std::optional<Solution> run(const Solution& prefix, int limit) {
    const StateVector start = run_moves(riddle_, prefix);
    for (const Move& m : prefix) --left_[m.card];
    for (int depth = 0; depth <= limit; ++depth) {
      path_.clear();
      if (dfs(start, depth)) return path_;
    }
    return std::nullopt;
  }

 private:
  bool dfs(const StateVector& s, int depth_left) {
    if (depth_left == 0) return goal_reached(riddle_, s);
    const std::string key = memo_key(s, depth_left);
    if (failed_.contains(key)) return false;
    for (std::size_t i = 0; i < moves_.size(); ++i) {
      int& count = left_[moves_[i].card];
      if (count == 0) continue;
      --count;
      path_.push_back(moves_[i]);
      const bool found = dfs(apply_gate(s, gates_[i], moves_[i].targets), depth_left - 1);
      if (found) return true;
      path_.pop_back();
      ++count;
    }
    failed_.insert(key);
    return false;
  }

  // Rounded amplitudes plus the remaining cards and depth.
  std::string memo_key(const StateVector& s, int depth_left) const {
    std::string key;
    auto put = [&key](std::int64_t v) {
      key.append(reinterpret_cast<const char*>(&v), sizeof v);
    };
    for (const Amplitude& a : s.amplitudes()) {
      put(std::llround(a.real() * 1e9));
      put(std::llround(a.imag() * 1e9));
    }
    for (const auto& [card, n] : left_) put(n);
    put(depth_left);
    return key;
  }

  const Riddle& riddle_;
  std::vector<Move> moves_;
  std::vector<GateMatrix> gates_;
  std::map<Card, int> left_;
  Solution path_;
  std::unordered_set<std::string> failed_;
};

}  // namespace detail

/**
 * Iterative-deepening search for a shortest solution within
 * min(max_depth, max_cards) cards. Among shortest solutions the first in
 * lexicographic (token, targets) order is returned.
 */
inline std::optional<Solution> solve(const Riddle& r, int max_depth = kMaxSolveDepth) {
  if (max_depth < 0 || max_depth > kMaxSolveDepth)
    throw Error(Errc::invalid_argument,
                "search depth must be in 0.." + std::to_string(kMaxSolveDepth));
  validate_riddle(r);
  return detail::RiddleSearch(r).run({}, std::min(max_depth, r.max_cards));
}

/// Shortest completion of a partial solution; the prefix must be allowed.
inline std::optional<Solution> solve_continuation(const Riddle& r, const Solution& prefix,
                                                  int max_depth = kMaxSolveDepth) {
  if (max_depth < 0 || max_depth > kMaxSolveDepth)
    throw Error(Errc::invalid_argument,
                "search depth must be in 0.." + std::to_string(kMaxSolveDepth));
  validate_riddle(r);
  check_allowed(r, prefix);
  const int room = r.max_cards - static_cast<int>(prefix.size());
  return detail::RiddleSearch(r).run(prefix, std::min(max_depth, room));
}

/// The six riddles shipped with the game.
inline const std::vector<Riddle>& builtin_riddles() {
  static const std::vector<Riddle> riddles = [] {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Riddle> v;

    v.push_back({"1", "Both at once", 2, 1, {0}, {Card::H1, Card::X1},
                 StateVector(2, 1, {h, h}), 2, Difficulty::Easy,
                 "A Hadamard card turns a definite value into an equal "
                 "superposition of 0 and 1. Measuring it gives either value with "
                 "probability 1/2, which is where randomness enters a quantum "
                 "computer."});

    v.push_back({"2", "Phase steering", 2, 1, {0}, {Card::H1, Card::H1, Card::Z},
                 StateVector(2, 1, {0.0, 1.0}), 3, Difficulty::Easy,
                 "Two Hadamards undo each other, and a Z on a definite value only "
                 "adds an unobservable global sign. Put between the Hadamards, Z "
                 "flips the relative sign of the superposition and the second "
                 "Hadamard interferes it into |1>. Steering interference through "
                 "phases is what most quantum algorithms rely on."});

    v.push_back({"3", "Perfect partners", 2, 2, {0, 0}, {Card::CX, Card::H1, Card::X1},
                 StateVector(2, 2, {h, 0.0, 0.0, h}), 3, Difficulty::Medium,
                 "A superposition on the control followed by CX gives the Bell "
                 "state (|0,0>+|1,1>)/sqrt(2). Each value alone is random, yet "
                 "both always agree. Entangled pairs like this are the resource "
                 "behind teleportation and quantum key distribution."});

    OutcomePredicate opposite{OutcomePredicate::Kind::ShiftedPair, 0, 1, 1, 0};
    v.push_back({"4", "Opposites attract", 2, 2, {0, 0}, {Card::CX, Card::H1, Card::X1},
                 opposite, 3, Difficulty::Medium,
                 "Entanglement does not have to mean equal values: a shift before "
                 "or after the CX makes the two results always differ while each "
                 "stays a fair coin. Correlations, not values, are what "
                 "entanglement fixes."});

    OutcomePredicate all_equal{OutcomePredicate::Kind::AllEqual, 0, 1, 0, 0};
    v.push_back({"5", "Three of a kind", 3, 3, {0, 0, 0}, {Card::CX, Card::CX, Card::H1},
                 all_equal, 3, Difficulty::Hard,
                 "One qutrit Hadamard and two CX cards spread a three-way "
                 "superposition over three players: 0,0,0 or 1,1,1 or 2,2,2, each "
                 "with probability 1/3. Multi-party entangled states of this kind "
                 "are used for error correction and secret sharing."});

    v.push_back({"6", "Reaching the top", 3, 1, {0},
                 {Card::H1, Card::H1, Card::X1, Card::X1, Card::Z},
                 StateVector(3, 1, {0.0, 0.0, 1.0}), 3, Difficulty::Hard,
                 "Two X1 shifts are the direct route, but there are others: X1 "
                 "followed by two Hadamards works because the qutrit Hadamard "
                 "squared maps |k> to |-k mod 3>, and H1 Z H1 gets there purely "
                 "through interference of three phases."});

    for (auto& r : v) {
      std::sort(r.allowed.begin(), r.allowed.end());
      validate_riddle(r);
    }
    return v;
  }();
  return riddles;
}

inline const Riddle& find_riddle(const std::vector<Riddle>& riddles, std::string_view id) {
  for (const auto& r : riddles)
    if (r.id == id) return r;
  throw Error(Errc::unknown_riddle, "no riddle with id " + std::string(id));
}

}  // namespace qcards
