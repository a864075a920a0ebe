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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcards/error.hpp"
#include "qcards/gates.hpp"
#include "qcards/qudit.hpp"
#include "qcards/rng.hpp"

namespace qcards {

/// 0-based seat index. Seat 0 is "player 1" in every external format.
using PlayerId = std::size_t;

enum class Style { Competitive, Cooperative };

inline constexpr std::string_view style_token(Style s) {
  return s == Style::Competitive ? "competitive" : "cooperative";
}

inline std::optional<Style> style_from_token(std::string_view s) {
  if (s == "competitive") return Style::Competitive;
  if (s == "cooperative") return Style::Cooperative;
  return std::nullopt;
}

struct GameConfig {
  Version version = Version::ThreeD;
  Style style = Style::Competitive;
  int num_players = 2;
  int num_rounds = 3;
  int hand_size = 5;
  std::uint64_t seed = 0;
  /// Copies per player, replacing the card set default for that card.
  std::map<Card, int> deck_overrides;
  /// Unset: amplitudes are shown in cooperative play and hidden otherwise.
  std::optional<bool> reveal_state;

  int dim() const { return version_dimension(version); }
  bool reveals_state() const {
    return reveal_state.value_or(style == Style::Cooperative);
  }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/**
 * A card play. For gate cards, targets are 0-based qudit indices (control
 * first for CX); for Steal, targets holds the single victim seat.
 */
struct Move {
  Card card = Card::X1;
  std::vector<std::size_t> targets;

  friend auto operator<=>(const Move&, const Move&) = default;
  friend bool operator==(const Move&, const Move&) = default;
};

struct PlayedGate {
  PlayerId player = 0;
  Move move;
  friend bool operator==(const PlayedGate&, const PlayedGate&) = default;
};

struct StealEvent {
  int round = 1;
  PlayerId thief = 0;
  PlayerId victim = 0;
  std::optional<Card> taken;  // empty when the victim had no cards
  friend bool operator==(const StealEvent&, const StealEvent&) = default;
};

struct PlayerState {
  std::vector<Card> hand;  // kept sorted
  int carry = 0;
  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

enum class Phase { InRound, BetweenRounds, Finished };

inline constexpr std::string_view phase_token(Phase p) {
  switch (p) {
    case Phase::InRound: return "in-round";
    case Phase::BetweenRounds: return "between-rounds";
    case Phase::Finished: return "finished";
  }
  return "?";
}

inline std::optional<Phase> phase_from_token(std::string_view s) {
  for (Phase p : {Phase::InRound, Phase::BetweenRounds, Phase::Finished})
    if (phase_token(p) == s) return p;
  return std::nullopt;
}

struct GameState {
  GameConfig config;
  std::vector<Card> deck;  // draw pile, dealt from the back
  std::vector<PlayerState> players;
  std::vector<PlayedGate> round_circuit;
  std::vector<Card> discard;  // every card played so far, STEAL included
  std::vector<StealEvent> steals;
  Phase phase = Phase::InRound;
  PlayerId turn = 0;
  int round = 1;
  Rng rng;

  int dim() const { return config.dim(); }
  std::size_t num_players() const { return players.size(); }

  friend bool operator==(const GameState&, const GameState&) = default;
};

inline void validate_config(const GameConfig& c) {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw Error(Errc::invalid_config, "config." + field + ": " + msg);
  };
  if (c.num_players < 2 || c.num_players > 5)
    fail("players", "must be between 2 and 5");
  if (c.num_rounds < 1) fail("rounds", "must be at least 1");
  if (c.hand_size < 1) fail("hand_size", "must be at least 1");
  const CardSet set = card_set(c.version);
  for (const auto& [card, n] : c.deck_overrides) {
    if (n < 0)
      fail("deck." + std::string(card_token(card)), "must not be negative");
    if (is_gate(card) && !gate_valid_for(card, set.dim))
      fail("deck." + std::string(card_token(card)),
           "not available in version " + std::string(version_token(c.version)));
  }
}

/// Unshuffled deck: card set multiplicities (with overrides) times players.
inline std::vector<Card> build_deck(const GameConfig& c) {
  std::map<Card, int> copies = card_set(c.version).copies_per_player;
  for (const auto& [card, n] : c.deck_overrides) copies[card] = n;
  std::vector<Card> deck;
  for (const auto& [card, n] : copies)
    for (int i = 0; i < n * c.num_players; ++i) deck.push_back(card);
  return deck;
}

namespace detail {

inline void deal(GameState& g) {
  const auto hand = static_cast<std::size_t>(g.config.hand_size);
  if (g.deck.size() < hand * g.players.size())
    throw Error(Errc::deck_underflow, "deck ran out of cards");
  for (std::size_t k = 0; k < hand; ++k)
    for (auto& p : g.players) {
      p.hand.push_back(g.deck.back());
      g.deck.pop_back();
    }
  for (auto& p : g.players) std::sort(p.hand.begin(), p.hand.end());
}

inline void check_player(const GameState& g, PlayerId player) {
  if (player >= g.players.size())
    throw Error(Errc::index_out_of_range,
                "no player " + std::to_string(player + 1));
}

inline void check_turn(const GameState& g, PlayerId player) {
  check_player(g, player);
  if (g.phase != Phase::InRound)
    throw Error(Errc::wrong_phase, "no round in progress");
  if (g.turn != player)
    throw Error(Errc::not_your_turn,
                "not your turn: player " + std::to_string(g.turn + 1) + " is to move");
}

inline void check_move_shape(const GameState& g, PlayerId player, const Move& m) {
  const std::size_t n = g.players.size();
  auto illegal = [](const std::string& msg) { throw Error(Errc::illegal_move, msg); };
  if (m.card == Card::Steal) {
    if (m.targets.size() != 1) illegal("STEAL needs exactly one victim");
    if (m.targets[0] >= n) illegal("no such victim");
    if (m.targets[0] == player) illegal("cannot steal from yourself");
    return;
  }
  if (!gate_valid_for(m.card, g.dim()))
    illegal(std::string(card_token(m.card)) + " is not playable in this version");
  if (m.targets.size() != static_cast<std::size_t>(gate_arity(m.card)))
    illegal(std::string(card_token(m.card)) + " needs " +
            std::to_string(gate_arity(m.card)) + " target(s)");
  for (std::size_t t : m.targets)
    if (t >= n) illegal("qudit " + std::to_string(t + 1) + " does not exist");
  if (m.card == Card::CX && m.targets[0] == m.targets[1])
    illegal("CX control and target must differ");
}

inline void advance_turn(GameState& g, PlayerId from) {
  const std::size_t n = g.players.size();
  for (std::size_t k = 1; k <= n; ++k) {
    const PlayerId p = (from + k) % n;
    if (!g.players[p].hand.empty()) {
      g.turn = p;
      return;
    }
  }
  g.phase = Phase::BetweenRounds;
  g.turn = 0;
}

}  // namespace detail

inline GameState new_game(const GameConfig& config) {
  validate_config(config);
  GameState g;
  g.config = config;
  g.rng = Rng(config.seed);
  g.deck = build_deck(config);
  const auto needed = static_cast<std::size_t>(config.num_players) *
                      static_cast<std::size_t>(config.hand_size) *
                      static_cast<std::size_t>(config.num_rounds);
  if (g.deck.size() < needed)
    throw Error(Errc::deck_underflow,
                "deck has " + std::to_string(g.deck.size()) + " cards but " +
                    std::to_string(needed) + " are needed");
  for (std::size_t i = g.deck.size(); i > 1; --i)
    std::swap(g.deck[i - 1], g.deck[g.rng.below(i)]);
  g.players.resize(static_cast<std::size_t>(config.num_players));
  detail::deal(g);
  return g;
}

/// Distinct moves available to the player to move; empty only for an empty hand.
inline std::vector<Move> legal_moves(const GameState& g, PlayerId player) {
  detail::check_turn(g, player);
  std::vector<Card> kinds = g.players[player].hand;
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  const std::size_t n = g.players.size();
  std::vector<Move> moves;
  for (Card c : kinds) {
    if (c == Card::Steal) {
      for (PlayerId v = 0; v < n; ++v)
        if (v != player) moves.push_back({c, {v}});
    } else if (gate_arity(c) == 1) {
      for (std::size_t q = 0; q < n; ++q) moves.push_back({c, {q}});
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) moves.push_back({c, {a, b}});
    }
  }
  return moves;
}

inline GameState play_card(const GameState& g, PlayerId player, const Move& m) {
  detail::check_turn(g, player);
  const auto& hand = g.players[player].hand;
  auto held = std::find(hand.begin(), hand.end(), m.card);
  if (held == hand.end())
    throw Error(Errc::card_not_held,
                "player " + std::to_string(player + 1) + " does not hold " +
                    std::string(card_token(m.card)));
  detail::check_move_shape(g, player, m);

  GameState next = g;
  auto& own = next.players[player].hand;
  own.erase(own.begin() + (held - hand.begin()));
  next.discard.push_back(m.card);
  if (m.card == Card::Steal) {
    const PlayerId victim = m.targets[0];
    auto& loot = next.players[victim].hand;
    StealEvent ev{next.round, player, victim, std::nullopt};
    if (!loot.empty()) {
      const auto idx = static_cast<std::ptrdiff_t>(next.rng.below(loot.size()));
      ev.taken = loot[idx];
      loot.erase(loot.begin() + idx);
      own.insert(std::upper_bound(own.begin(), own.end(), *ev.taken), *ev.taken);
    }
    next.steals.push_back(ev);
  } else {
    next.round_circuit.push_back({player, m});
  }
  detail::advance_turn(next, player);
  return next;
}

/// The state of the round so far: carry values evolved by the played gates.
inline StateVector round_state(const GameState& g) {
  std::vector<int> carries;
  for (const auto& p : g.players) carries.push_back(p.carry);
  StateVector s = basis_state(g.dim(), carries);
  for (const auto& pg : g.round_circuit)
    s = apply_gate(s, gate_matrix(pg.move.card, g.dim()), pg.move.targets);
  return s;
}

struct RoundResult {
  StateVector pre_measurement;
  Outcome outcome;
  GameState next;
};

/// Evaluates the finished round with one measurement shot and deals the next.
inline RoundResult end_round(const GameState& g) {
  if (g.phase != Phase::BetweenRounds)
    throw Error(Errc::wrong_phase, "the round is not over yet");
  StateVector pre = round_state(g);
  GameState next = g;
  Measurement m = measure_all(pre, next.rng);
  for (std::size_t i = 0; i < next.players.size(); ++i)
    next.players[i].carry = m.outcome.values[i];
  next.round_circuit.clear();
  if (next.round >= next.config.num_rounds) {
    next.phase = Phase::Finished;
  } else {
    ++next.round;
    detail::deal(next);
    next.phase = Phase::InRound;
    next.turn = 0;
  }
  return {std::move(pre), std::move(m.outcome), std::move(next)};
}

struct Score {
  Style style = Style::Competitive;
  std::vector<int> values;
  std::vector<PlayerId> winners;  // competitive; ties share the win
  int group_score = 0;
  int max_group_score = 0;

  bool shared_win() const { return winners.size() > 1; }
};

inline Score score(const GameState& g) {
  if (g.phase != Phase::Finished)
    throw Error(Errc::wrong_phase, "the game is not finished");
  Score s;
  s.style = g.config.style;
  for (const auto& p : g.players) s.values.push_back(p.carry);
  const int best = *std::max_element(s.values.begin(), s.values.end());
  for (PlayerId i = 0; i < s.values.size(); ++i)
    if (s.values[i] == best) s.winners.push_back(i);
  for (int v : s.values) s.group_score += v;
  s.max_group_score = static_cast<int>(s.values.size()) * (g.dim() - 1);
  return s;
}

/// Deck, hands and discard pile combined, sorted. Constant over a game.
inline std::vector<Card> card_inventory(const GameState& g) {
  std::vector<Card> all = g.deck;
  for (const auto& p : g.players) all.insert(all.end(), p.hand.begin(), p.hand.end());
  all.insert(all.end(), g.discard.begin(), g.discard.end());
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace qcards
