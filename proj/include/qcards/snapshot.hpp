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
#include <climits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcards/error.hpp"
#include "qcards/game.hpp"
#include "qcards/gates.hpp"

namespace qcards {

using Json = nlohmann::json;

// JSON documents use sorted keys, so dump() output is canonical. All seat
// and qudit indices in documents are 1-based.

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& msg) {
  throw ParseError(Errc::syntax, path, msg);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad_field(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_field(path + "." + key, "missing field");
  return *it;
}

inline long long integer(const Json& j, const std::string& path, long long lo, long long hi) {
  if (!j.is_number_integer()) bad_field(path, "expected an integer");
  const long long v = j.is_number_unsigned() && j.get<unsigned long long>() > LLONG_MAX
                          ? LLONG_MAX
                          : j.get<long long>();
  if (v < lo || v > hi)
    bad_field(path, "must be between " + std::to_string(lo) + " and " + std::to_string(hi));
  return v;
}

inline std::uint64_t uint64(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad_field(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline const std::string& string(const Json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get_ref<const std::string&>();
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) bad_field(path, "expected an array");
  return j;
}

inline Card card(const Json& j, const std::string& path) {
  const auto c = card_from_token(string(j, path));
  if (!c) bad_field(path, "unknown card '" + j.get<std::string>() + "'");
  return *c;
}

inline std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void only_keys(const Json& j, const std::string& path,
                      std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      bad_field(path + "." + k, "unknown field");
}

}  // namespace detail

inline Json config_to_json(const GameConfig& c) {
  Json deck = Json::object();
  for (const auto& [card, n] : c.deck_overrides) deck[std::string(card_token(card))] = n;
  Json j = {{"version", version_token(c.version)},
            {"style", style_token(c.style)},
            {"players", c.num_players},
            {"rounds", c.num_rounds},
            {"hand_size", c.hand_size},
            {"seed", c.seed},
            {"deck", deck}};
  if (c.reveal_state) j["reveal_state"] = *c.reveal_state;
  return j;
}

/// Reads a config; rounds, hand_size, deck and reveal_state are optional.
inline GameConfig config_from_json(const Json& j, const std::string& path = "config") {
  using namespace detail;
  if (!j.is_object()) bad_field(path, "expected an object");
  only_keys(j, path, {"version", "style", "players", "rounds", "hand_size", "seed", "deck",
                      "reveal_state"});
  GameConfig c;
  const auto v = version_from_token(string(field(j, "version", path), path + ".version"));
  if (!v) bad_field(path + ".version", "must be easy, 2d or 3d");
  c.version = *v;
  const auto s = style_from_token(string(field(j, "style", path), path + ".style"));
  if (!s) bad_field(path + ".style", "must be competitive or cooperative");
  c.style = *s;
  c.num_players = static_cast<int>(integer(field(j, "players", path), path + ".players", 2, 5));
  if (j.contains("rounds"))
    c.num_rounds = static_cast<int>(integer(j["rounds"], path + ".rounds", 1, 1000));
  if (j.contains("hand_size"))
    c.hand_size = static_cast<int>(integer(j["hand_size"], path + ".hand_size", 1, 1000));
  c.seed = uint64(field(j, "seed", path), path + ".seed");
  if (j.contains("deck")) {
    const Json& d = j["deck"];
    if (!d.is_object()) bad_field(path + ".deck", "expected an object");
    for (const auto& [token, n] : d.items()) {
      const auto card = card_from_token(token);
      if (!card) bad_field(path + ".deck." + token, "unknown card");
      c.deck_overrides[*card] = static_cast<int>(integer(n, path + ".deck." + token, 0, 1000));
    }
  }
  if (j.contains("reveal_state")) {
    if (!j["reveal_state"].is_boolean()) bad_field(path + ".reveal_state", "expected a boolean");
    c.reveal_state = j["reveal_state"].get<bool>();
  }
  try {
    validate_config(c);
  } catch (const Error& e) {
    throw ParseError(Errc::invalid_config, path, e.what());
  }
  return c;
}

inline Json move_to_json(const Move& m) {
  if (m.card == Card::Steal)
    return {{"card", "STEAL"}, {"victim", m.targets.empty() ? 0 : m.targets[0] + 1}};
  Json targets = Json::array();
  for (std::size_t t : m.targets) targets.push_back(t + 1);
  return {{"card", card_token(m.card)}, {"targets", targets}};
}

/// Shape only; legality is checked by the game engine.
inline Move move_from_json(const Json& j, const std::string& path = "move") {
  using namespace detail;
  Move m{card(field(j, "card", path), path + ".card"), {}};
  if (m.card == Card::Steal) {
    m.targets.push_back(
        static_cast<std::size_t>(integer(field(j, "victim", path), path + ".victim", 1, 64) - 1));
    return m;
  }
  const Json& t = array(field(j, "targets", path), path + ".targets");
  for (std::size_t i = 0; i < t.size(); ++i)
    m.targets.push_back(static_cast<std::size_t>(integer(t[i], idx(path + ".targets", i), 1, 64) - 1));
  return m;
}

namespace detail {

inline Json cards_to_json(const std::vector<Card>& cards) {
  Json a = Json::array();
  for (Card c : cards) a.push_back(card_token(c));
  return a;
}

inline std::vector<Card> cards_from_json(const Json& j, const std::string& path) {
  std::vector<Card> out;
  const Json& a = array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(card(a[i], idx(path, i)));
  return out;
}

}  // namespace detail

inline constexpr std::string_view kSnapshotFormat = "qcards-game/1";

inline Json game_to_json(const GameState& g) {
  Json players = Json::array();
  for (const auto& p : g.players)
    players.push_back({{"hand", detail::cards_to_json(p.hand)}, {"carry", p.carry}});
  Json circuit = Json::array();
  for (const auto& pg : g.round_circuit)
    circuit.push_back({{"player", pg.player + 1}, {"move", move_to_json(pg.move)}});
  Json steals = Json::array();
  for (const auto& s : g.steals)
    steals.push_back({{"round", s.round},
                      {"thief", s.thief + 1},
                      {"victim", s.victim + 1},
                      {"taken", s.taken ? Json(card_token(*s.taken)) : Json(nullptr)}});
  Json rng = Json::array();
  for (auto w : g.rng.state()) rng.push_back(w);
  return {{"format", kSnapshotFormat},
          {"config", config_to_json(g.config)},
          {"deck", detail::cards_to_json(g.deck)},
          {"discard", detail::cards_to_json(g.discard)},
          {"players", players},
          {"round_circuit", circuit},
          {"steals", steals},
          {"phase", phase_token(g.phase)},
          {"turn", g.turn + 1},
          {"round", g.round},
          {"rng", rng}};
}

/**
 * Rebuilds a game from its snapshot. Besides field-level checks, the card
 * inventory must match the configured deck and every played move must be
 * well formed, so a tampered document is rejected as a whole.
 */
inline GameState game_from_json(const Json& j) {
  using namespace detail;
  const std::string root = "game";
  if (!j.is_object()) bad_field(root, "expected an object");
  only_keys(j, root, {"format", "config", "deck", "discard", "players", "round_circuit", "steals",
                      "phase", "turn", "round", "rng"});
  if (string(field(j, "format", root), "game.format") != kSnapshotFormat)
    bad_field("game.format", "unsupported snapshot format");
  GameState g;
  g.config = config_from_json(field(j, "config", root), "game.config");
  const int d = g.config.dim();
  const auto n = static_cast<std::size_t>(g.config.num_players);
  g.deck = cards_from_json(field(j, "deck", root), "game.deck");
  g.discard = cards_from_json(field(j, "discard", root), "game.discard");

  const Json& players = array(field(j, "players", root), "game.players");
  if (players.size() != n) bad_field("game.players", "expected " + std::to_string(n) + " players");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string p = idx("game.players", i);
    PlayerState ps;
    ps.hand = cards_from_json(field(players[i], "hand", p), p + ".hand");
    if (!std::is_sorted(ps.hand.begin(), ps.hand.end())) bad_field(p + ".hand", "hand is not sorted");
    ps.carry = static_cast<int>(integer(field(players[i], "carry", p), p + ".carry", 0, d - 1));
    g.players.push_back(std::move(ps));
  }

  const auto phase = phase_from_token(string(field(j, "phase", root), "game.phase"));
  if (!phase) bad_field("game.phase", "unknown phase");
  g.phase = *phase;
  g.turn = static_cast<PlayerId>(integer(field(j, "turn", root), "game.turn", 1,
                                         static_cast<long long>(n)) - 1);
  g.round = static_cast<int>(integer(field(j, "round", root), "game.round", 1, g.config.num_rounds));

  const Json& circuit = array(field(j, "round_circuit", root), "game.round_circuit");
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const std::string p = idx("game.round_circuit", i);
    PlayedGate pg;
    pg.player = static_cast<PlayerId>(
        integer(field(circuit[i], "player", p), p + ".player", 1, static_cast<long long>(n)) - 1);
    pg.move = move_from_json(field(circuit[i], "move", p), p + ".move");
    if (pg.move.card == Card::Steal) bad_field(p + ".move", "STEAL is never part of the circuit");
    try {
      detail::check_move_shape(g, pg.player, pg.move);
    } catch (const Error& e) {
      bad_field(p + ".move", e.what());
    }
    g.round_circuit.push_back(std::move(pg));
  }

  const Json& steals = array(field(j, "steals", root), "game.steals");
  for (std::size_t i = 0; i < steals.size(); ++i) {
    const std::string p = idx("game.steals", i);
    StealEvent s;
    s.round = static_cast<int>(integer(field(steals[i], "round", p), p + ".round", 1, g.config.num_rounds));
    s.thief = static_cast<PlayerId>(
        integer(field(steals[i], "thief", p), p + ".thief", 1, static_cast<long long>(n)) - 1);
    s.victim = static_cast<PlayerId>(
        integer(field(steals[i], "victim", p), p + ".victim", 1, static_cast<long long>(n)) - 1);
    const Json& taken = field(steals[i], "taken", p);
    if (!taken.is_null()) s.taken = card(taken, p + ".taken");
    g.steals.push_back(s);
  }

  const Json& rng = array(field(j, "rng", root), "game.rng");
  if (rng.size() != 4) bad_field("game.rng", "expected 4 state words");
  Rng::State st{};
  for (std::size_t i = 0; i < 4; ++i) st[i] = uint64(rng[i], idx("game.rng", i));
  g.rng = Rng::from_state(st);

  auto inventory = card_inventory(g);
  auto expected = build_deck(g.config);
  std::sort(expected.begin(), expected.end());
  if (inventory != expected) bad_field("game", "cards do not add up to the configured deck");
  return g;
}

inline std::string serialize_game(const GameState& g) { return game_to_json(g).dump(2) + "\n"; }

inline GameState deserialize_game(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(Errc::syntax, std::string("game"),
                     "malformed document at byte " + std::to_string(e.byte));
  }
  return game_from_json(j);
}

/// A move or a round evaluation, in the order the session accepted them.
struct GameEvent {
  enum class Kind { Play, Evaluate };
  Kind kind = Kind::Play;
  PlayerId player = 0;
  Move move;

  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

struct EventLog {
  GameConfig config;
  std::vector<GameEvent> events;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

inline Json event_log_to_json(const EventLog& log) {
  Json events = Json::array();
  for (const auto& e : log.events) {
    if (e.kind == GameEvent::Kind::Play)
      events.push_back({{"type", "play"}, {"player", e.player + 1}, {"move", move_to_json(e.move)}});
    else
      events.push_back({{"type", "evaluate"}, {"player", e.player + 1}});
  }
  return {{"config", config_to_json(log.config)}, {"events", events}};
}

inline EventLog event_log_from_json(const Json& j) {
  using namespace detail;
  EventLog log;
  log.config = config_from_json(field(j, "config", "log"), "log.config");
  const Json& events = array(field(j, "events", "log"), "log.events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string p = idx("log.events", i);
    GameEvent e;
    const std::string& type = string(field(events[i], "type", p), p + ".type");
    e.player = static_cast<PlayerId>(
        integer(field(events[i], "player", p), p + ".player", 1, log.config.num_players) - 1);
    if (type == "play") {
      e.move = move_from_json(field(events[i], "move", p), p + ".move");
    } else if (type == "evaluate") {
      e.kind = GameEvent::Kind::Evaluate;
    } else {
      bad_field(p + ".type", "must be play or evaluate");
    }
    log.events.push_back(std::move(e));
  }
  return log;
}

/// Re-applies every event to a fresh game built from the logged config.
inline GameState replay(const EventLog& log) {
  GameState g = new_game(log.config);
  for (const auto& e : log.events) {
    if (e.kind == GameEvent::Kind::Play) g = play_card(g, e.player, e.move);
    else g = end_round(g).next;
  }
  return g;
}

}  // namespace qcards
