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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qcards/circuit_io.hpp"
#include "qcards/error.hpp"
#include "qcards/game.hpp"
#include "qcards/riddle.hpp"
#include "qcards/riddle_io.hpp"
#include "qcards/snapshot.hpp"

namespace qcards {

inline Json outcome_to_json(const Outcome& o) { return o.values; }

inline Json histogram_to_json(const Histogram& h) {
  Json rows = Json::array();
  for (const auto& [o, n] : h.counts) rows.push_back({{"outcome", o.values}, {"count", n}});
  return {{"shots", h.shots}, {"counts", rows}};
}

inline Json score_to_json(const Score& s) {
  Json winners = Json::array();
  for (PlayerId w : s.winners) winners.push_back(w + 1);
  return {{"style", style_token(s.style)},
          {"values", s.values},
          {"winners", winners},
          {"shared_win", s.shared_win()},
          {"group_score", s.group_score},
          {"max_group_score", s.max_group_score}};
}

/**
 * Game sessions, sandbox evaluation and riddles behind a JSON interface.
 * The HTTP layer in http.hpp is a thin adapter over this class.
 *
 * Sessions live in a map guarded by a shared mutex; each session has its own
 * mutex, so mutations of one game are applied in a single total order while
 * different games proceed in parallel.
 */
class Service {
 public:
  explicit Service(std::vector<Riddle> riddles = builtin_riddles())
      : riddles_(std::move(riddles)), token_rng_(std::random_device{}()) {}

  /// Body: a game config; "seed" may be omitted.
  Json create_game(Json config) {
    if (config.is_object() && !config.contains("seed")) config["seed"] = fresh_seed();
    GameConfig cfg = config_from_json(config);
    auto s = std::make_shared<Session>();
    s->game = new_game(cfg);
    s->log.config = cfg;
    s->created = std::chrono::system_clock::now();
    Json tokens = Json::array();
    {
      std::lock_guard lk(token_mu_);
      s->id = random_hex(8);
      for (int i = 0; i < cfg.num_players; ++i) {
        s->tokens.push_back(random_hex(16));
        tokens.push_back(s->tokens.back());
      }
    }
    {
      std::unique_lock lk(sessions_mu_);
      sessions_[s->id] = s;
    }
    return {{"game_id", s->id}, {"tokens", tokens}, {"players", cfg.num_players}};
  }

  Json get_state(const std::string& game_id, const std::string& token) const {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    return player_view(*s, authenticate(*s, token));
  }

  Json legal_moves(const std::string& game_id, const std::string& token) const {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    const PlayerId p = authenticate(*s, token);
    Json out = Json::array();
    for (const Move& m : qcards::legal_moves(s->game, p)) out.push_back(move_to_json(m));
    return {{"moves", out}};
  }

  Json play(const std::string& game_id, const std::string& token, const Json& move) {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    const PlayerId p = authenticate(*s, token);
    const Move m = move_from_json(move);
    s->game = play_card(s->game, p, m);
    s->log.events.push_back({GameEvent::Kind::Play, p, m});
    return player_view(*s, p);
  }

  /// Any seated player may evaluate once every hand is empty.
  Json evaluate_round(const std::string& game_id, const std::string& token) {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    const PlayerId p = authenticate(*s, token);
    const int round = s->game.round;
    RoundResult r = end_round(s->game);
    s->game = std::move(r.next);
    s->log.events.push_back({GameEvent::Kind::Evaluate, p, {}});
    Json result = {{"round", round},
                   {"state", format_state(r.pre_measurement)},
                   {"outcome", outcome_to_json(r.outcome)},
                   {"phase", phase_token(s->game.phase)}};
    if (s->game.phase == Phase::Finished) result["score"] = score_to_json(score(s->game));
    s->results.push_back(result);
    return result;
  }

  /// Full event log. In competitive games only once the game is over,
  /// because the seed it contains determines every hand.
  Json event_log(const std::string& game_id, const std::string& token) const {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    authenticate(*s, token);
    if (s->game.config.style == Style::Competitive && s->game.phase != Phase::Finished)
      throw Error(Errc::wrong_phase, "the log of a competitive game is sealed until it ends");
    return event_log_to_json(s->log);
  }

  /// Server-side view for tests and tooling; bypasses tokens.
  GameState game(const std::string& game_id) const {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    return s->game;
  }

  EventLog log(const std::string& game_id) const {
    auto s = find(game_id);
    std::lock_guard lk(s->mu);
    return s->log;
  }

  /// Body: {"circuit": "<.qcirc text>", "shots": n, "seed": s}.
  Json sandbox_evaluate(const Json& body) const {
    using namespace detail;
    if (!body.is_object()) bad_field("request", "expected an object");
    const CircuitDoc doc = parse_circuit(string(field(body, "circuit", "request"), "request.circuit"));
    const auto shots = body.contains("shots")
                           ? static_cast<std::size_t>(integer(body["shots"], "request.shots", 1, 1'000'000))
                           : std::size_t{100};
    const std::uint64_t seed = body.contains("seed") ? uint64(body["seed"], "request.seed") : 0;
    const StateVector state = evaluate_circuit(doc);
    Rng rng(seed);
    return {{"state", format_state(state)}, {"histogram", histogram_to_json(sample(state, shots, rng))}};
  }

  Json list_riddles() const {
    Json out = Json::array();
    for (const auto& r : riddles_) out.push_back(riddle_summary(r));
    return {{"riddles", out}};
  }

  Json get_riddle(const std::string& id) const {
    const Riddle& r = find_riddle(riddles_, id);
    Json j = riddle_summary(r);
    j["start"] = format_state(riddle_start(r));
    return j;
  }

  /// Body: {"moves": [...]}. The explanation is only revealed on success.
  Json attempt_riddle(const std::string& id, const Json& body) const {
    const Riddle& r = find_riddle(riddles_, id);
    const CheckResult res = check_solution(r, moves_from_body(body));
    Json out = {{"solved", res.solved}, {"state", format_state(res.final_state)}};
    if (res.solved) out["explanation"] = r.explanation;
    return out;
  }

  /// Next card of a shortest solution continuing the moves played so far.
  Json hint(const std::string& id, const Json& body) const {
    const Riddle& r = find_riddle(riddles_, id);
    const Solution prefix = moves_from_body(body);
    const auto rest = solve_continuation(r, prefix);
    if (!rest) return {{"move", nullptr}, {"reachable", false}};
    Json out = {{"reachable", true}, {"remaining", rest->size()}};
    out["move"] = rest->empty() ? Json(nullptr) : move_to_json(rest->front());
    return out;
  }

  std::size_t session_count() const {
    std::shared_lock lk(sessions_mu_);
    return sessions_.size();
  }

 private:
  struct Session {
    std::string id;
    GameState game;
    std::vector<std::string> tokens;
    std::chrono::system_clock::time_point created;
    EventLog log;
    std::vector<Json> results;
    mutable std::mutex mu;
  };

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lk(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "no game " + id);
    return it->second;
  }

  static PlayerId authenticate(const Session& s, const std::string& token) {
    for (PlayerId i = 0; i < s.tokens.size(); ++i)
      if (!token.empty() && s.tokens[i] == token) return i;
    throw Error(Errc::unauthorized, "unknown player token");
  }

  static Json player_view(const Session& s, PlayerId you) {
    const GameState& g = s.game;
    Json players = Json::array();
    for (PlayerId i = 0; i < g.players.size(); ++i)
      players.push_back({{"id", i + 1}, {"carry", g.players[i].carry},
                         {"hand_size", g.players[i].hand.size()}});
    Json circuit = Json::array();
    for (const auto& pg : g.round_circuit)
      circuit.push_back({{"player", pg.player + 1}, {"move", move_to_json(pg.move)}});
    Json steals = Json::array();
    for (const auto& st : g.steals) {
      Json e = {{"round", st.round}, {"thief", st.thief + 1}, {"victim", st.victim + 1}};
      if (you == st.thief || you == st.victim)
        e["taken"] = st.taken ? Json(card_token(*st.taken)) : Json(nullptr);
      steals.push_back(e);
    }
    Json view = {{"game_id", s.id},
                 {"you", you + 1},
                 {"version", version_token(g.config.version)},
                 {"style", style_token(g.config.style)},
                 {"dim", g.dim()},
                 {"rounds", g.config.num_rounds},
                 {"round", g.round},
                 {"phase", phase_token(g.phase)},
                 {"turn", g.turn + 1},
                 {"players", players},
                 {"hand", detail::cards_to_json(g.players[you].hand)},
                 {"round_circuit", circuit},
                 {"steals", steals},
                 {"results", s.results}};
    if (g.phase == Phase::InRound && g.turn == you) {
      Json moves = Json::array();
      for (const Move& m : qcards::legal_moves(g, you)) moves.push_back(move_to_json(m));
      view["legal_moves"] = moves;
    }
    if (g.config.reveals_state() && g.phase != Phase::Finished)
      view["state"] = format_state(round_state(g));
    if (g.phase == Phase::Finished) view["score"] = score_to_json(score(g));
    return view;
  }

  static Json riddle_summary(const Riddle& r) {
    return {{"id", r.id},
            {"title", r.title},
            {"difficulty", difficulty_token(r.difficulty)},
            {"dim", r.dim},
            {"qudits", r.num_qudits},
            {"init", r.init},
            {"cards", detail::cards_to_json(r.allowed)},
            {"max_cards", r.max_cards}};
  }

  static Solution moves_from_body(const Json& body) {
    Solution s;
    if (body.is_null()) return s;
    if (!body.is_object()) detail::bad_field("request", "expected an object");
    if (!body.contains("moves")) return s;
    const Json& moves = detail::array(body["moves"], "request.moves");
    for (std::size_t i = 0; i < moves.size(); ++i)
      s.push_back(move_from_json(moves[i], detail::idx("request.moves", i)));
    return s;
  }

  std::uint64_t fresh_seed() {
    std::lock_guard lk(token_mu_);
    return token_rng_();
  }

  std::string random_hex(std::size_t bytes) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bytes; ++i) {
      const auto b = static_cast<unsigned>(token_rng_() & 0xff);
      out += kHex[b >> 4];
      out += kHex[b & 0xf];
    }
    return out;
  }

  std::vector<Riddle> riddles_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex token_mu_;
  std::mt19937_64 token_rng_;
};

}  // namespace qcards
