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

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qcards/circuit_io.hpp"
#include "qcards/riddle.hpp"

namespace qcards {

/**
 * Reads one riddle document.
 *
 *   id 7                         required
 *   title Some name              optional, rest of line
 *   dim 2                        required
 *   qudits 2                     required
 *   init 0 0                     optional, defaults to zeros
 *   cards H1 CX CX               required, allowed multiset
 *   max_cards 3                  required
 *   difficulty medium            optional, easy|medium|hard
 *   goal state                   followed by one "amp (re,im) |v,...>" per term
 *   goal all-equal
 *   goal shifted-pair <q1> <q2> <shift>
 *   goal qudit-always <q> <v>
 *   explanation Free text        optional, repeated lines are joined
 *
 * Target states are normalized on load when their norm is within 1e-3 of 1,
 * so hand-written 0.7071 amplitudes work.
 */
inline Riddle parse_riddle(std::string_view input) {
  Riddle r;
  std::set<std::string, std::less<>> seen;
  std::optional<int> dim, qudits, max_cards;
  std::optional<std::string> goal_kind;
  std::size_t goal_line = 0;
  std::vector<std::pair<std::pair<Amplitude, Outcome>, std::size_t>> terms;
  std::vector<std::string> explanation;
  bool have_cards = false;

  const auto lines = text::split_lines(input);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    const std::string_view raw = text::trim(lines[ln - 1]);
    if (raw.empty() || raw[0] == '#') continue;
    auto fail = [ln](Errc code, const std::string& msg) -> void {
      throw ParseError(code, ln, msg);
    };
    const auto space = raw.find_first_of(" \t");
    const std::string_view key = raw.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : text::trim(raw.substr(space));

    if (key == "title" || key == "explanation") {
      if (key == "title") r.title = std::string(rest);
      else explanation.emplace_back(rest);
      continue;
    }
    const auto w = text::words(text::strip_comment(rest));
    if (key != "amp") {
      if (seen.contains(key)) fail(Errc::syntax, "duplicate " + std::string(key) + " line");
      seen.emplace(key);
    }
    auto one_int = [&](long long lo, long long hi) {
      if (w.size() != 1) fail(Errc::syntax, std::string(key) + " takes one value");
      const auto v = text::to_int(w[0]);
      if (!v || *v < lo || *v > hi)
        fail(Errc::syntax, std::string(key) + " must be between " + std::to_string(lo) +
                               " and " + std::to_string(hi));
      return static_cast<int>(*v);
    };

    if (key == "id") {
      if (w.size() != 1) fail(Errc::syntax, "id takes one word");
      r.id = std::string(w[0]);
    } else if (key == "dim") {
      dim = one_int(2, 3);
    } else if (key == "qudits") {
      qudits = one_int(1, kMaxQudits);
    } else if (key == "max_cards") {
      max_cards = one_int(1, 64);
    } else if (key == "init") {
      if (!dim || !qudits) fail(Errc::missing_header, "init needs dim and qudits first");
      if (w.size() != static_cast<std::size_t>(*qudits))
        fail(Errc::syntax, "init needs one digit per qudit");
      for (auto d : w) {
        const auto v = text::to_int(d);
        if (!v || *v < 0 || *v >= *dim)
          fail(Errc::digit_out_of_range, "init digit '" + std::string(d) + "' out of range");
        r.init.push_back(static_cast<int>(*v));
      }
    } else if (key == "cards") {
      if (!dim) fail(Errc::missing_header, "cards needs dim first");
      for (auto tok : w) {
        const auto c = card_from_token(tok);
        if (!c || !gate_valid_for(*c, *dim))
          fail(Errc::unknown_token, "unknown token '" + std::string(tok) + "'");
        r.allowed.push_back(*c);
      }
      have_cards = true;
    } else if (key == "difficulty") {
      const auto d = w.size() == 1 ? difficulty_from_token(w[0]) : std::nullopt;
      if (!d) fail(Errc::syntax, "difficulty must be easy, medium or hard");
      r.difficulty = *d;
    } else if (key == "goal") {
      if (w.empty()) fail(Errc::syntax, "goal needs a kind");
      if (!qudits) fail(Errc::missing_header, "goal needs qudits first");
      goal_kind = std::string(w[0]);
      goal_line = ln;
      using K = OutcomePredicate::Kind;
      auto qudit_arg = [&](std::size_t i) {
        const auto v = text::to_int(w[i]);
        if (!v || *v < 1 || *v > *qudits)
          fail(Errc::index_out_of_range, "qudit index '" + std::string(w[i]) + "' out of range");
        return static_cast<std::size_t>(*v - 1);
      };
      auto int_arg = [&](std::size_t i) {
        const auto v = text::to_int(w[i]);
        if (!v) fail(Errc::syntax, "'" + std::string(w[i]) + "' is not a number");
        return static_cast<int>(*v);
      };
      if (*goal_kind == "state") {
        if (w.size() != 1) fail(Errc::syntax, "goal state takes no arguments");
      } else if (*goal_kind == "all-equal") {
        if (w.size() != 1) fail(Errc::syntax, "goal all-equal takes no arguments");
        r.goal = OutcomePredicate{K::AllEqual, 0, 1, 0, 0};
      } else if (*goal_kind == "shifted-pair") {
        if (w.size() != 4) fail(Errc::syntax, "goal shifted-pair takes <q1> <q2> <shift>");
        r.goal = OutcomePredicate{K::ShiftedPair, qudit_arg(1), qudit_arg(2), int_arg(3), 0};
      } else if (*goal_kind == "qudit-always") {
        if (w.size() != 3) fail(Errc::syntax, "goal qudit-always takes <q> <value>");
        r.goal = OutcomePredicate{K::QuditAlways, qudit_arg(1), 0, 0, int_arg(2)};
      } else {
        fail(Errc::unknown_token, "unknown goal kind '" + *goal_kind + "'");
      }
    } else if (key == "amp") {
      if (goal_kind != "state") fail(Errc::syntax, "amp lines belong to 'goal state'");
      terms.push_back({parse_amplitude_term(text::strip_comment(rest), ln), ln});
    } else {
      fail(Errc::unknown_token, "unknown key '" + std::string(key) + "'");
    }
  }

  const std::size_t last = std::max<std::size_t>(lines.size(), 1);
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw ParseError(Errc::missing_header, last, std::string("missing ") + what + " line");
  };
  require(!r.id.empty(), "id");
  require(dim.has_value(), "dim");
  require(qudits.has_value(), "qudits");
  require(have_cards, "cards");
  require(max_cards.has_value(), "max_cards");
  require(goal_kind.has_value(), "goal");
  r.dim = *dim;
  r.num_qudits = *qudits;
  r.max_cards = *max_cards;
  if (r.init.empty()) r.init.assign(*qudits, 0);
  std::sort(r.allowed.begin(), r.allowed.end());
  for (std::size_t i = 0; i < explanation.size(); ++i)
    r.explanation += (i ? "\n" : "") + explanation[i];

  if (*goal_kind == "state") {
    if (terms.empty()) throw ParseError(Errc::syntax, goal_line, "goal state has no amp lines");
    std::vector<Amplitude> amps(ipow(*dim, *qudits));
    for (const auto& [term, ln] : terms) {
      const auto& [amp, o] = term;
      if (o.values.size() != static_cast<std::size_t>(*qudits))
        throw ParseError(Errc::syntax, ln, "ket needs one digit per qudit");
      std::size_t idx = 0;
      for (int v : o.values) {
        if (v >= *dim) throw ParseError(Errc::digit_out_of_range, ln, "ket digit out of range");
        idx = idx * *dim + v;
      }
      amps[idx] += amp;
    }
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-3)
      throw ParseError(Errc::syntax, goal_line, "goal state is not normalized");
    if (std::abs(n2 - 1.0) > kNormTolerance)
      for (auto& a : amps) a /= std::sqrt(n2);
    r.goal = StateVector(*dim, *qudits, std::move(amps));
  }
  try {
    validate_riddle(r);
  } catch (const Error& e) {
    throw ParseError(Errc::syntax, last, e.what());
  }
  return r;
}

inline std::string print_riddle(const Riddle& r) {
  std::string out = "id " + r.id + "\n";
  if (!r.title.empty()) out += "title " + r.title + "\n";
  out += "dim " + std::to_string(r.dim) + "\nqudits " + std::to_string(r.num_qudits) + "\ninit";
  for (int v : r.init) out += ' ' + std::to_string(v);
  out += "\ncards";
  for (Card c : r.allowed) out += ' ' + std::string(card_token(c));
  out += "\nmax_cards " + std::to_string(r.max_cards) + "\ndifficulty " +
         std::string(difficulty_token(r.difficulty)) + "\n";
  if (const auto* s = std::get_if<StateVector>(&r.goal)) {
    out += "goal state\n";
    std::istringstream terms(format_state_exact(*s));
    for (std::string line; std::getline(terms, line);) out += "amp " + line + "\n";
  } else {
    const auto& p = std::get<OutcomePredicate>(r.goal);
    using K = OutcomePredicate::Kind;
    switch (p.kind) {
      case K::AllEqual: out += "goal all-equal\n"; break;
      case K::ShiftedPair:
        out += "goal shifted-pair " + std::to_string(p.first + 1) + " " +
               std::to_string(p.second + 1) + " " + std::to_string(p.shift) + "\n";
        break;
      case K::QuditAlways:
        out += "goal qudit-always " + std::to_string(p.first + 1) + " " +
               std::to_string(p.value) + "\n";
        break;
    }
  }
  std::istringstream expl(r.explanation);
  for (std::string line; std::getline(expl, line);) out += "explanation " + line + "\n";
  return out;
}

/// "H1 1 CX 1 2" style move list. Indices may be omitted for one-qudit riddles.
inline Solution parse_moves(const std::vector<std::string>& args, int num_qudits) {
  Solution s;
  std::size_t i = 0;
  while (i < args.size()) {
    if (args[i] == "/" || args[i] == ",") {
      ++i;
      continue;
    }
    const auto card = card_from_token(args[i]);
    if (!card) throw Error(Errc::unknown_token, "unknown token '" + args[i] + "'");
    ++i;
    Move m{*card, {}};
    const auto arity = static_cast<std::size_t>(gate_arity(*card));
    for (std::size_t k = 0; k < arity; ++k) {
      const auto q = i < args.size() ? text::to_int(args[i]) : std::nullopt;
      if (!q) {
        if (num_qudits == 1 && arity == 1) {
          m.targets.push_back(0);
          break;
        }
        throw Error(Errc::syntax, std::string(card_token(*card)) + " needs " +
                                      std::to_string(arity) + " qudit index(es)");
      }
      if (*q < 1 || *q > num_qudits)
        throw Error(Errc::index_out_of_range, "qudit index " + std::to_string(*q) + " out of range");
      m.targets.push_back(static_cast<std::size_t>(*q - 1));
      ++i;
    }
    s.push_back(std::move(m));
  }
  return s;
}

inline std::string format_solution(const Solution& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " / " : "") + format_move(s[i]);
  return out;
}

}  // namespace qcards
