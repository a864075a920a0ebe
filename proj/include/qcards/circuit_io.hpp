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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcards/error.hpp"
#include "qcards/game.hpp"
#include "qcards/gates.hpp"
#include "qcards/qudit.hpp"

namespace qcards {

/// A standalone circuit: header plus gate moves with 0-based targets.
struct CircuitDoc {
  int dim = 2;
  int num_qudits = 1;
  std::vector<int> init;
  std::vector<Move> ops;

  friend bool operator==(const CircuitDoc&, const CircuitDoc&) = default;
};

namespace text {

inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('\n', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view line = s.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == s.size()) break;
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> to_double(std::string_view s) {
  // from_chars for double is missing from older libstdc++.
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

inline std::string fixed4(double x) {
  double r = std::round(x * 1e4) / 1e4;
  if (r == 0.0) r = 0.0;  // no "-0.0000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", r);
  return buf;
}

inline std::string full_precision(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace text

/**
 * Parses the line-oriented circuit format:
 *
 *   dim <2|3>
 *   qudits <n>
 *   init <v1> ... <vn>        (optional, defaults to all zeros)
 *   <TOKEN> <q>               single-qudit gate, 1-based index
 *   CX <control> <target>
 *
 * '#' starts a comment; blank lines are ignored; header lines must come
 * before the first gate line.
 */
inline CircuitDoc parse_circuit(std::string_view input) {
  CircuitDoc doc;
  std::optional<int> dim, qudits;
  bool have_init = false, in_body = false;
  const auto lines = text::split_lines(input);

  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    const auto w = text::words(text::strip_comment(lines[ln - 1]));
    if (w.empty()) continue;
    auto fail = [ln](Errc code, const std::string& msg) -> void {
      throw ParseError(code, ln, msg);
    };
    const std::string_view head = w[0];

    if (head == "dim" || head == "qudits" || head == "init") {
      if (in_body) fail(Errc::syntax, std::string(head) + " must come before gate lines");
      if (head == "init") {
        if (!dim || !qudits) fail(Errc::missing_header, "init needs dim and qudits first");
        if (have_init) fail(Errc::syntax, "duplicate init line");
        if (w.size() - 1 != static_cast<std::size_t>(*qudits))
          fail(Errc::syntax, "init needs " + std::to_string(*qudits) + " digits");
        for (std::size_t i = 1; i < w.size(); ++i) {
          const auto v = text::to_int(w[i]);
          if (!v) fail(Errc::syntax, "init digit '" + std::string(w[i]) + "' is not a number");
          if (*v < 0 || *v >= *dim)
            fail(Errc::digit_out_of_range, "init digit " + std::to_string(*v) +
                                               " is not below " + std::to_string(*dim));
          doc.init.push_back(static_cast<int>(*v));
        }
        have_init = true;
        continue;
      }
      if (w.size() != 2) fail(Errc::syntax, std::string(head) + " takes one value");
      const auto v = text::to_int(w[1]);
      if (head == "dim") {
        if (dim) fail(Errc::syntax, "duplicate dim line");
        if (!v || (*v != 2 && *v != 3)) fail(Errc::syntax, "dim must be 2 or 3");
        dim = static_cast<int>(*v);
      } else {
        if (qudits) fail(Errc::syntax, "duplicate qudits line");
        if (!v || *v < 1 || *v > kMaxQudits)
          fail(Errc::syntax, "qudits must be between 1 and " + std::to_string(kMaxQudits));
        qudits = static_cast<int>(*v);
      }
      continue;
    }

    const auto card = card_from_token(head);
    if (!card || !is_gate(*card)) fail(Errc::unknown_token, "unknown token '" + std::string(head) + "'");
    if (!dim || !qudits) fail(Errc::missing_header, "gate line before dim and qudits");
    if (!gate_valid_for(*card, *dim))
      fail(Errc::unknown_token, "token '" + std::string(head) + "' is not a gate at dimension " +
                                    std::to_string(*dim));
    in_body = true;
    const auto arity = static_cast<std::size_t>(gate_arity(*card));
    if (w.size() - 1 != arity)
      fail(Errc::syntax, std::string(head) + " takes " + std::to_string(arity) + " qudit index(es)");
    Move m{*card, {}};
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto q = text::to_int(w[i]);
      if (!q) fail(Errc::syntax, "qudit index '" + std::string(w[i]) + "' is not a number");
      if (*q < 1 || *q > *qudits)
        fail(Errc::index_out_of_range, "qudit index " + std::to_string(*q) + " out of range 1.." +
                                           std::to_string(*qudits));
      m.targets.push_back(static_cast<std::size_t>(*q - 1));
    }
    if (m.card == Card::CX && m.targets[0] == m.targets[1])
      fail(Errc::control_equals_target, "CX control equals target");
    doc.ops.push_back(std::move(m));
  }

  if (!dim || !qudits)
    throw ParseError(Errc::missing_header, std::max<std::size_t>(lines.size(), 1),
                     std::string("missing ") + (!dim ? "dim" : "qudits") + " line");
  doc.dim = *dim;
  doc.num_qudits = *qudits;
  if (!have_init) doc.init.assign(*qudits, 0);
  return doc;
}

inline std::string format_move(const Move& m) {
  std::string s(card_token(m.card));
  for (std::size_t t : m.targets) s += ' ' + std::to_string(t + 1);
  return s;
}

/// Prints a document in the grammar parse_circuit accepts.
inline std::string print_circuit(const CircuitDoc& doc) {
  std::string out = "dim " + std::to_string(doc.dim) + "\nqudits " +
                    std::to_string(doc.num_qudits) + "\ninit";
  for (int v : doc.init) out += ' ' + std::to_string(v);
  out += '\n';
  for (const Move& m : doc.ops) out += format_move(m) + '\n';
  return out;
}

inline StateVector evaluate_circuit(const CircuitDoc& doc) {
  StateVector s = basis_state(doc.dim, doc.init);
  for (const Move& m : doc.ops) s = apply_gate(s, gate_matrix(m.card, doc.dim), m.targets);
  return s;
}

inline std::string format_ket(const Outcome& o) { return "|" + o.str() + ">"; }

/// One "(re,im) |v1,...,vn>" line per amplitude with |a|^2 > 1e-12, 4 decimals.
inline std::string format_state(const StateVector& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::norm(s[i]) <= kProbabilityCutoff) continue;
    out += "(" + text::fixed4(s[i].real()) + "," + text::fixed4(s[i].imag()) + ") " +
           format_ket(s.outcome_of(i)) + "\n";
  }
  return out;
}

/// Same layout as format_state but with round-trip precision.
inline std::string format_state_exact(const StateVector& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::norm(s[i]) <= kProbabilityCutoff) continue;
    out += "(" + text::full_precision(s[i].real()) + "," +
           text::full_precision(s[i].imag()) + ") " + format_ket(s.outcome_of(i)) + "\n";
  }
  return out;
}

/// Parses one "(re,im) |v1,...,vn>" term.
inline std::pair<Amplitude, Outcome> parse_amplitude_term(std::string_view term,
                                                          std::size_t line) {
  auto fail = [line](const std::string& msg) -> void {
    throw ParseError(Errc::syntax, line, msg);
  };
  term = text::trim(term);
  const auto close = term.find(')');
  if (term.empty() || term[0] != '(' || close == std::string_view::npos)
    fail("expected '(re,im) |digits>'");
  const auto inner = term.substr(1, close - 1);
  const auto comma = inner.find(',');
  if (comma == std::string_view::npos) fail("amplitude needs a real and an imaginary part");
  const auto re = text::to_double(text::trim(inner.substr(0, comma)));
  const auto im = text::to_double(text::trim(inner.substr(comma + 1)));
  if (!re || !im) fail("amplitude components must be numbers");
  auto ket = text::trim(term.substr(close + 1));
  if (ket.size() < 3 || ket.front() != '|' || ket.back() != '>') fail("expected a ket |...>");
  ket = ket.substr(1, ket.size() - 2);
  Outcome o;
  std::size_t start = 0;
  while (true) {
    const auto sep = ket.find(',', start);
    const auto digit = text::to_int(
        text::trim(ket.substr(start, sep == std::string_view::npos ? ket.npos : sep - start)));
    if (!digit || *digit < 0) fail("ket digits must be non-negative integers");
    o.values.push_back(static_cast<int>(*digit));
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return {Amplitude(*re, *im), std::move(o)};
}

/// Reads format_state output back into basis-labelled amplitudes.
inline std::map<Outcome, Amplitude> parse_state_text(std::string_view input) {
  std::map<Outcome, Amplitude> out;
  const auto lines = text::split_lines(input);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    const auto line = text::trim(text::strip_comment(lines[ln - 1]));
    if (line.empty()) continue;
    auto [amp, o] = parse_amplitude_term(line, ln);
    if (out.contains(o)) throw ParseError(Errc::syntax, ln, "duplicate basis label");
    out.emplace(std::move(o), amp);
  }
  return out;
}

inline std::string format_histogram(const Histogram& h) {
  std::string out;
  for (const auto& [o, n] : h.counts) out += format_ket(o) + " " + std::to_string(n) + "\n";
  return out;
}

}  // namespace qcards
