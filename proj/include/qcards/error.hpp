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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcards {

/** Machine-readable error classes shared by the library, CLI and service. */
enum class Errc {
  invalid_argument,
  dimension_mismatch,
  index_out_of_range,
  duplicate_target,
  not_normalized,
  // game engine
  invalid_config,
  deck_underflow,
  not_your_turn,
  card_not_held,
  illegal_move,
  wrong_phase,
  // riddles
  disallowed_card,
  unknown_riddle,
  // text formats
  syntax,
  unknown_token,
  digit_out_of_range,
  control_equals_target,
  missing_header,
  // service
  unauthorized,
  not_found,
};

inline constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::duplicate_target: return "duplicate_target";
    case Errc::not_normalized: return "not_normalized";
    case Errc::invalid_config: return "invalid_config";
    case Errc::deck_underflow: return "deck_underflow";
    case Errc::not_your_turn: return "not_your_turn";
    case Errc::card_not_held: return "card_not_held";
    case Errc::illegal_move: return "illegal_move";
    case Errc::wrong_phase: return "wrong_phase";
    case Errc::disallowed_card: return "disallowed_card";
    case Errc::unknown_riddle: return "unknown_riddle";
    case Errc::syntax: return "syntax";
    case Errc::unknown_token: return "unknown_token";
    case Errc::digit_out_of_range: return "digit_out_of_range";
    case Errc::control_equals_target: return "control_equals_target";
    case Errc::missing_header: return "missing_header";
    case Errc::unauthorized: return "unauthorized";
    case Errc::not_found: return "not_found";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/**
 * Error raised while reading one of the text formats.
 *
 * Line-oriented formats set line() (1-based); structured documents set
 * path() to the offending field, e.g. "players[1].hand[3]".
 */
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  ParseError(Errc code, std::string path, const std::string& message)
      : Error(code, path + ": " + message), path_(std::move(path)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::size_t line_ = 0;
  std::string path_;
};

}  // namespace qcards
