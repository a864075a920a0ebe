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

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcards/http.hpp"
#include "qcards/qcards.hpp"

namespace {

// Stable exit codes for scripting.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_input_error(qcards::Errc c) {
  using qcards::Errc;
  switch (c) {
    case Errc::syntax:
    case Errc::unknown_token:
    case Errc::digit_out_of_range:
    case Errc::control_equals_target:
    case Errc::missing_header:
    case Errc::index_out_of_range:
    case Errc::invalid_config:
    case Errc::disallowed_card:
    case Errc::illegal_move:
    case Errc::unknown_riddle:
      return true;
    default:
      return false;
  }
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qcards;

  CLI::App app{"qcards - qudit card game engine: circuits, riddles and game server"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print the canonical JSON encoding instead of text");

  std::uint64_t seed = 0;
  if (const char* env = std::getenv("QCARDS_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: QCARDS_SEED is not a number\n";
      return kExitUsage;
    }
  }

  auto* sim = app.add_subcommand("simulate", "Evaluate a .qcirc circuit file");
  std::string circuit_file;
  std::size_t shots = 0;
  bool measure = false;
  sim->add_option("file", circuit_file, "Circuit file")->required();
  sim->add_option("--shots", shots, "Print a histogram of N measurements")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Random seed (default: $QCARDS_SEED or 0)");
  sim->add_flag("--measure", measure, "Print one measured outcome");

  auto* riddle = app.add_subcommand("riddle", "List, attempt or solve riddles");
  riddle->require_subcommand(1);
  std::vector<std::string> riddle_files;
  riddle->add_option("--file", riddle_files, "Additional .riddle files");
  auto* r_list = riddle->add_subcommand("list", "List riddles");
  auto* r_show = riddle->add_subcommand("show", "Show a riddle");
  auto* r_attempt = riddle->add_subcommand("attempt", "Check a move sequence, e.g. H1 1 CX 1 2");
  auto* r_solve = riddle->add_subcommand("solve", "Print a shortest solution");
  std::string riddle_id;
  std::vector<std::string> move_args;
  int max_depth = kMaxSolveDepth;
  r_show->add_option("id", riddle_id)->required();
  r_attempt->add_option("id", riddle_id)->required();
  r_attempt->add_option("moves", move_args, "Moves")->allow_extra_args();
  r_solve->add_option("id", riddle_id)->required();
  r_solve->add_option("--max-depth", max_depth)->check(CLI::Range(0, kMaxSolveDepth));

  auto* serve = app.add_subcommand("serve", "Run the HTTP game service");
  int port = 8080;
  std::string bind = "127.0.0.1";
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));
  serve->add_option("--bind", bind);

  auto* rep = app.add_subcommand("replay", "Replay a game event log and print the result");
  std::string log_file;
  rep->add_option("file", log_file, "Event log (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      const CircuitDoc doc = parse_circuit(read_file(circuit_file));
      const StateVector state = evaluate_circuit(doc);
      Rng rng(seed);
      std::optional<Outcome> outcome;
      std::optional<Histogram> hist;
      if (measure) outcome = measure_all(state, rng).outcome;
      if (shots > 0) hist = sample(state, shots, rng);
      if (as_json) {
        Json out = {{"state", format_state(state)}};
        if (outcome) out["outcome"] = outcome->values;
        if (hist) out["histogram"] = histogram_to_json(*hist);
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << format_state(state);
        if (outcome) std::cout << "outcome " << format_ket(*outcome) << "\n";
        if (hist) std::cout << "histogram (" << shots << " shots)\n" << format_histogram(*hist);
      }
      return kExitOk;
    }

    if (*riddle) {
      std::vector<Riddle> riddles = builtin_riddles();
      for (const auto& f : riddle_files) riddles.push_back(parse_riddle(read_file(f)));
      if (*r_list) {
        Json rows = Json::array();
        for (const auto& r : riddles) {
          rows.push_back({{"id", r.id}, {"difficulty", difficulty_token(r.difficulty)}, {"title", r.title}});
          if (!as_json)
            std::cout << r.id << "\t" << difficulty_token(r.difficulty) << "\t" << r.title << "\n";
        }
        if (as_json) std::cout << rows.dump(2) << "\n";
        return kExitOk;
      }
      const Riddle& r = find_riddle(riddles, riddle_id);
      if (*r_show) {
        std::cout << print_riddle(r);
        return kExitOk;
      }
      if (*r_attempt) {
        const CheckResult res = check_solution(r, parse_moves(move_args, r.num_qudits));
        if (as_json) {
          Json out = {{"solved", res.solved}, {"state", format_state(res.final_state)}};
          if (res.solved) out["explanation"] = r.explanation;
          std::cout << out.dump(2) << "\n";
        } else {
          std::cout << (res.solved ? "solved" : "not solved") << "\n" << format_state(res.final_state);
          if (res.solved) std::cout << "\n" << r.explanation << "\n";
        }
        return kExitOk;
      }
      if (*r_solve) {
        const auto sol = solve(r, max_depth);
        if (as_json) {
          Json moves = Json::array();
          if (sol)
            for (const Move& m : *sol) moves.push_back(move_to_json(m));
          std::cout << Json{{"found", sol.has_value()}, {"moves", moves}}.dump(2) << "\n";
        } else if (sol) {
          std::cout << (sol->empty() ? "(no cards needed)" : format_solution(*sol)) << "\n";
        } else {
          std::cout << "no solution within " << std::min(max_depth, r.max_cards) << " cards\n";
        }
        return kExitOk;
      }
    }

    if (*rep) {
      const EventLog log = event_log_from_json(Json::parse(read_file(log_file)));
      const GameState g = replay(log);
      if (as_json) {
        Json out = {{"game", game_to_json(g)}};
        if (g.phase == Phase::Finished) out["score"] = score_to_json(score(g));
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << "phase " << phase_token(g.phase) << "\ncarry";
        for (const auto& p : g.players) std::cout << ' ' << p.carry;
        std::cout << "\n";
        if (g.phase == Phase::Finished) {
          const Score s = score(g);
          if (s.style == Style::Competitive) {
            std::cout << (s.shared_win() ? "shared win:" : "winner:");
            for (PlayerId w : s.winners) std::cout << " player " << w + 1;
            std::cout << "\n";
          } else {
            std::cout << "group score " << s.group_score << " of " << s.max_group_score << "\n";
          }
        }
      }
      return kExitOk;
    }

    if (*serve) {
      Service svc;
      httplib::Server server;
      use_exclusive_port(server);
      mount_routes(server, svc);
      if (!server.bind_to_port(bind, port)) {
        std::cerr << "error: cannot listen on " << bind << ":" << port
                  << " (address in use or not available)\n";
        return kExitRuntime;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << bind << ":" << port << "/v1" << std::endl;
      server.listen_after_bind();
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitRuntime;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
