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

#include <string>

#include "httplib.h"
#include "qcards/service.hpp"

namespace qcards {

inline int http_status(Errc code) {
  switch (code) {
    case Errc::unauthorized: return 401;
    case Errc::not_found:
    case Errc::unknown_riddle: return 404;
    case Errc::not_your_turn:
    case Errc::wrong_phase: return 409;
    case Errc::card_not_held:
    case Errc::illegal_move:
    case Errc::disallowed_card: return 422;
    default: return 400;
  }
}

inline Json error_body(Errc code, const std::string& message) {
  return {{"error", {{"code", errc_name(code)}, {"message", message}}}};
}

/// Token from the X-Player-Token header, else the "token" query parameter.
inline std::string request_token(const httplib::Request& req) {
  if (req.has_header("X-Player-Token")) return req.get_header_value("X-Player-Token");
  if (req.has_param("token")) return req.get_param_value("token");
  return {};
}

/**
 * httplib's default socket setup enables SO_REUSEPORT, which lets a second
 * server share a port that is already in use. Keep SO_REUSEADDR only, so
 * binding an occupied port fails.
 */
inline void use_exclusive_port(httplib::Server& server) {
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
#ifdef _WIN32
    setsockopt(sock, SOL_SOCKET, SO_EXCLUSIVEADDRUSE, reinterpret_cast<const char*>(&yes), sizeof(yes));
#else
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
#endif
  });
}

namespace detail {

template <typename Fn>
httplib::Server::Handler json_handler(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      Json body;
      if (!req.body.empty()) {
        try {
          body = Json::parse(req.body);
        } catch (const Json::parse_error& e) {
          throw ParseError(Errc::syntax, std::string("request"),
                           "malformed JSON at byte " + std::to_string(e.byte));
        }
      }
      res.set_content(fn(req, body).dump(), "application/json");
    } catch (const Error& e) {
      res.status = http_status(e.code());
      res.set_content(error_body(e.code(), e.what()).dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(error_body(Errc::invalid_argument, e.what()).dump(), "application/json");
    }
  };
}

}  // namespace detail

/// Mounts the /v1 routes. The service must outlive the server.
inline void mount_routes(httplib::Server& server, Service& svc) {
  using detail::json_handler;
  using Req = httplib::Request;
  auto id = [](const Req& r) { return r.path_params.at("id"); };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type, X-Player-Token"}});
  server.Options(R"(/v1/.*)", [](const Req&, httplib::Response& res) { res.status = 204; });

  server.Get("/v1/health", json_handler([](const Req&, const Json&) { return Json{{"ok", true}}; }));

  server.Post("/v1/games", json_handler([&svc](const Req&, const Json& b) { return svc.create_game(b); }));
  server.Get("/v1/games/:id", json_handler([&svc, id](const Req& r, const Json&) {
               return svc.get_state(id(r), request_token(r));
             }));
  server.Get("/v1/games/:id/moves", json_handler([&svc, id](const Req& r, const Json&) {
               return svc.legal_moves(id(r), request_token(r));
             }));
  server.Post("/v1/games/:id/play", json_handler([&svc, id](const Req& r, const Json& b) {
                return svc.play(id(r), request_token(r), b);
              }));
  server.Post("/v1/games/:id/evaluate", json_handler([&svc, id](const Req& r, const Json&) {
                return svc.evaluate_round(id(r), request_token(r));
              }));
  server.Get("/v1/games/:id/log", json_handler([&svc, id](const Req& r, const Json&) {
               return svc.event_log(id(r), request_token(r));
             }));

  server.Post("/v1/sandbox", json_handler([&svc](const Req&, const Json& b) { return svc.sandbox_evaluate(b); }));

  server.Get("/v1/riddles", json_handler([&svc](const Req&, const Json&) { return svc.list_riddles(); }));
  server.Get("/v1/riddles/:id", json_handler([&svc, id](const Req& r, const Json&) { return svc.get_riddle(id(r)); }));
  server.Post("/v1/riddles/:id/attempt", json_handler([&svc, id](const Req& r, const Json& b) {
                return svc.attempt_riddle(id(r), b);
              }));
  server.Post("/v1/riddles/:id/hint", json_handler([&svc, id](const Req& r, const Json& b) {
                return svc.hint(id(r), b);
              }));
}

}  // namespace qcards
