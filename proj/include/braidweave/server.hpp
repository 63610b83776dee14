// Copyright 2026 The Braidweave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// HTTP frontend for SessionStore: every request is a JSON body POSTed to
// /api. GET /health answers "ok".

#include <cstdlib>
#include <string>

#include "braidweave/service.hpp"
#include "httplib.h"

namespace bw {

struct ServeConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "bw-data";

    /// Fills unset fields from BW_PORT and BW_DATA_DIR.
    static ServeConfig from_env() {
        ServeConfig cfg;
        if (const char *p = std::getenv("BW_PORT")) {
            cfg.port = std::atoi(p);
        }
        if (const char *d = std::getenv("BW_DATA_DIR")) {
            cfg.data_dir = d;
        }
        return cfg;
    }
};

inline void install_routes(httplib::Server &server, SessionStore &store) {
    server.Post("/api", [&store](const httplib::Request &req, httplib::Response &res) {
        auto reply = store.handle_text(req.body);
        if (!reply.value("ok", false)) {
            const std::string code = reply["error"].value("code", "");
            res.status = code == "not-found" ? 404 : code == "internal" || code == "io-error" ? 500 : 400;
            if (code == "conflict") {
                res.status = 409;
            }
        }
        res.set_content(reply.dump(), "application/json");
    });
    server.Get("/health", [](const httplib::Request &, httplib::Response &res) {
        res.set_content("ok\n", "text/plain");
    });
}

}  // namespace bw
