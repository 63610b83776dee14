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

// The .tqc geometry file: a JSON document whose top-level fields are written
// in a fixed order (version, bounds, ports, strands), one port or strand per
// line, so equal circuits serialize to identical bytes.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "braidweave/geometry.hpp"
#include "json.hpp"

namespace bw {

inline constexpr int kTqcVersion = 1;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::ordered_json point_json(const Point &p) {
    return nlohmann::ordered_json::array({p.x, p.y, p.z});
}

inline Point point_from_json(const nlohmann::json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 3) {
        throw FormatError(where + ": expected [x,y,z]");
    }
    Point p;
    for (int a = 0; a < 3; a++) {
        if (!j[a].is_number_integer()) {
            throw FormatError(where + ": coordinates must be integers");
        }
        p[a] = j[a].get<int64_t>();
    }
    return p;
}

inline std::string required_string(const nlohmann::json &j, const char *key, const std::string &where) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw FormatError(where + ": missing string field '" + key + "'");
    }
    return j[key].get<std::string>();
}

}  // namespace detail

inline nlohmann::ordered_json port_to_json(const PortLabel &port) {
    nlohmann::ordered_json j;
    j["name"] = port.name;
    j["position"] = detail::point_json(port.position);
    j["face"] = to_string(port.face);
    return j;
}

inline nlohmann::ordered_json strand_to_json(const DefectStrand &s) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["kind"] = to_string(s.kind);
    j["closure"] = to_string(s.closure);
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto &[k, v] : s.meta) {
        meta[k] = v;
    }
    j["meta"] = meta;
    nlohmann::ordered_json path = nlohmann::ordered_json::array();
    for (const auto &p : s.path) {
        path.push_back(detail::point_json(p));
    }
    j["path"] = path;
    return j;
}

inline std::string write_tqc(const TopoCircuit &c) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << kTqcVersion << ",\n";
    out << "  \"bounds\": [" << c.bounds.x << ", " << c.bounds.y << ", " << c.bounds.z << "],\n";
    out << "  \"ports\": [";
    for (size_t i = 0; i < c.ports.size(); i++) {
        out << (i ? ",\n    " : "\n    ") << port_to_json(c.ports[i]).dump();
    }
    out << (c.ports.empty() ? "],\n" : "\n  ],\n");
    out << "  \"strands\": [";
    for (size_t i = 0; i < c.strands.size(); i++) {
        out << (i ? ",\n    " : "\n    ") << strand_to_json(c.strands[i]).dump();
    }
    out << (c.strands.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

inline PortLabel port_from_json(const nlohmann::json &j, const std::string &where) {
    PortLabel port;
    port.name = detail::required_string(j, "name", where);
    if (!j.contains("position")) {
        throw FormatError(where + ": missing 'position'");
    }
    port.position = detail::point_from_json(j["position"], where + ".position");
    std::string face = detail::required_string(j, "face", where);
    if (face == "input") {
        port.face = Face::input;
    } else if (face == "output") {
        port.face = Face::output;
    } else {
        throw FormatError(where + ": face must be 'input' or 'output'");
    }
    return port;
}

inline DefectStrand strand_from_json(const nlohmann::json &j, const std::string &where) {
    DefectStrand s;
    s.id = detail::required_string(j, "id", where);
    std::string kind = detail::required_string(j, "kind", where);
    if (kind == "primal") {
        s.kind = StrandKind::primal;
    } else if (kind == "dual") {
        s.kind = StrandKind::dual;
    } else {
        throw FormatError(where + ": kind must be 'primal' or 'dual'");
    }
    std::string closure = detail::required_string(j, "closure", where);
    if (closure == "closed") {
        s.closure = Closure::closed;
    } else if (closure == "open") {
        s.closure = Closure::open;
    } else {
        throw FormatError(where + ": closure must be 'closed' or 'open'");
    }
    if (j.contains("meta")) {
        if (!j["meta"].is_object()) {
            throw FormatError(where + ".meta: expected an object");
        }
        for (const auto &[k, v] : j["meta"].items()) {
            if (!v.is_string()) {
                throw FormatError(where + ".meta." + k + ": labels are strings");
            }
            s.meta[k] = v.get<std::string>();
        }
    }
    if (!j.contains("path") || !j["path"].is_array()) {
        throw FormatError(where + ": missing 'path' array");
    }
    for (size_t i = 0; i < j["path"].size(); i++) {
        s.path.push_back(detail::point_from_json(j["path"][i], where + ".path[" + std::to_string(i) + "]"));
    }
    return s;
}

/// Parses .tqc text. Structural problems throw FormatError; geometric
/// validity is a separate question answered by validate_geometry.
inline TopoCircuit read_tqc(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(std::string("tqc: ") + e.what());
    }
    if (!j.is_object()) {
        throw FormatError("tqc: top level must be an object");
    }
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kTqcVersion) {
        throw FormatError("tqc: unsupported or missing version");
    }
    TopoCircuit c;
    Point b = detail::point_from_json(j.value("bounds", nlohmann::json()), "tqc.bounds");
    c.bounds = {b.x, b.y, b.z};
    if (j.contains("ports")) {
        for (size_t i = 0; i < j["ports"].size(); i++) {
            c.ports.push_back(port_from_json(j["ports"][i], "tqc.ports[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("strands")) {
        for (size_t i = 0; i < j["strands"].size(); i++) {
            c.strands.push_back(strand_from_json(j["strands"][i], "tqc.strands[" + std::to_string(i) + "]"));
        }
    }
    return c;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::ios_base::failure("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw std::ios_base::failure("write failed for '" + path + "'");
    }
}

}  // namespace bw
