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

// Puzzle session store. Each puzzle owns one append-only JSON-lines log:
// a header record holding the base geometry, then one record per accepted
// tree node. Records are fsync'ed before a submission is acknowledged and the
// whole state is rebuilt from the logs on startup.
//
// Requests and responses are JSON objects carrying "v": 1. handle() is the
// single entry point used by the HTTP frontend and the tests.

#include <fcntl.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "braidweave/geometry.hpp"
#include "braidweave/moves.hpp"
#include "braidweave/topology.hpp"
#include "braidweave/tqc.hpp"
#include "json.hpp"

namespace bw {

inline constexpr int kProtocolVersion = 1;

/// A request that cannot be served. `code` is one of bad-request,
/// not-found, conflict, unsupported-version or io-error.
struct ServiceError : std::runtime_error {
    std::string code;
    ServiceError(std::string code_, const std::string &what) : std::runtime_error(what), code(std::move(code_)) {
    }
};

struct TreeNode {
    uint64_t id = 0;
    std::optional<uint64_t> parent;
    std::optional<Move> move;
    int64_t volume = 0;
    std::string author;
    std::shared_ptr<const TopoCircuit> circuit;
};

struct PuzzleState {
    std::string id;
    std::string title;
    std::string created_at;
    std::string base_tqc;
    TopoSignature base_signature;
    std::vector<TreeNode> nodes;

    int64_t best_volume() const {
        int64_t best = nodes.front().volume;
        for (const auto &n : nodes) {
            best = std::min(best, n.volume);
        }
        return best;
    }
    /// Lowest-volume node, earliest on ties.
    const TreeNode &best_node() const {
        const TreeNode *best = &nodes.front();
        for (const auto &n : nodes) {
            if (n.volume < best->volume) {
                best = &n;
            }
        }
        return *best;
    }
};

namespace detail {

inline bool valid_puzzle_id(const std::string &id) {
    if (id.empty() || id.size() > 64) {
        return false;
    }
    for (char ch : id) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) {
            return false;
        }
    }
    return true;
}

inline std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json report_json(const ValidityReport &r) {
    auto out = nlohmann::json::array();
    for (const auto &v : r.violations) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto &p : v.points) {
            pts.push_back({p.x, p.y, p.z});
        }
        out.push_back({{"code", v.code}, {"message", v.message}, {"strands", v.strands}, {"points", pts}});
    }
    return out;
}

/// Appends one line to `path` and flushes it to stable storage.
inline void durable_append(const std::filesystem::path &path, const std::string &line) {
    int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw ServiceError("io-error", "cannot open " + path.string());
    }
    std::string data = line + "\n";
    const char *p = data.data();
    size_t left = data.size();
    while (left > 0) {
        ssize_t n = ::write(fd, p, left);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            ::close(fd);
            throw ServiceError("io-error", "write failed on " + path.string());
        }
        p += n;
        left -= static_cast<size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        throw ServiceError("io-error", "fsync failed on " + path.string());
    }
    ::close(fd);
}

}  // namespace detail

class SessionStore {
   public:
    /// Opens (creating if needed) `data_dir` and replays every *.log in it.
    explicit SessionStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
        std::filesystem::create_directories(dir_);
        std::vector<std::filesystem::path> logs;
        for (const auto &entry : std::filesystem::directory_iterator(dir_)) {
            if (entry.is_regular_file() && entry.path().extension() == ".log") {
                logs.push_back(entry.path());
            }
        }
        std::sort(logs.begin(), logs.end());
        for (const auto &path : logs) {
            load(path);
        }
    }

    SessionStore(const SessionStore &) = delete;
    SessionStore &operator=(const SessionStore &) = delete;

    const std::filesystem::path &data_dir() const {
        return dir_;
    }

    /// Registers a new puzzle. Throws ServiceError on duplicate id or
    /// invalid geometry.
    void create_puzzle(const std::string &id, const std::string &title, const std::string &tqc,
                       std::string created_at = "") {
        if (!detail::valid_puzzle_id(id)) {
            throw ServiceError("bad-request", "puzzle id must be 1-64 characters of [A-Za-z0-9_-]");
        }
        TopoCircuit base;
        try {
            base = read_tqc(tqc);
        } catch (const FormatError &e) {
            throw ServiceError("bad-request", std::string("base geometry: ") + e.what());
        }
        auto report = validate_geometry(base);
        if (!report.ok()) {
            throw ServiceError("bad-request", "base geometry is invalid:\n" + report.str());
        }
        if (created_at.empty()) {
            created_at = detail::utc_now();
        }
        std::unique_lock lock(map_mutex_);
        if (puzzles_.count(id)) {
            throw ServiceError("conflict", "puzzle '" + id + "' already exists");
        }
        nlohmann::ordered_json header;
        header["v"] = kProtocolVersion;
        header["type"] = "puzzle";
        header["id"] = id;
        header["title"] = title;
        header["created_at"] = created_at;
        header["base"] = write_tqc(base);
        detail::durable_append(log_path(id), header.dump());
        auto slot = std::make_shared<Slot>();
        slot->state = make_state(id, title, created_at, base);
        puzzles_[id] = std::move(slot);
    }

    std::vector<std::string> puzzle_ids() const {
        std::shared_lock lock(map_mutex_);
        std::vector<std::string> out;
        for (const auto &[id, _] : puzzles_) {
            out.push_back(id);
        }
        return out;
    }

    /// Copy of a puzzle's current state.
    PuzzleState snapshot(const std::string &id) const {
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        return slot->state;
    }

    /// Validates `m` against node `node` without changing anything.
    ValidityReport check(const std::string &puzzle, uint64_t node, const Move &m, TopoCircuit *result = nullptr) const {
        auto slot = find(puzzle);
        std::shared_ptr<const TopoCircuit> parent;
        {
            std::lock_guard lock(slot->mutex);
            parent = node_of(slot->state, node).circuit;
        }
        return MoveContext(*parent).check(m, result);
    }

    struct Submission {
        bool accepted = false;
        uint64_t node = 0;
        int64_t volume = 0;
        ValidityReport report;
    };

    /// Re-validates `m` against node `parent` and, if sound, appends a child.
    /// The log record is on disk before this returns.
    Submission submit(const std::string &puzzle, uint64_t parent, const Move &m, const std::string &author) {
        auto slot = find(puzzle);
        std::lock_guard lock(slot->mutex);
        auto &st = slot->state;
        const auto &from = node_of(st, parent);
        Submission out;
        TopoCircuit next;
        out.report = MoveContext(*from.circuit).check(m, &next);
        if (!out.report.ok()) {
            return out;
        }
        auto diff = signatures_equal(st.base_signature, signature(next));
        if (!diff) {
            out.report.add("would-change-signature", "would change signature: " + diff.str());
            return out;
        }
        TreeNode child;
        child.id = st.nodes.size();
        child.parent = parent;
        child.move = m;
        child.move->id = 0;
        child.volume = bounding_volume(next);
        child.author = author;
        child.circuit = std::make_shared<const TopoCircuit>(std::move(next));

        nlohmann::ordered_json rec;
        rec["v"] = kProtocolVersion;
        rec["type"] = "node";
        rec["node"] = child.id;
        rec["parent"] = parent;
        rec["move"] = format_move(*child.move);
        rec["author"] = author;
        rec["volume"] = child.volume;
        detail::durable_append(log_path(puzzle), rec.dump());

        out.accepted = true;
        out.node = child.id;
        out.volume = child.volume;
        st.nodes.push_back(std::move(child));
        return out;
    }

    /// Moves along the path from the root to `node`.
    MoveLog path_log(const std::string &puzzle, uint64_t node) const {
        auto slot = find(puzzle);
        std::lock_guard lock(slot->mutex);
        const auto &st = slot->state;
        node_of(st, node);
        std::vector<Move> moves;
        for (std::optional<uint64_t> cur = node; cur; cur = st.nodes[*cur].parent) {
            if (st.nodes[*cur].move) {
                moves.push_back(*st.nodes[*cur].move);
            }
        }
        MoveLog log;
        log.base_hash = sha256_hex(st.base_tqc);
        for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
            log.append(*it);
        }
        return log;
    }

    std::string node_tqc(const std::string &puzzle, uint64_t node) const {
        auto slot = find(puzzle);
        std::lock_guard lock(slot->mutex);
        return write_tqc(*node_of(slot->state, node).circuit);
    }

    /// Protocol entry point. Never throws: failures become error responses.
    nlohmann::json handle(const nlohmann::json &req) {
        try {
            return dispatch(req);
        } catch (const ServiceError &e) {
            return error_response(e.code, e.what());
        } catch (const nlohmann::json::exception &e) {
            return error_response("bad-request", e.what());
        } catch (const FormatError &e) {
            return error_response("bad-request", e.what());
        } catch (const std::exception &e) {
            return error_response("internal", e.what());
        }
    }

    nlohmann::json handle_text(const std::string &body) {
        nlohmann::json req;
        try {
            req = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception &e) {
            return error_response("bad-request", std::string("malformed JSON: ") + e.what());
        }
        return handle(req);
    }

   private:
    struct Slot {
        mutable std::mutex mutex;
        PuzzleState state;
    };

    std::filesystem::path dir_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> puzzles_;

    std::filesystem::path log_path(const std::string &id) const {
        return dir_ / (id + ".log");
    }

    std::shared_ptr<Slot> find(const std::string &id) const {
        std::shared_lock lock(map_mutex_);
        auto it = puzzles_.find(id);
        if (it == puzzles_.end()) {
            throw ServiceError("not-found", "unknown puzzle '" + id + "'");
        }
        return it->second;
    }

    static const TreeNode &node_of(const PuzzleState &st, uint64_t node) {
        if (node >= st.nodes.size()) {
            throw ServiceError("not-found", "unknown node " + std::to_string(node) + " in puzzle '" + st.id + "'");
        }
        return st.nodes[node];
    }

    static PuzzleState make_state(const std::string &id, const std::string &title, const std::string &created_at,
                                  const TopoCircuit &base) {
        PuzzleState st;
        st.id = id;
        st.title = title;
        st.created_at = created_at;
        st.base_tqc = write_tqc(base);
        st.base_signature = signature(base);
        TreeNode root;
        root.volume = bounding_volume(base);
        root.author = "";
        root.circuit = std::make_shared<const TopoCircuit>(base);
        st.nodes.push_back(std::move(root));
        return st;
    }

    /// Rebuilds one puzzle from its log. A torn final line (a crash between
    /// write and fsync) is cut off; damage anywhere else is fatal.
    void load(const std::filesystem::path &path) {
        std::ifstream in(path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::vector<std::pair<size_t, std::string>> lines;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t nl = text.find('\n', pos);
            if (nl == std::string::npos) {
                break;
            }
            lines.push_back({pos, text.substr(pos, nl - pos)});
            pos = nl + 1;
        }
        size_t good_end = pos;
        std::shared_ptr<Slot> slot;
        for (size_t i = 0; i < lines.size(); i++) {
            const auto &[offset, line] = lines[i];
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception &) {
                if (i + 1 == lines.size()) {
                    good_end = offset;
                    break;
                }
                throw std::runtime_error(path.string() + ": corrupt record on line " + std::to_string(i + 1));
            }
            auto where = path.string() + " line " + std::to_string(i + 1) + ": ";
            if (i == 0) {
                if (rec.value("type", "") != "puzzle") {
                    throw std::runtime_error(where + "expected puzzle header");
                }
                slot = std::make_shared<Slot>();
                slot->state = make_state(rec.at("id"), rec.at("title"), rec.at("created_at"),
                                         read_tqc(rec.at("base").get<std::string>()));
                continue;
            }
            auto &st = slot->state;
            uint64_t parent = rec.at("parent");
            uint64_t id = rec.at("node");
            if (id != st.nodes.size() || parent >= st.nodes.size()) {
                throw std::runtime_error(where + "node records out of order");
            }
            Move m = parse_move(rec.at("move").get<std::string>());
            TopoCircuit next;
            auto report = MoveContext(*st.nodes[parent].circuit).check(m, &next);
            if (!report.ok()) {
                throw std::runtime_error(where + "logged move no longer applies:\n" + report.str());
            }
            TreeNode node;
            node.id = id;
            node.parent = parent;
            node.move = m;
            node.volume = bounding_volume(next);
            node.author = rec.at("author");
            node.circuit = std::make_shared<const TopoCircuit>(std::move(next));
            if (node.volume != rec.at("volume").get<int64_t>()) {
                throw std::runtime_error(where + "logged volume disagrees with replay");
            }
            st.nodes.push_back(std::move(node));
        }
        if (!slot) {
            // Header never made it to disk.
            std::filesystem::remove(path);
            return;
        }
        if (good_end < text.size()) {
            std::filesystem::resize_file(path, good_end);
        }
        puzzles_[slot->state.id] = std::move(slot);
    }

    static nlohmann::json ok_response() {
        return {{"v", kProtocolVersion}, {"ok", true}};
    }

    static nlohmann::json error_response(const std::string &code, const std::string &message) {
        return {{"v", kProtocolVersion}, {"ok", false}, {"error", {{"code", code}, {"message", message}}}};
    }

    static std::string req_string(const nlohmann::json &req, const char *key) {
        if (!req.contains(key) || !req[key].is_string()) {
            throw ServiceError("bad-request", std::string("missing string field '") + key + "'");
        }
        return req[key].get<std::string>();
    }

    static uint64_t req_node(const nlohmann::json &req) {
        if (!req.contains("node")) {
            return 0;
        }
        if (!req["node"].is_number_integer() || req["node"].get<int64_t>() < 0) {
            throw ServiceError("bad-request", "field 'node' must be a non-negative integer");
        }
        return req["node"].get<uint64_t>();
    }

    static Move req_move(const nlohmann::json &req) {
        return parse_move(req_string(req, "move"));
    }

    static nlohmann::json node_json(const TreeNode &n) {
        nlohmann::json j = {{"id", n.id}, {"volume", n.volume}, {"author", n.author}};
        j["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
        j["move"] = n.move ? nlohmann::json(format_move(*n.move)) : nlohmann::json(nullptr);
        return j;
    }

    nlohmann::json dispatch(const nlohmann::json &req) {
        if (!req.is_object()) {
            throw ServiceError("bad-request", "request must be a JSON object");
        }
        if (!req.contains("v") || req["v"] != kProtocolVersion) {
            throw ServiceError("unsupported-version", "expected \"v\": 1");
        }
        const std::string op = req_string(req, "op");
        auto res = ok_response();
        if (op == "list_puzzles") {
            res["puzzles"] = nlohmann::json::array();
            for (const auto &id : puzzle_ids()) {
                auto st = snapshot(id);
                res["puzzles"].push_back({{"id", st.id},
                                          {"title", st.title},
                                          {"created_at", st.created_at},
                                          {"base_volume", st.nodes.front().volume},
                                          {"best_known_volume", st.best_volume()},
                                          {"nodes", st.nodes.size()}});
            }
        } else if (op == "get_puzzle") {
            auto st = snapshot(req_string(req, "puzzle"));
            res["puzzle"] = {{"id", st.id},
                             {"title", st.title},
                             {"created_at", st.created_at},
                             {"base_volume", st.nodes.front().volume},
                             {"best_known_volume", st.best_volume()},
                             {"tqc", st.base_tqc}};
        } else if (op == "get_tree") {
            auto st = snapshot(req_string(req, "puzzle"));
            res["root"] = 0;
            res["nodes"] = nlohmann::json::array();
            for (const auto &n : st.nodes) {
                res["nodes"].push_back(node_json(n));
            }
        } else if (op == "check_move") {
            TopoCircuit result;
            auto report = check(req_string(req, "puzzle"), req_node(req), req_move(req), &result);
            res["valid"] = report.ok();
            res["violations"] = detail::report_json(report);
            if (report.ok()) {
                res["volume"] = bounding_volume(result);
            }
        } else if (op == "submit_move") {
            auto author = req.contains("author") ? req_string(req, "author") : std::string();
            auto sub = submit(req_string(req, "puzzle"), req_node(req), req_move(req), author);
            res["accepted"] = sub.accepted;
            if (sub.accepted) {
                res["node"] = sub.node;
                res["volume"] = sub.volume;
            } else {
                res["reason"] = sub.report.violations.front().message;
                res["violations"] = detail::report_json(sub.report);
            }
        } else if (op == "leaderboard") {
            res["leaderboard"] = nlohmann::json::array();
            for (const auto &id : puzzle_ids()) {
                auto st = snapshot(id);
                const auto &best = st.best_node();
                res["leaderboard"].push_back(
                    {{"puzzle", id}, {"volume", best.volume}, {"node", best.id}, {"author", best.author}});
            }
        } else if (op == "export") {
            auto puzzle = req_string(req, "puzzle");
            auto format = req.contains("format") ? req_string(req, "format") : std::string("tqc");
            if (format == "tqc") {
                res["data"] = node_tqc(puzzle, req_node(req));
            } else if (format == "moves") {
                res["data"] = write_moves(path_log(puzzle, req_node(req)));
            } else {
                throw ServiceError("bad-request", "format must be tqc or moves");
            }
            res["format"] = format;
        } else if (op == "create_puzzle") {
            auto id = req_string(req, "id");
            create_puzzle(id, req.contains("title") ? req_string(req, "title") : id, req_string(req, "tqc"));
            res["id"] = id;
        } else {
            throw ServiceError("bad-request", "unknown op '" + op + "'");
        }
        return res;
    }
};

}  // namespace bw
