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


// bw: compile, optimize, estimate, validate, verify, lk, replay and serve.
//
// Exit codes: 0 success, 1 semantic failure (invalid input, unequal
// signatures, rejected replay), 2 usage error, 3 I/O error.

#include <csignal>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "braidweave/braidweave.hpp"
#include "braidweave/server.hpp"

namespace {

enum Exit { kOk = 0, kSemantic = 1, kUsage = 2, kIo = 3 };

struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool g_json = false;

void emit(const nlohmann::ordered_json &j, const std::string &text) {
    if (g_json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << text;
    }
}

std::string read_input(const std::string &path) {
    return bw::read_text_file(path);
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        bw::write_text_file(path, text);
    }
}

bw::TopoCircuit load_tqc(const std::string &path) {
    try {
        return bw::read_tqc(read_input(path));
    } catch (const bw::FormatError &e) {
        throw SemanticError(path + ": " + e.what());
    }
}

bool has_suffix(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::ordered_json report_json(const bw::ValidityReport &r) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &v : r.violations) {
        nlohmann::ordered_json j;
        j["code"] = v.code;
        j["message"] = v.message;
        j["strands"] = v.strands;
        auto pts = nlohmann::ordered_json::array();
        for (const auto &p : v.points) {
            pts.push_back({p.x, p.y, p.z});
        }
        j["points"] = pts;
        out.push_back(j);
    }
    return out;
}

int cmd_compile(const std::string &in, const std::string &out) {
    bw::ICMCircuit icm;
    try {
        icm = bw::parse_icm(read_input(in));
    } catch (const bw::IcmError &e) {
        throw SemanticError(in + ": " + e.what());
    }
    write_output(out, bw::write_tqc(bw::layout_canonical(icm)));
    return kOk;
}

struct OptimizeArgs {
    std::string in, out, emit_log, emit_trace, strategy = "greedy", objective = "bounding_volume";
    uint64_t seed = 1;
    int max_steps = 1000;
    unsigned workers = 1;
    size_t budget = 4096;
    int beam_width = 4;
    double t0 = 2.0, cooling = 0.95;
    int steps_per_temp = 10;
    bool verify = false;
};

int cmd_optimize(const OptimizeArgs &a) {
    auto c = load_tqc(a.in);
    bw::SearchConfig cfg;
    try {
        cfg.strategy = bw::parse_strategy(a.strategy);
        cfg.objective = bw::parse_objective(a.objective);
    } catch (const std::invalid_argument &e) {
        throw CLI::ValidationError(e.what());
    }
    cfg.seed = a.seed;
    cfg.max_steps = a.max_steps;
    cfg.workers = a.workers;
    cfg.move_budget = a.budget;
    cfg.beam.width = a.beam_width;
    cfg.anneal = {a.t0, a.cooling, a.steps_per_temp};
    cfg.verify = a.verify;
    bw::OptimizeResult r;
    try {
        r = bw::optimize(c, cfg);
    } catch (const std::invalid_argument &e) {
        throw SemanticError(e.what());
    }
    if (!a.emit_log.empty()) {
        bw::write_text_file(a.emit_log, bw::write_moves(r.log));
    }
    if (!a.emit_trace.empty()) {
        bw::write_text_file(a.emit_trace, bw::write_trace_csv(r.trace));
    }
    if (!a.out.empty()) {
        bw::write_text_file(a.out, bw::write_tqc(r.final));
    }
    nlohmann::ordered_json j;
    j["strategy"] = bw::to_string(cfg.strategy);
    j["objective"] = bw::to_string(cfg.objective);
    j["initial"] = r.initial_volume;
    j["final"] = r.final_volume;
    j["steps"] = r.steps_taken;
    j["moves"] = r.log.moves.size();
    std::ostringstream text;
    text << "strategy: " << j["strategy"].get<std::string>() << '\n'
         << "objective: " << j["objective"].get<std::string>() << '\n'
         << "initial: " << r.initial_volume << '\n'
         << "final: " << r.final_volume << '\n'
         << "steps: " << r.steps_taken << '\n'
         << "moves: " << r.log.moves.size() << '\n';
    if (a.out.empty()) {
        std::cout << bw::write_tqc(r.final);
    } else {
        emit(j, text.str());
    }
    return kOk;
}

struct EstimateArgs {
    std::string in, code = "surface", sweep;
    double p = 1e-3, p_th = 1e-2, prefactor = 0.1, eps = 1e-9;
    std::optional<int> d;
};

int cmd_estimate(const EstimateArgs &a) {
    auto c = load_tqc(a.in);
    bw::Code code;
    try {
        code = bw::parse_code(a.code);
    } catch (const std::invalid_argument &e) {
        throw CLI::ValidationError(e.what());
    }
    bw::ErrorModel model{a.p, a.p_th, a.prefactor};
    try {
        if (!a.sweep.empty()) {
            std::vector<int> ds;
            std::istringstream in(a.sweep);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                try {
                    ds.push_back(std::stoi(tok));
                } catch (const std::exception &) {
                    throw CLI::ValidationError("--sweep expects comma-separated integers");
                }
            }
            std::cout << bw::resource_sweep_csv(c, code, model, ds);
            return kOk;
        }
        auto r = bw::estimate(c, code, model, a.eps, a.d);
        nlohmann::ordered_json j;
        j["code"] = bw::to_string(r.code);
        j["volume_pieces"] = r.volume_pieces;
        j["extents"] = {r.extent_x, r.extent_y, r.extent_z};
        j["d"] = r.d;
        j["distance_forced"] = r.distance_forced;
        j["qubits_per_piece"] = r.qubits_per_piece;
        j["steps_per_piece"] = r.steps_per_piece;
        j["qubits"] = r.qubits;
        j["time_steps"] = r.time_steps;
        j["qubits_cross_section"] = r.qubits_cross_section;
        j["qubits_volume"] = r.qubits_volume;
        j["p_phys"] = model.p_phys;
        j["p_th"] = model.p_th;
        j["prefactor"] = model.prefactor;
        j["eps_target"] = r.eps_target;
        j["total_failure"] = r.total_failure;
        emit(j, r.str());
    } catch (const std::invalid_argument &e) {
        throw SemanticError(e.what());
    } catch (const std::domain_error &e) {
        throw SemanticError(e.what());
    }
    return kOk;
}

int cmd_validate(const std::string &in) {
    std::string text = read_input(in);
    bw::ValidityReport report;
    std::string kind;
    if (has_suffix(in, ".icm")) {
        kind = "icm";
        try {
            report = bw::validate_icm(bw::parse_icm(text));
        } catch (const bw::IcmError &e) {
            report.add(bw::to_string(e.code), e.what());
        }
    } else {
        kind = "tqc";
        try {
            report = bw::validate_geometry(bw::read_tqc(text));
        } catch (const bw::FormatError &e) {
            report.add("format", e.what());
        }
    }
    nlohmann::ordered_json j;
    j["file"] = in;
    j["kind"] = kind;
    j["ok"] = report.ok();
    j["violations"] = report_json(report);
    emit(j, report.ok() ? "ok\n" : report.str());
    return report.ok() ? kOk : kSemantic;
}

int cmd_verify(const std::string &a, const std::string &b) {
    auto ca = load_tqc(a);
    auto cb = load_tqc(b);
    auto diff = bw::signatures_equal(ca, cb);
    nlohmann::ordered_json j;
    j["equal"] = static_cast<bool>(diff);
    j["differences"] = diff.differences;
    emit(j, diff ? "signatures equal\n" : diff.str());
    return diff ? kOk : kSemantic;
}

int cmd_lk(const std::string &in, bool signature_text) {
    auto c = load_tqc(in);
    auto report = bw::validate_geometry(c);
    if (!report.ok()) {
        throw SemanticError(in + ": invalid geometry\n" + report.str());
    }
    if (signature_text) {
        std::cout << bw::write_signature(bw::signature(c));
        return kOk;
    }
    auto m = bw::linking_matrix(c);
    nlohmann::ordered_json j;
    j["ids"] = m.ids;
    auto rows = nlohmann::ordered_json::array();
    std::ostringstream text;
    size_t w = 1;
    for (const auto &id : m.ids) {
        w = std::max(w, id.size());
    }
    text << std::string(w, ' ');
    for (const auto &id : m.ids) {
        text << ' ' << std::setw(static_cast<int>(w)) << id;
    }
    text << '\n';
    for (const auto &a : m.ids) {
        auto row = nlohmann::ordered_json::array();
        text << std::setw(static_cast<int>(w)) << a;
        for (const auto &b : m.ids) {
            int v = a == b ? 0 : m.at(a, b);
            row.push_back(v);
            text << ' ' << std::setw(static_cast<int>(w)) << v;
        }
        text << '\n';
        rows.push_back(row);
    }
    j["matrix"] = rows;
    emit(j, text.str());
    return kOk;
}

int cmd_replay(const std::string &base, const std::string &moves, const std::string &out) {
    auto c = load_tqc(base);
    bw::MoveLog log;
    try {
        log = bw::read_moves(read_input(moves));
    } catch (const bw::FormatError &e) {
        throw SemanticError(moves + ": " + e.what());
    }
    bw::TopoCircuit final;
    try {
        final = bw::replay(c, log);
    } catch (const bw::ReplayError &e) {
        throw SemanticError(e.what());
    }
    write_output(out, bw::write_tqc(final));
    return kOk;
}

httplib::Server *g_server = nullptr;

void stop_server(int) {
    if (g_server) {
        g_server->stop();
    }
}

int cmd_serve(bw::ServeConfig cfg, const std::vector<std::string> &puzzles) {
    bw::SessionStore store(cfg.data_dir);
    for (const auto &path : puzzles) {
        auto id = std::filesystem::path(path).stem().string();
        auto existing = store.puzzle_ids();
        if (std::find(existing.begin(), existing.end(), id) != existing.end()) {
            continue;
        }
        try {
            store.create_puzzle(id, id, read_input(path));
        } catch (const bw::ServiceError &e) {
            throw SemanticError(path + ": " + e.what());
        }
    }
    httplib::Server server;
    bw::install_routes(server, store);
    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    int port = cfg.port;
    if (port == 0) {
        port = server.bind_to_any_port(cfg.host);
    } else if (!server.bind_to_port(cfg.host, port)) {
        std::cerr << "bw serve: cannot bind " << cfg.host << ':' << port << '\n';
        return kIo;
    }
    std::cout << "listening on " << cfg.host << ':' << port << std::endl;
    server.listen_after_bind();
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"bw: defect-braiding circuit compiler and compressor"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string in, in2, out;
    auto *compile = app.add_subcommand("compile", "Lower an .icm circuit to canonical .tqc geometry");
    compile->add_option("input", in, "Input .icm")->required();
    compile->add_option("-o,--output", out, "Output .tqc (default stdout)");

    OptimizeArgs oa;
    auto *optimize = app.add_subcommand("optimize", "Compress a .tqc circuit with topology-preserving moves");
    optimize->add_option("input", oa.in, "Input .tqc")->required();
    optimize->add_option("-o,--output", oa.out, "Output .tqc (default stdout)");
    optimize->add_option("--strategy", oa.strategy, "greedy, anneal or beam");
    optimize->add_option("--objective", oa.objective, "bounding_volume or occupied_cells");
    optimize->add_option("--seed", oa.seed);
    optimize->add_option("--max-steps", oa.max_steps)->check(CLI::NonNegativeNumber);
    optimize->add_option("--workers", oa.workers)->check(CLI::PositiveNumber);
    optimize->add_option("--budget", oa.budget, "Candidate moves per step")->check(CLI::PositiveNumber);
    optimize->add_option("--beam-width", oa.beam_width)->check(CLI::PositiveNumber);
    optimize->add_option("--t0", oa.t0);
    optimize->add_option("--cooling", oa.cooling);
    optimize->add_option("--steps-per-temp", oa.steps_per_temp);
    optimize->add_option("--emit-log", oa.emit_log, "Write the .moves log here");
    optimize->add_option("--emit-trace", oa.emit_trace, "Write the objective trace CSV here");
    optimize->add_flag("--verify", oa.verify, "Re-check geometry and signature after every accepted move");

    EstimateArgs ea;
    auto *estimate = app.add_subcommand("estimate", "Physical qubits and time for a .tqc circuit");
    estimate->add_option("input", ea.in, "Input .tqc")->required();
    estimate->add_option("--code", ea.code, "surface or raussendorf");
    estimate->add_option("--p", ea.p, "Physical error rate");
    estimate->add_option("--p-th", ea.p_th, "Threshold error rate");
    estimate->add_option("--prefactor", ea.prefactor);
    estimate->add_option("--eps", ea.eps, "Target total logical failure");
    estimate->add_option("--d", ea.d, "Force the code distance");
    estimate->add_option("--sweep", ea.sweep, "Comma-separated distances; prints CSV");

    auto *validate = app.add_subcommand("validate", "Check an .icm or .tqc file");
    validate->add_option("input", in, "Input file")->required();

    auto *verify = app.add_subcommand("verify", "Compare the topological signatures of two .tqc files");
    verify->add_option("a", in, "First .tqc")->required();
    verify->add_option("b", in2, "Second .tqc")->required();

    bool signature_text = false;
    auto *lk = app.add_subcommand("lk", "Print the linking matrix of a .tqc file");
    lk->add_option("input", in, "Input .tqc")->required();
    lk->add_flag("--signature", signature_text, "Print the full signature instead");

    auto *replay = app.add_subcommand("replay", "Apply a .moves log to its base circuit");
    replay->add_option("base", in, "Base .tqc")->required();
    replay->add_option("moves", in2, "Move log")->required();
    replay->add_option("-o,--output", out, "Output .tqc (default stdout)");

    auto sc = bw::ServeConfig::from_env();
    std::vector<std::string> puzzles;
    auto *serve = app.add_subcommand("serve", "Run the puzzle session service");
    serve->add_option("--host", sc.host);
    serve->add_option("--port", sc.port, "TCP port, 0 for any (env BW_PORT)");
    serve->add_option("--data-dir", sc.data_dir, "Log directory (env BW_DATA_DIR)");
    serve->add_option("--puzzle", puzzles, "Seed a puzzle from a .tqc file, id = file stem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    g_json = format == "json";

    try {
        if (*compile) {
            return cmd_compile(in, out);
        }
        if (*optimize) {
            return cmd_optimize(oa);
        }
        if (*estimate) {
            return cmd_estimate(ea);
        }
        if (*validate) {
            return cmd_validate(in);
        }
        if (*verify) {
            return cmd_verify(in, in2);
        }
        if (*lk) {
            return cmd_lk(in, signature_text);
        }
        if (*replay) {
            return cmd_replay(in, in2, out);
        }
        if (*serve) {
            return cmd_serve(sc, puzzles);
        }
    } catch (const CLI::ValidationError &e) {
        std::cerr << "bw: " << e.what() << '\n';
        return kUsage;
    } catch (const SemanticError &e) {
        if (g_json) {
            nlohmann::ordered_json j;
            j["error"] = e.what();
            std::cout << j.dump(2) << '\n';
        }
        std::cerr << "bw: " << e.what() << '\n';
        return kSemantic;
    } catch (const std::ios_base::failure &e) {
        std::cerr << "bw: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "bw: " << e.what() << '\n';
        return kIo;
    } catch (const bw::ServiceError &e) {
        std::cerr << "bw: " << e.what() << '\n';
        return e.code == "io-error" ? kIo : kSemantic;
    } catch (const std::exception &e) {
        std::cerr << "bw: " << e.what() << '\n';
        return kSemantic;
    }
    return kUsage;
}
