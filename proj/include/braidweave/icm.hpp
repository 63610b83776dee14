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

// Initialization / CNOT / Measurement circuits and the .icm text format.
//
//   # comment
//   name dist7                 (optional)
//   qubits N
//   input q | output q         (optional, marks a line as an open circuit end)
//   init q Z0|X+|A|Y
//   cnot c t
//   measure q Z|X [flag]
//
// Statements are separated by newlines or ';'.

#include <cctype>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidweave/diagnostics.hpp"

namespace bw {

enum class InitBasis { Z0, Xplus, A, Y };
enum class MeasureBasis { Z, X };

inline const char *to_string(InitBasis b) {
    switch (b) {
        case InitBasis::Z0:
            return "Z0";
        case InitBasis::Xplus:
            return "X+";
        case InitBasis::A:
            return "A";
        case InitBasis::Y:
            return "Y";
    }
    return "?";
}
inline const char *to_string(MeasureBasis b) {
    return b == MeasureBasis::Z ? "Z" : "X";
}

struct ICMEvent {
    enum class Kind { init, cnot, measure };
    Kind kind = Kind::init;
    int qubit = 0;   // init/measure qubit, or CNOT control
    int target = 0;  // CNOT only
    InitBasis init_basis = InitBasis::Z0;
    MeasureBasis measure_basis = MeasureBasis::Z;
    std::string flag;  // classical correction flag on a measurement

    static ICMEvent init(int q, InitBasis b) {
        ICMEvent e;
        e.kind = Kind::init;
        e.qubit = q;
        e.init_basis = b;
        return e;
    }
    static ICMEvent cnot(int control, int target) {
        ICMEvent e;
        e.kind = Kind::cnot;
        e.qubit = control;
        e.target = target;
        return e;
    }
    static ICMEvent measure(int q, MeasureBasis b, std::string flag = {}) {
        ICMEvent e;
        e.kind = Kind::measure;
        e.qubit = q;
        e.measure_basis = b;
        e.flag = std::move(flag);
        return e;
    }
    bool operator==(const ICMEvent &) const = default;
};

struct ICMCircuit {
    std::string name;
    int num_qubits = 0;
    std::vector<ICMEvent> events;
    std::set<int> inputs;
    std::set<int> outputs;

    size_t cnot_count() const {
        size_t n = 0;
        for (const auto &e : events) {
            n += e.kind == ICMEvent::Kind::cnot;
        }
        return n;
    }
};

enum class IcmErrorCode {
    syntax,
    index_out_of_range,
    double_init,
    use_before_init,
    use_after_measure,
    cnot_self_target,
    double_measure,
    missing_init,
    missing_measure,
    io_conflict,
};

inline const char *to_string(IcmErrorCode code) {
    switch (code) {
        case IcmErrorCode::syntax:
            return "syntax error";
        case IcmErrorCode::index_out_of_range:
            return "qubit index out of range";
        case IcmErrorCode::double_init:
            return "double init";
        case IcmErrorCode::use_before_init:
            return "use before init";
        case IcmErrorCode::use_after_measure:
            return "use after measure";
        case IcmErrorCode::cnot_self_target:
            return "CNOT self-target";
        case IcmErrorCode::double_measure:
            return "double measure";
        case IcmErrorCode::missing_init:
            return "missing init";
        case IcmErrorCode::missing_measure:
            return "missing measure";
        case IcmErrorCode::io_conflict:
            return "input/output conflict";
    }
    return "?";
}

struct IcmError : std::runtime_error {
    IcmErrorCode code;
    int line;
    int column;
    IcmError(IcmErrorCode c, int l, int col, const std::string &detail)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(col) + ": " + to_string(c) +
                             (detail.empty() ? "" : ": " + detail)),
          code(c),
          line(l),
          column(col) {
    }
};

namespace detail {

/// Tracks per-qubit lifecycle (fresh -> live -> measured) and reports the
/// first ordering problem an event causes.
class IcmTracker {
   public:
    explicit IcmTracker(int n) : state_(static_cast<size_t>(std::max(n, 0)), State::fresh), n_(n) {
    }

    /// Returns false and fills `code`/`detail` if `e` breaks ordering.
    bool step(const ICMEvent &e, IcmErrorCode &code, std::string &detail) {
        auto in_range = [&](int q) {
            return q >= 0 && q < n_;
        };
        if (!in_range(e.qubit) || (e.kind == ICMEvent::Kind::cnot && !in_range(e.target))) {
            code = IcmErrorCode::index_out_of_range;
            detail = "qubits are numbered 0.." + std::to_string(n_ - 1);
            return false;
        }
        auto &s = state_[static_cast<size_t>(e.qubit)];
        switch (e.kind) {
            case ICMEvent::Kind::init:
                if (s != State::fresh) {
                    code = IcmErrorCode::double_init;
                    detail = "qubit " + std::to_string(e.qubit);
                    return false;
                }
                s = State::live;
                return true;
            case ICMEvent::Kind::cnot: {
                if (e.qubit == e.target) {
                    code = IcmErrorCode::cnot_self_target;
                    detail = "qubit " + std::to_string(e.qubit);
                    return false;
                }
                for (int q : {e.qubit, e.target}) {
                    auto st = state_[static_cast<size_t>(q)];
                    if (st == State::fresh) {
                        code = IcmErrorCode::use_before_init;
                        detail = "qubit " + std::to_string(q);
                        return false;
                    }
                    if (st == State::measured) {
                        code = IcmErrorCode::use_after_measure;
                        detail = "qubit " + std::to_string(q);
                        return false;
                    }
                }
                return true;
            }
            case ICMEvent::Kind::measure:
                if (s == State::fresh) {
                    code = IcmErrorCode::use_before_init;
                    detail = "qubit " + std::to_string(e.qubit);
                    return false;
                }
                if (s == State::measured) {
                    code = IcmErrorCode::double_measure;
                    detail = "qubit " + std::to_string(e.qubit);
                    return false;
                }
                s = State::measured;
                return true;
        }
        return true;
    }

    /// Qubits never initialized / never measured.
    std::vector<std::pair<int, IcmErrorCode>> unfinished() const {
        std::vector<std::pair<int, IcmErrorCode>> out;
        for (int q = 0; q < n_; q++) {
            auto s = state_[static_cast<size_t>(q)];
            if (s == State::fresh) {
                out.push_back({q, IcmErrorCode::missing_init});
            } else if (s == State::live) {
                out.push_back({q, IcmErrorCode::missing_measure});
            }
        }
        return out;
    }

   private:
    enum class State { fresh, live, measured };
    std::vector<State> state_;
    int n_;
};

inline bool parse_int(const std::string &tok, int &out) {
    if (tok.empty() || tok.size() > 9) {
        return false;
    }
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            return false;
        }
    }
    out = std::stoi(tok);
    return true;
}

}  // namespace detail

/// Lists every index and ordering violation of an already-built circuit.
inline ValidityReport validate_icm(const ICMCircuit &c) {
    ValidityReport r;
    if (c.num_qubits < 0) {
        r.add("syntax", "negative qubit count");
        return r;
    }
    // Rejected events leave the tracker untouched so later events are still
    // checked.
    detail::IcmTracker tracker(c.num_qubits);
    for (size_t i = 0; i < c.events.size(); i++) {
        IcmErrorCode code{};
        std::string detail;
        detail::IcmTracker probe = tracker;
        if (probe.step(c.events[i], code, detail)) {
            tracker = probe;
        } else {
            r.add(to_string(code), "event " + std::to_string(i) + ": " + detail);
        }
    }
    for (auto [q, code] : tracker.unfinished()) {
        r.add(to_string(code), "qubit " + std::to_string(q));
    }
    for (int q : c.inputs) {
        if (q < 0 || q >= c.num_qubits) {
            r.add(to_string(IcmErrorCode::index_out_of_range), "input designation for qubit " + std::to_string(q));
        } else if (c.outputs.count(q)) {
            r.add(to_string(IcmErrorCode::io_conflict), "qubit " + std::to_string(q) + " is both input and output");
        }
    }
    for (int q : c.outputs) {
        if (q < 0 || q >= c.num_qubits) {
            r.add(to_string(IcmErrorCode::index_out_of_range), "output designation for qubit " + std::to_string(q));
        }
    }
    return r;
}

/// Parses .icm text, stopping at the first problem with its line and column.
inline ICMCircuit parse_icm(const std::string &text) {
    ICMCircuit c;
    bool have_header = false;
    std::unique_ptr<detail::IcmTracker> tracker;
    int line = 1;
    int last_line = 1;
    size_t pos = 0;

    auto run_statement = [&](const std::string &stmt, int col0) {
        // Tokenize, remembering each token's column.
        std::vector<std::pair<std::string, int>> toks;
        size_t i = 0;
        while (i < stmt.size()) {
            while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i]))) {
                i++;
            }
            size_t start = i;
            while (i < stmt.size() && !std::isspace(static_cast<unsigned char>(stmt[i]))) {
                i++;
            }
            if (i > start) {
                toks.push_back({stmt.substr(start, i - start), col0 + static_cast<int>(start)});
            }
        }
        if (toks.empty()) {
            return;
        }
        last_line = line;
        const std::string &op = toks[0].first;
        int col = toks[0].second;
        auto syntax = [&](const std::string &why, int at) {
            throw IcmError(IcmErrorCode::syntax, line, at, why);
        };
        auto want_int = [&](size_t k) {
            if (k >= toks.size()) {
                syntax("'" + op + "' is missing an argument", col);
            }
            int v = 0;
            if (!detail::parse_int(toks[k].first, v)) {
                syntax("expected a non-negative integer, got '" + toks[k].first + "'", toks[k].second);
            }
            return v;
        };
        auto want_count = [&](size_t n) {
            if (toks.size() > n) {
                syntax("unexpected '" + toks[n].first + "'", toks[n].second);
            }
        };

        if (op == "name") {
            if (toks.size() != 2) {
                syntax("'name' takes one word", col);
            }
            c.name = toks[1].first;
            return;
        }
        if (op == "qubits") {
            if (have_header) {
                syntax("duplicate 'qubits' header", col);
            }
            c.num_qubits = want_int(1);
            want_count(2);
            have_header = true;
            tracker = std::make_unique<detail::IcmTracker>(c.num_qubits);
            return;
        }
        if (!have_header) {
            syntax("the first statement must be 'qubits N'", col);
        }
        if (op == "input" || op == "output") {
            int q = want_int(1);
            want_count(2);
            if (q >= c.num_qubits) {
                throw IcmError(IcmErrorCode::index_out_of_range, line, toks[1].second, "qubit " + std::to_string(q));
            }
            auto &mine = op == "input" ? c.inputs : c.outputs;
            auto &theirs = op == "input" ? c.outputs : c.inputs;
            if (theirs.count(q)) {
                throw IcmError(IcmErrorCode::io_conflict, line, col, "qubit " + std::to_string(q));
            }
            mine.insert(q);
            return;
        }

        ICMEvent e;
        if (op == "init") {
            int q = want_int(1);
            if (toks.size() < 3) {
                syntax("'init' needs a basis", col);
            }
            const std::string &b = toks[2].first;
            InitBasis basis{};
            if (b == "Z0") {
                basis = InitBasis::Z0;
            } else if (b == "X+") {
                basis = InitBasis::Xplus;
            } else if (b == "A") {
                basis = InitBasis::A;
            } else if (b == "Y") {
                basis = InitBasis::Y;
            } else {
                syntax("unknown init basis '" + b + "'", toks[2].second);
            }
            want_count(3);
            e = ICMEvent::init(q, basis);
        } else if (op == "cnot") {
            int ctl = want_int(1);
            int tgt = want_int(2);
            want_count(3);
            e = ICMEvent::cnot(ctl, tgt);
        } else if (op == "measure") {
            int q = want_int(1);
            if (toks.size() < 3) {
                syntax("'measure' needs a basis", col);
            }
            const std::string &b = toks[2].first;
            MeasureBasis basis{};
            if (b == "Z") {
                basis = MeasureBasis::Z;
            } else if (b == "X") {
                basis = MeasureBasis::X;
            } else {
                syntax("unknown measurement basis '" + b + "'", toks[2].second);
            }
            std::string flag = toks.size() > 3 ? toks[3].first : std::string();
            want_count(4);
            e = ICMEvent::measure(q, basis, flag);
        } else {
            syntax("unknown statement '" + op + "'", col);
        }
        IcmErrorCode code{};
        std::string detail;
        if (!tracker->step(e, code, detail)) {
            throw IcmError(code, line, col, detail);
        }
        c.events.push_back(e);
    };

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            eol = text.size();
        }
        std::string raw = text.substr(pos, eol - pos);
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.resize(hash);
        }
        size_t start = 0;
        while (start <= raw.size()) {
            size_t semi = raw.find(';', start);
            if (semi == std::string::npos) {
                semi = raw.size();
            }
            run_statement(raw.substr(start, semi - start), static_cast<int>(start) + 1);
            start = semi + 1;
        }
        pos = eol + 1;
        line++;
    }
    if (!have_header) {
        throw IcmError(IcmErrorCode::syntax, 1, 1, "missing 'qubits N' header");
    }
    for (auto [q, code] : tracker->unfinished()) {
        throw IcmError(code, last_line, 1, "qubit " + std::to_string(q));
    }
    return c;
}

/// Canonical text form; parse_icm(print_icm(c)) reproduces c.
inline std::string print_icm(const ICMCircuit &c) {
    std::ostringstream out;
    if (!c.name.empty()) {
        out << "name " << c.name << "\n";
    }
    out << "qubits " << c.num_qubits << "\n";
    for (int q : c.inputs) {
        out << "input " << q << "\n";
    }
    for (int q : c.outputs) {
        out << "output " << q << "\n";
    }
    for (const auto &e : c.events) {
        switch (e.kind) {
            case ICMEvent::Kind::init:
                out << "init " << e.qubit << " " << to_string(e.init_basis) << "\n";
                break;
            case ICMEvent::Kind::cnot:
                out << "cnot " << e.qubit << " " << e.target << "\n";
                break;
            case ICMEvent::Kind::measure:
                out << "measure " << e.qubit << " " << to_string(e.measure_basis);
                if (!e.flag.empty()) {
                    out << " " << e.flag;
                }
                out << "\n";
                break;
        }
    }
    return out.str();
}

struct CliffordTGate {
    enum class Kind { H, P, T, CNOT };
    Kind kind = Kind::H;
    int qubit = 0;   // CNOT control
    int target = 0;  // CNOT only
};

/// Lowers a Clifford+T gate list to ICM form by gate teleportation. Every
/// logical qubit starts on its own line with Init(Z0); each single-qubit gate
/// moves it to a fresh ancilla line:
///   T: Init(A) anc;  CNOT(cur -> anc); Measure(cur, Z, "t<k>")
///   P: Init(Y) anc;  CNOT(cur -> anc); Measure(cur, Z, "p<k>")
///   H: Init(X+) anc; CNOT(anc -> cur); Measure(cur, Z, "h<k>")
/// where k is the gate's position and the flag names the classical frame
/// correction (for H, the Hadamard frame change itself). CNOTs act on the
/// current lines. Every live line is measured in Z at the end.
inline ICMCircuit clifford_t_to_icm(const std::vector<CliffordTGate> &gates, int n) {
    if (n < 0) {
        throw std::invalid_argument("qubit count must be non-negative");
    }
    ICMCircuit c;
    std::vector<int> line(static_cast<size_t>(n));
    int next = n;
    for (int q = 0; q < n; q++) {
        line[static_cast<size_t>(q)] = q;
        c.events.push_back(ICMEvent::init(q, InitBasis::Z0));
    }
    auto check = [&](int q, size_t k) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("gate " + std::to_string(k) + " references qubit " + std::to_string(q) +
                                        " outside 0.." + std::to_string(n - 1));
        }
    };
    for (size_t k = 0; k < gates.size(); k++) {
        const auto &g = gates[k];
        check(g.qubit, k);
        auto &cur = line[static_cast<size_t>(g.qubit)];
        switch (g.kind) {
            case CliffordTGate::Kind::T:
            case CliffordTGate::Kind::P: {
                bool is_t = g.kind == CliffordTGate::Kind::T;
                int anc = next++;
                c.events.push_back(ICMEvent::init(anc, is_t ? InitBasis::A : InitBasis::Y));
                c.events.push_back(ICMEvent::cnot(cur, anc));
                c.events.push_back(ICMEvent::measure(cur, MeasureBasis::Z, (is_t ? "t" : "p") + std::to_string(k)));
                cur = anc;
                break;
            }
            case CliffordTGate::Kind::H: {
                int anc = next++;
                c.events.push_back(ICMEvent::init(anc, InitBasis::Xplus));
                c.events.push_back(ICMEvent::cnot(anc, cur));
                c.events.push_back(ICMEvent::measure(cur, MeasureBasis::Z, "h" + std::to_string(k)));
                cur = anc;
                break;
            }
            case CliffordTGate::Kind::CNOT:
                check(g.target, k);
                if (g.qubit == g.target) {
                    throw std::invalid_argument("gate " + std::to_string(k) + " is a CNOT onto its own control");
                }
                c.events.push_back(ICMEvent::cnot(cur, line[static_cast<size_t>(g.target)]));
                break;
        }
    }
    for (int q = 0; q < n; q++) {
        c.events.push_back(ICMEvent::measure(line[static_cast<size_t>(q)], MeasureBasis::Z));
    }
    c.num_qubits = next;
    return c;
}

}  // namespace bw
