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

// Rail-and-ring canonical form of an ICM circuit.
//
// Qubit line i is a primal rectangle in the plane z = 1 with rails at
// y = pitch*i and y = pitch*i + gap, spanning the full time axis. CNOT k is a
// dual rectangle in the plane x = slot*k + slot/2 whose y-span runs from the
// middle of the control loop to the middle of the target loop and whose z-span
// is [0, 2]. The ring therefore encloses exactly one rail of each of its two
// qubits, and both rails of every qubit in between (which cancel).

#include <algorithm>
#include <stdexcept>
#include <string>

#include "braidweave/geometry.hpp"
#include "braidweave/icm.hpp"

namespace bw {

struct CanonicalLayoutParams {
    int64_t rail_gap = 2;
    int64_t qubit_pitch = 4;
    int64_t slot_pitch = 2;

    void check() const {
        auto even_at_least_two = [](int64_t v) {
            return v >= 2 && v % 2 == 0;
        };
        if (!even_at_least_two(rail_gap) || !even_at_least_two(qubit_pitch) || !even_at_least_two(slot_pitch)) {
            throw std::invalid_argument("layout parameters must be even and at least 2");
        }
        if (qubit_pitch <= rail_gap) {
            throw std::invalid_argument("qubit_pitch must exceed rail_gap so neighbouring loops stay apart");
        }
    }
};

/// Plane of the qubit loops. Rings occupy z in [plane-1, plane+1].
inline constexpr int64_t kQubitPlaneZ = 1;

inline std::string canonical_qubit_id(int q) {
    return "q" + std::to_string(q);
}
inline std::string canonical_cnot_id(size_t k) {
    return "cnot" + std::to_string(k);
}

/// Deterministic canonical geometry for a valid ICM circuit. Throws
/// std::invalid_argument if `c` fails validate_icm.
inline TopoCircuit layout_canonical(const ICMCircuit &c, const CanonicalLayoutParams &p = {}) {
    p.check();
    auto report = validate_icm(c);
    if (!report.ok()) {
        throw std::invalid_argument("invalid ICM circuit:\n" + report.str());
    }
    const int64_t m = static_cast<int64_t>(c.cnot_count());
    const int64_t X = p.slot_pitch * m + 2;
    const int64_t z0 = kQubitPlaneZ;

    TopoCircuit out;
    out.bounds = {X, std::max<int64_t>(0, p.qubit_pitch * (c.num_qubits - 1) + p.rail_gap), m > 0 ? 2 * z0 : z0};

    std::vector<std::map<std::string, std::string>> qubit_meta(static_cast<size_t>(c.num_qubits));
    for (int q = 0; q < c.num_qubits; q++) {
        qubit_meta[static_cast<size_t>(q)]["qubit"] = std::to_string(q);
    }
    for (const auto &e : c.events) {
        auto &meta = qubit_meta[static_cast<size_t>(e.qubit)];
        if (e.kind == ICMEvent::Kind::init) {
            meta["init"] = to_string(e.init_basis);
        } else if (e.kind == ICMEvent::Kind::measure) {
            meta["measure"] = to_string(e.measure_basis);
            if (!e.flag.empty()) {
                meta["flag"] = e.flag;
            }
        }
    }

    for (int q = 0; q < c.num_qubits; q++) {
        const int64_t lo = p.qubit_pitch * q;
        const int64_t hi = lo + p.rail_gap;
        DefectStrand s;
        s.id = canonical_qubit_id(q);
        s.kind = StrandKind::primal;
        s.meta = qubit_meta[static_cast<size_t>(q)];
        if (c.outputs.count(q)) {
            // Open toward the output face: both rails end at x = X.
            s.closure = Closure::open;
            s.path = {{X, lo, z0}, {0, lo, z0}, {0, hi, z0}, {X, hi, z0}};
            s.meta["io"] = "output";
            out.ports.push_back({s.id + ".out.0", {X, lo, z0}, Face::output});
            out.ports.push_back({s.id + ".out.1", {X, hi, z0}, Face::output});
        } else {
            s.path = {{0, lo, z0}, {X, lo, z0}, {X, hi, z0}, {0, hi, z0}};
            if (c.inputs.count(q)) {
                s.closure = Closure::open;
                s.meta["io"] = "input";
                out.ports.push_back({s.id + ".in.0", {0, lo, z0}, Face::input});
                out.ports.push_back({s.id + ".in.1", {0, hi, z0}, Face::input});
            }
        }
        out.strands.push_back(std::move(s));
    }

    size_t k = 0;
    for (const auto &e : c.events) {
        if (e.kind != ICMEvent::Kind::cnot) {
            continue;
        }
        const int64_t x = p.slot_pitch * static_cast<int64_t>(k) + p.slot_pitch / 2;
        const int64_t half = p.rail_gap / 2;
        const int64_t y0 = p.qubit_pitch * std::min(e.qubit, e.target) + half;
        const int64_t y1 = p.qubit_pitch * std::max(e.qubit, e.target) + half;
        DefectStrand ring;
        ring.id = canonical_cnot_id(k);
        ring.kind = StrandKind::dual;
        ring.closure = Closure::closed;
        ring.path = {{x, y0, z0 - 1}, {x, y1, z0 - 1}, {x, y1, z0 + 1}, {x, y0, z0 + 1}};
        ring.meta["control"] = std::to_string(e.qubit);
        ring.meta["target"] = std::to_string(e.target);
        out.strands.push_back(std::move(ring));
        k++;
    }
    return out;
}

}  // namespace bw
