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

// Lattice representation of braided defect circuits. Every defect is a
// zero-thickness rectilinear polyline through plumbing-piece centers; the
// physical cross-section of a defect is absorbed into the plumbing piece.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "braidweave/diagnostics.hpp"
#include "braidweave/point.hpp"

namespace bw {

enum class StrandKind { primal, dual };
enum class Closure { closed, open };
enum class Face { input, output };

inline const char *to_string(StrandKind k) {
    return k == StrandKind::primal ? "primal" : "dual";
}
inline const char *to_string(Closure c) {
    return c == Closure::closed ? "closed" : "open";
}
inline const char *to_string(Face f) {
    return f == Face::input ? "input" : "output";
}

struct PortLabel {
    std::string name;
    Point position;
    Face face = Face::input;

    bool operator==(const PortLabel &) const = default;
};

/// One primal or dual defect. `path` holds corner vertices only; closed
/// strands have an implicit segment from the last vertex back to the first.
struct DefectStrand {
    std::string id;
    StrandKind kind = StrandKind::primal;
    Closure closure = Closure::closed;
    std::vector<Point> path;
    std::map<std::string, std::string> meta;

    bool is_open() const {
        return closure == Closure::open;
    }
    size_t num_segments() const {
        if (path.size() < 2) {
            return 0;
        }
        return is_open() ? path.size() - 1 : path.size();
    }
    Point seg_start(size_t i) const {
        return path[i];
    }
    Point seg_end(size_t i) const {
        return path[(i + 1) % path.size()];
    }
};

/// Declared enclosure [0,x] x [0,y] x [0,z].
struct Bounds {
    int64_t x = 0;
    int64_t y = 0;
    int64_t z = 0;

    bool operator==(const Bounds &) const = default;
    int64_t extent(int axis) const {
        return axis == 0 ? x : axis == 1 ? y : z;
    }
    bool contains(const Point &p) const {
        return p.x >= 0 && p.y >= 0 && p.z >= 0 && p.x <= x && p.y <= y && p.z <= z;
    }
};

struct TopoCircuit {
    Bounds bounds;
    std::vector<PortLabel> ports;
    std::vector<DefectStrand> strands;

    const DefectStrand *find(std::string_view id) const {
        for (const auto &s : strands) {
            if (s.id == id) {
                return &s;
            }
        }
        return nullptr;
    }
    const PortLabel *port_at(const Point &p) const {
        for (const auto &port : ports) {
            if (port.position == p) {
                return &port;
            }
        }
        return nullptr;
    }
};

/// Every lattice point on the strand, in traversal order. Closed strands do
/// not repeat their first point.
inline std::vector<Point> strand_points(const DefectStrand &s) {
    std::vector<Point> out;
    if (s.path.empty()) {
        return out;
    }
    if (s.path.size() == 1) {
        out.push_back(s.path[0]);
        return out;
    }
    size_t n = s.num_segments();
    for (size_t i = 0; i < n; i++) {
        Point a = s.seg_start(i);
        Point b = s.seg_end(i);
        Point delta = b - a;
        if (axis_of(delta) < 0) {
            throw std::invalid_argument("strand '" + s.id + "' has a segment that is not axis-aligned");
        }
        Point dir = direction_of(delta);
        int64_t len = manhattan_length(delta);
        for (int64_t k = 0; k < len; k++) {
            out.push_back(a + dir * k);
        }
    }
    if (s.is_open()) {
        out.push_back(s.path.back());
    }
    return out;
}

/// Number of lattice points on a well-formed strand, without expanding it.
inline int64_t strand_length(const DefectStrand &s) {
    int64_t total = 0;
    for (size_t i = 0; i < s.num_segments(); i++) {
        total += manhattan_length(s.seg_end(i) - s.seg_start(i));
    }
    return s.is_open() ? total + 1 : total;
}

inline std::set<Point> occupied_pieces(const TopoCircuit &c) {
    std::set<Point> out;
    for (const auto &s : c.strands) {
        for (const auto &p : strand_points(s)) {
            out.insert(p);
        }
    }
    return out;
}

/// Occupied-cell count of a valid circuit (strands are point-disjoint).
inline int64_t occupied_count(const TopoCircuit &c) {
    int64_t total = 0;
    for (const auto &s : c.strands) {
        total += strand_length(s);
    }
    return total;
}

struct Box {
    Point lo;
    Point hi;
    bool empty = true;

    void include(const Point &p) {
        if (empty) {
            lo = hi = p;
            empty = false;
            return;
        }
        for (int a = 0; a < 3; a++) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    /// Extent along an axis in plumbing pieces, clamped to at least 1.
    int64_t extent(int axis) const {
        return empty ? 0 : std::max<int64_t>(1, hi[axis] - lo[axis]);
    }
    int64_t volume() const {
        return empty ? 0 : extent(0) * extent(1) * extent(2);
    }
};

/// Tight axis-aligned box around every strand vertex (polylines are bounded
/// by their corners).
inline Box tight_box(const TopoCircuit &c) {
    Box box;
    for (const auto &s : c.strands) {
        for (const auto &p : s.path) {
            box.include(p);
        }
    }
    return box;
}

inline int64_t bounding_volume(const TopoCircuit &c) {
    return tight_box(c).volume();
}

namespace detail {

inline bool collinear_at(const Point &prev, const Point &cur, const Point &next) {
    int a = axis_of(cur - prev);
    int b = axis_of(next - cur);
    return a >= 0 && a == b;
}

}  // namespace detail

/// Checks a single strand against the lattice-path invariants and its
/// boundary pinning. Port bookkeeping across the circuit is done by
/// validate_geometry.
inline ValidityReport validate_strand(const DefectStrand &s, const Bounds &bounds) {
    ValidityReport r;
    size_t min_vertices = s.is_open() ? 2 : 4;
    if (s.path.size() < min_vertices) {
        r.add("too-few-vertices", "strand needs at least " + std::to_string(min_vertices) + " vertices", {s.id});
        return r;
    }
    bool shape_ok = true;
    for (size_t i = 0; i < s.num_segments(); i++) {
        Point a = s.seg_start(i);
        Point b = s.seg_end(i);
        if (a == b) {
            r.add("zero-length-segment", "segment " + std::to_string(i) + " has length 0", {s.id}, {a});
            shape_ok = false;
        } else if (axis_of(b - a) < 0) {
            r.add("segment-not-axis-aligned", "segment " + std::to_string(i) + " is not axis-aligned", {s.id}, {a, b});
            shape_ok = false;
        }
    }
    if (!shape_ok) {
        return r;
    }
    size_t n = s.path.size();
    for (size_t i = 0; i < n; i++) {
        if (s.is_open() && (i == 0 || i + 1 == n)) {
            continue;
        }
        const Point &prev = s.path[(i + n - 1) % n];
        const Point &next = s.path[(i + 1) % n];
        if (detail::collinear_at(prev, s.path[i], next)) {
            r.add("collinear-vertex", "vertex is not a true corner", {s.id}, {s.path[i]});
        }
    }
    std::unordered_set<Point, PointHash> seen;
    std::vector<Point> repeated;
    std::vector<Point> outside;
    for (const auto &p : strand_points(s)) {
        if (!seen.insert(p).second) {
            repeated.push_back(p);
        }
        if (!bounds.contains(p)) {
            outside.push_back(p);
        }
    }
    if (!repeated.empty()) {
        r.add("self-intersection", "strand visits a lattice point twice", {s.id}, repeated);
    }
    if (!outside.empty()) {
        r.add("out-of-bounds", "strand leaves the declared bounds", {s.id}, outside);
    }
    if (s.is_open()) {
        for (int end = 0; end < 2; end++) {
            const Point &tip = end == 0 ? s.path.front() : s.path.back();
            const Point &inner = end == 0 ? s.path[1] : s.path[n - 2];
            if (tip.x != 0 && tip.x != bounds.x) {
                r.add("endpoint-not-on-boundary", "open strand endpoint is not on the x=0 or x=X plane", {s.id}, {tip});
            } else if (axis_of(inner - tip) != 0) {
                r.add("endpoint-segment-not-perpendicular", "open strand must leave the boundary along x", {s.id}, {tip});
            }
        }
    }
    return r;
}

/// Lists every violated geometric invariant; empty iff the circuit is valid.
inline ValidityReport validate_geometry(const TopoCircuit &c) {
    ValidityReport r;
    if (c.bounds.x < 0 || c.bounds.y < 0 || c.bounds.z < 0) {
        r.add("bad-bounds", "bounds must be non-negative");
    }

    std::set<std::string> ids;
    for (const auto &s : c.strands) {
        if (!ids.insert(s.id).second) {
            r.add("duplicate-strand-id", "strand id '" + s.id + "' is used twice", {s.id});
        }
        r.append(validate_strand(s, c.bounds));
    }

    // Cross-strand point disjointness.
    std::unordered_map<Point, size_t, PointHash> owner;
    std::map<std::pair<size_t, size_t>, std::vector<Point>> shared;
    for (size_t i = 0; i < c.strands.size(); i++) {
        std::vector<Point> pts;
        try {
            pts = strand_points(c.strands[i]);
        } catch (const std::invalid_argument &) {
            continue;
        }
        for (const auto &p : pts) {
            auto [it, inserted] = owner.emplace(p, i);
            if (!inserted && it->second != i) {
                shared[{it->second, i}].push_back(p);
            }
        }
    }
    for (const auto &[pair, pts] : shared) {
        const auto &a = c.strands[pair.first].id;
        const auto &b = c.strands[pair.second].id;
        r.add("shared-point", "strands '" + a + "' and '" + b + "' touch", {a, b}, pts);
    }

    // Ports.
    std::set<std::string> port_names;
    std::set<Point> port_positions;
    for (const auto &port : c.ports) {
        if (!port_names.insert(port.name).second) {
            r.add("duplicate-port-name", "port name '" + port.name + "' is used twice", {}, {port.position});
        }
        if (!port_positions.insert(port.position).second) {
            r.add("duplicate-port-position", "two ports share a position", {}, {port.position});
        }
        int64_t face_x = port.face == Face::input ? 0 : c.bounds.x;
        if (port.position.x != face_x || !c.bounds.contains(port.position)) {
            r.add("port-off-face", "port '" + port.name + "' is not on its " + to_string(port.face) + " face", {},
                  {port.position});
        }
        std::vector<std::string> users;
        for (const auto &s : c.strands) {
            if (!s.is_open() || s.path.empty()) {
                continue;
            }
            if (s.path.front() == port.position || s.path.back() == port.position) {
                users.push_back(s.id);
            }
        }
        if (users.empty()) {
            r.add("port-unreferenced", "port '" + port.name + "' is not an endpoint of any open strand", {},
                  {port.position});
        } else if (users.size() > 1) {
            r.add("port-multiply-referenced", "port '" + port.name + "' is an endpoint of several strands", users,
                  {port.position});
        }
    }
    for (const auto &s : c.strands) {
        if (!s.is_open() || s.path.empty()) {
            continue;
        }
        for (const Point &tip : {s.path.front(), s.path.back()}) {
            if (c.port_at(tip) == nullptr) {
                r.add("endpoint-without-port", "open strand endpoint carries no port label", {s.id}, {tip});
            }
        }
    }
    return r;
}

/// Names of the ports at the endpoints of an open strand (empty for closed).
inline std::vector<std::string> strand_ports(const TopoCircuit &c, const DefectStrand &s) {
    std::vector<std::string> out;
    if (!s.is_open() || s.path.empty()) {
        return out;
    }
    for (const Point &tip : {s.path.front(), s.path.back()}) {
        if (const auto *port = c.port_at(tip)) {
            out.push_back(port->name);
        }
    }
    return out;
}

/// Applies `fn` to every strand vertex and port position.
template <typename Fn>
TopoCircuit map_points(const TopoCircuit &c, Fn &&fn) {
    TopoCircuit out = c;
    for (auto &s : out.strands) {
        for (auto &p : s.path) {
            p = fn(p);
        }
    }
    for (auto &port : out.ports) {
        port.position = fn(port.position);
    }
    return out;
}

/// Shifts the whole circuit; bounds grow so the shifted content still fits.
/// Ports stay valid only for shifts with delta.x == 0.
inline TopoCircuit translate(const TopoCircuit &c, const Point &delta) {
    TopoCircuit out = map_points(c, [&](const Point &p) {
        return p + delta;
    });
    out.bounds.x += std::max<int64_t>(0, delta.x);
    out.bounds.y += std::max<int64_t>(0, delta.y);
    out.bounds.z += std::max<int64_t>(0, delta.z);
    return out;
}

/// Quarter-turn rotation about `axis`, re-anchored so the rotated bounds box
/// starts at the origin. Port faces follow the x axis when it flips.
inline TopoCircuit rotate_quarter(const TopoCircuit &c, int axis, int quarter_turns) {
    int turns = ((quarter_turns % 4) + 4) % 4;
    int u = (axis + 1) % 3;
    int v = (axis + 2) % 3;
    auto rot = [&](Point p) {
        for (int t = 0; t < turns; t++) {
            int64_t pu = p[u];
            int64_t pv = p[v];
            p[u] = -pv;
            p[v] = pu;
        }
        return p;
    };
    Box corners;
    for (int64_t cx : {int64_t{0}, c.bounds.x}) {
        for (int64_t cy : {int64_t{0}, c.bounds.y}) {
            for (int64_t cz : {int64_t{0}, c.bounds.z}) {
                corners.include(rot(Point{cx, cy, cz}));
            }
        }
    }
    TopoCircuit out = map_points(c, [&](const Point &p) {
        return rot(p) - corners.lo;
    });
    out.bounds = {corners.hi.x - corners.lo.x, corners.hi.y - corners.lo.y, corners.hi.z - corners.lo.z};
    bool x_flipped = rot(Point{1, 0, 0}).x < 0;
    if (x_flipped) {
        for (auto &port : out.ports) {
            port.face = port.face == Face::input ? Face::output : Face::input;
        }
    }
    return out;
}

}  // namespace bw
