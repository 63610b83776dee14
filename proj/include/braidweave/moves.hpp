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

// Signature-preserving rewrites of a TopoCircuit.
//
// A slide translates one segment perpendicular to itself. Its two neighbours
// stretch or shrink to follow, which is the lattice version of pushing an
// edge of a polygon across an empty rectangle. Bridging reconnects two facing
// segments of one strand that sit one unit apart; the strip between them holds
// no lattice point, so linking numbers add across the cut and the half that
// links nothing can be dropped. DeleteLoop removes a closed strand that links
// nothing.

#include <algorithm>
#include <array>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "braidweave/digest.hpp"
#include "braidweave/geometry.hpp"
#include "braidweave/topology.hpp"
#include "braidweave/tqc.hpp"

namespace bw {

struct Move {
    enum class Kind { slide, bridge, delete_loop };

    Kind kind = Kind::slide;
    std::string strand;
    size_t segment = 0;
    /// Second segment of a bridge.
    size_t segment_b = 0;
    /// Unit vector of a slide.
    Point direction{};
    int64_t distance = 1;
    /// Position in its log, starting at 1. Zero for a free-standing move.
    uint64_t id = 0;

    static Move slide(std::string strand, size_t segment, Point direction, int64_t distance = 1) {
        Move m;
        m.kind = Kind::slide;
        m.strand = std::move(strand);
        m.segment = segment;
        m.direction = direction;
        m.distance = distance;
        return m;
    }
    static Move bridge(std::string strand, size_t a, size_t b) {
        Move m;
        m.kind = Kind::bridge;
        m.strand = std::move(strand);
        m.segment = a;
        m.segment_b = b;
        return m;
    }
    static Move delete_loop(std::string strand) {
        Move m;
        m.kind = Kind::delete_loop;
        m.strand = std::move(strand);
        return m;
    }

    /// Equality of the rewrite itself; ids are ignored.
    bool same_action(const Move &o) const {
        if (kind != o.kind || strand != o.strand) {
            return false;
        }
        switch (kind) {
            case Kind::slide:
                return segment == o.segment && direction == o.direction && distance == o.distance;
            case Kind::bridge:
                return segment == o.segment && segment_b == o.segment_b;
            case Kind::delete_loop:
                return true;
        }
        return false;
    }
};

inline const char *to_string(Move::Kind k) {
    switch (k) {
        case Move::Kind::slide:
            return "slide";
        case Move::Kind::bridge:
            return "bridge";
        case Move::Kind::delete_loop:
            return "delete";
    }
    return "?";
}

/// One line of the .moves format, without the trailing newline.
inline std::string format_move(const Move &m) {
    std::ostringstream out;
    out << to_string(m.kind) << ' ' << m.strand;
    if (m.kind == Move::Kind::slide) {
        out << ' ' << m.segment << ' ' << m.direction.x << ' ' << m.direction.y << ' ' << m.direction.z << ' '
            << m.distance;
    } else if (m.kind == Move::Kind::bridge) {
        out << ' ' << m.segment << ' ' << m.segment_b;
    }
    return out.str();
}

inline std::ostream &operator<<(std::ostream &out, const Move &m) {
    return out << format_move(m);
}

/// Parses one move line. Throws FormatError.
inline Move parse_move(const std::string &line) {
    std::istringstream in(line);
    std::string kind;
    Move m;
    in >> kind >> m.strand;
    auto fail = [&](const std::string &why) {
        throw FormatError("bad move '" + line + "': " + why);
    };
    if (m.strand.empty()) {
        fail("missing strand");
    }
    auto read_index = [&](size_t &out) {
        long long v;
        if (!(in >> v) || v < 0) {
            fail("expected a segment index");
        }
        out = static_cast<size_t>(v);
    };
    if (kind == "slide") {
        m.kind = Move::Kind::slide;
        read_index(m.segment);
        if (!(in >> m.direction.x >> m.direction.y >> m.direction.z >> m.distance)) {
            fail("expected <dx dy dz> <distance>");
        }
    } else if (kind == "bridge") {
        m.kind = Move::Kind::bridge;
        read_index(m.segment);
        read_index(m.segment_b);
    } else if (kind == "delete") {
        m.kind = Move::Kind::delete_loop;
    } else {
        fail("unknown move kind '" + kind + "'");
    }
    std::string extra;
    if (in >> extra) {
        fail("trailing text '" + extra + "'");
    }
    return m;
}

struct MoveLog {
    std::string base_hash;
    std::vector<Move> moves;
    std::map<uint64_t, std::string> annotations;

    void append(Move m) {
        m.id = moves.size() + 1;
        moves.push_back(std::move(m));
    }
    void truncate(size_t n) {
        moves.resize(std::min(n, moves.size()));
        annotations.erase(annotations.upper_bound(n), annotations.end());
    }
    bool operator==(const MoveLog &o) const {
        if (base_hash != o.base_hash || annotations != o.annotations || moves.size() != o.moves.size()) {
            return false;
        }
        for (size_t i = 0; i < moves.size(); i++) {
            if (!moves[i].same_action(o.moves[i]) || moves[i].id != o.moves[i].id) {
                return false;
            }
        }
        return true;
    }
};

/// Digest identifying a base circuit: SHA-256 of its canonical .tqc bytes.
inline std::string circuit_digest(const TopoCircuit &c) {
    return sha256_hex(write_tqc(c));
}

inline std::string write_moves(const MoveLog &log) {
    std::ostringstream out;
    out << "base " << log.base_hash << '\n';
    for (const auto &m : log.moves) {
        out << format_move(m) << '\n';
        auto it = log.annotations.find(m.id);
        if (it != log.annotations.end()) {
            out << "note " << m.id << ' ' << it->second << '\n';
        }
    }
    return out.str();
}

inline MoveLog read_moves(const std::string &text) {
    MoveLog log;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    bool have_base = false;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        auto where = "line " + std::to_string(line_no) + ": ";
        if (!have_base) {
            std::istringstream head(line);
            std::string word;
            head >> word >> log.base_hash;
            if (word != "base" || log.base_hash.empty()) {
                throw FormatError(where + "first record must be 'base <hex digest>'");
            }
            have_base = true;
            continue;
        }
        if (line.rfind("note ", 0) == 0) {
            std::istringstream note(line.substr(5));
            uint64_t id = 0;
            if (!(note >> id) || id == 0 || id > log.moves.size()) {
                throw FormatError(where + "note must reference an earlier move id");
            }
            std::string text_part;
            std::getline(note >> std::ws, text_part);
            log.annotations[id] = text_part;
            continue;
        }
        try {
            log.append(parse_move(line));
        } catch (const FormatError &e) {
            throw FormatError(where + e.what());
        }
    }
    if (!have_base) {
        throw FormatError("moves: missing 'base' record");
    }
    return log;
}

/// Removes repeated vertices, straight-through vertices and backtracks until
/// every remaining vertex is a true corner. Endpoints of open paths stay.
inline std::vector<Point> normalize_path(const std::vector<Point> &path, bool closed) {
    std::vector<Point> st;
    st.reserve(path.size());
    for (const auto &p : path) {
        if (!st.empty() && st.back() == p) {
            continue;
        }
        while (st.size() >= 2 && detail::collinear_at(st[st.size() - 2], st.back(), p)) {
            st.pop_back();
        }
        if (st.empty() || st.back() != p) {
            st.push_back(p);
        }
    }
    if (!closed) {
        return st;
    }
    bool changed = true;
    while (changed && st.size() >= 3) {
        changed = false;
        if (st.back() == st.front()) {
            st.pop_back();
            changed = true;
            continue;
        }
        size_t n = st.size();
        if (detail::collinear_at(st[n - 2], st[n - 1], st[0])) {
            st.pop_back();
            changed = true;
        } else if (detail::collinear_at(st[n - 1], st[0], st[1])) {
            st.erase(st.begin());
            changed = true;
        }
    }
    if (st.size() == 2 && st.front() == st.back()) {
        st.pop_back();
    }
    return st;
}

namespace detail {

inline bool on_segment(const Point &p, const Point &a, const Point &b) {
    for (int k = 0; k < 3; k++) {
        if (p[k] < std::min(a[k], b[k]) || p[k] > std::max(a[k], b[k])) {
            return false;
        }
    }
    int axis = axis_of(b - a);
    for (int k = 0; k < 3; k++) {
        if (k != axis && p[k] != a[k]) {
            return false;
        }
    }
    return true;
}

inline std::vector<Point> segment_points(const Point &a, const Point &b) {
    std::vector<Point> out;
    Point step = direction_of(b - a);
    int64_t len = manhattan_length(b - a);
    out.reserve(static_cast<size_t>(len + 1));
    for (int64_t t = 0; t <= len; t++) {
        out.push_back(a + step * t);
    }
    return out;
}

inline std::string face_name(const Point &p, const Bounds &b) {
    static const char *axes = "xyz";
    for (int k = 0; k < 3; k++) {
        if (p[k] < 0) {
            return std::string(1, axes[k]) + "=0";
        }
        if (p[k] > b.extent(k)) {
            return std::string(1, axes[k]) + "=" + std::to_string(b.extent(k));
        }
    }
    return "none";
}

inline bool min_vertices_ok(const std::vector<Point> &path, bool closed) {
    return path.size() >= (closed ? 4u : 2u);
}

}  // namespace detail

/// Read-only view of a circuit with a point-to-strand index, shared by the
/// checks of one enumeration pass.
class MoveContext {
   public:
    explicit MoveContext(const TopoCircuit &c) : c_(c) {
        for (size_t i = 0; i < c.strands.size(); i++) {
            for (const auto &p : strand_points(c.strands[i])) {
                owner_.emplace(p, i);
            }
        }
    }

    const TopoCircuit &circuit() const {
        return c_;
    }

    std::optional<size_t> strand_index(const std::string &id) const {
        for (size_t i = 0; i < c_.strands.size(); i++) {
            if (c_.strands[i].id == id) {
                return i;
            }
        }
        return std::nullopt;
    }

    /// Checks `m` and, when valid and `result` is non-null, stores the
    /// rewritten circuit there.
    ValidityReport check(const Move &m, TopoCircuit *result = nullptr) const {
        ValidityReport r;
        auto idx = strand_index(m.strand);
        if (!idx) {
            r.add("unknown-strand", "no strand named '" + m.strand + "'", {m.strand});
            return r;
        }
        switch (m.kind) {
            case Move::Kind::slide:
                return check_slide(*idx, m.segment, m.direction, m.distance, result);
            case Move::Kind::bridge:
                return check_bridge(*idx, m.segment, m.segment_b, result);
            case Move::Kind::delete_loop:
                return check_delete(*idx, result);
        }
        return r;
    }

    ValidityReport check_slide(size_t si, size_t seg, const Point &dir, int64_t dist, TopoCircuit *result) const {
        ValidityReport r;
        const DefectStrand &s = c_.strands[si];
        const size_t nseg = s.num_segments();
        if (seg >= nseg) {
            r.add("bad-segment", "segment " + std::to_string(seg) + " does not exist", {s.id});
            return r;
        }
        if (s.is_open() && (seg == 0 || seg + 1 == nseg)) {
            r.add("pinned-endpoint", "segment " + std::to_string(seg) + " ends at a port and cannot slide", {s.id});
            return r;
        }
        const Point a = s.seg_start(seg);
        const Point b = s.seg_end(seg);
        int dir_axis = axis_of(dir);
        if (dir_axis < 0 || manhattan_length(dir) != 1) {
            r.add("bad-direction", "slide direction must be a unit axis vector", {s.id});
            return r;
        }
        if (dir_axis == axis_of(b - a)) {
            r.add("bad-direction", "slide direction must be perpendicular to the segment", {s.id});
            return r;
        }
        if (dist < 1) {
            r.add("bad-distance", "slide distance must be at least 1", {s.id});
            return r;
        }

        const size_t n = s.path.size();
        const size_t prev_seg = (seg + nseg - 1) % nseg;
        const size_t next_seg = (seg + 1) % nseg;
        const Point pa = s.seg_start(prev_seg);
        const Point pb = s.seg_end(prev_seg);
        const Point na = s.seg_start(next_seg);
        const Point nb = s.seg_end(next_seg);
        const auto line = detail::segment_points(a, b);
        for (int64_t t = 1; t <= dist; t++) {
            for (const auto &p0 : line) {
                Point p = p0 + dir * t;
                if (!c_.bounds.contains(p)) {
                    r.add("out-of-bounds", "slide crosses the bounds face " + detail::face_name(p, c_.bounds), {s.id},
                          {p});
                    return r;
                }
                auto it = owner_.find(p);
                if (it == owner_.end()) {
                    continue;
                }
                if (it->second != si) {
                    r.add("blocked", "slide is blocked by strand '" + c_.strands[it->second].id + "'",
                          {c_.strands[it->second].id}, {p});
                    return r;
                }
                if (!detail::on_segment(p, pa, pb) && !detail::on_segment(p, na, nb)) {
                    r.add("blocked", "slide is blocked by another part of strand '" + s.id + "'", {s.id}, {p});
                    return r;
                }
            }
        }

        const size_t i1 = (seg + 1) % n;
        const Point shift = dir * dist;
        std::vector<Point> path;
        path.reserve(n + 2);
        for (size_t j = 0; j < n; j++) {
            if (j == seg) {
                path.push_back(s.path[j]);
                path.push_back(s.path[j] + shift);
            } else if (j == i1) {
                path.push_back(s.path[j] + shift);
                path.push_back(s.path[j]);
            } else {
                path.push_back(s.path[j]);
            }
        }
        DefectStrand moved = s;
        moved.path = normalize_path(path, !s.is_open());
        r.append(validate_strand(moved, c_.bounds));
        if (!r.ok()) {
            return r;
        }
        if (result) {
            *result = c_;
            result->strands[si] = std::move(moved);
        }
        return r;
    }

    /// Geometric preconditions of a bridge on segments a and b. On success
    /// fills the two halves (unnormalized).
    bool bridge_shape(size_t si, size_t seg_a, size_t seg_b, std::vector<Point> &x_path, std::vector<Point> &y_path,
                      std::string &why) const {
        const DefectStrand &s = c_.strands[si];
        const size_t nseg = s.num_segments();
        if (seg_a >= nseg || seg_b >= nseg || seg_a == seg_b) {
            why = "bridge needs two distinct existing segments";
            return false;
        }
        size_t i = std::min(seg_a, seg_b);
        size_t j = std::max(seg_a, seg_b);
        Point ai = s.seg_start(i), bi = s.seg_end(i);
        Point aj = s.seg_start(j), bj = s.seg_end(j);
        int axis = axis_of(bi - ai);
        if (axis != axis_of(bj - aj)) {
            why = "segments are not parallel";
            return false;
        }
        Point di = direction_of(bi - ai);
        Point dj = direction_of(bj - aj);
        if (di != -dj) {
            why = "segments do not face each other (same traversal direction)";
            return false;
        }
        Point gap = aj - ai;
        gap[axis] = 0;
        if (manhattan_length(gap) != 1) {
            why = "segments are not exactly one unit apart";
            return false;
        }
        int64_t lo = std::max(std::min(ai[axis], bi[axis]), std::min(aj[axis], bj[axis]));
        int64_t hi = std::min(std::max(ai[axis], bi[axis]), std::max(aj[axis], bj[axis]));
        if (hi - lo < 1) {
            why = "segments do not overlap by at least one unit";
            return false;
        }
        auto at = [&](const Point &base, int64_t v) {
            Point p = base;
            p[axis] = v;
            return p;
        };
        bool up = di[axis] > 0;
        Point a_in = at(ai, up ? lo : hi);
        Point a_out = at(ai, up ? hi : lo);
        Point b_in = at(aj, up ? hi : lo);
        Point b_out = at(aj, up ? lo : hi);
        const size_t n = s.path.size();
        x_path.assign(s.path.begin(), s.path.begin() + static_cast<std::ptrdiff_t>(i + 1));
        x_path.push_back(a_in);
        x_path.push_back(b_out);
        for (size_t k = j + 1; k < n; k++) {
            x_path.push_back(s.path[k]);
        }
        y_path.clear();
        y_path.push_back(a_out);
        for (size_t k = i + 1; k <= j; k++) {
            y_path.push_back(s.path[k]);
        }
        y_path.push_back(b_in);
        return true;
    }

    ValidityReport check_bridge(size_t si, size_t seg_a, size_t seg_b, TopoCircuit *result) const {
        ValidityReport r;
        const DefectStrand &s = c_.strands[si];
        std::vector<Point> xp, yp;
        std::string why;
        if (!bridge_shape(si, seg_a, seg_b, xp, yp, why)) {
            r.add("bad-bridge", why, {s.id});
            return r;
        }
        DefectStrand x = s;
        x.path = normalize_path(xp, !s.is_open());
        DefectStrand y = s;
        y.id = unused_id(s.id + "~split");
        y.closure = Closure::closed;
        y.path = normalize_path(yp, true);
        bool x_gone = !detail::min_vertices_ok(x.path, !s.is_open());
        bool y_gone = !detail::min_vertices_ok(y.path, true);
        if (x_gone && y_gone) {
            r.add("bad-bridge", "both halves of the bridge degenerate", {s.id});
            return r;
        }
        if (!x_gone) {
            r.append(validate_strand(x, c_.bounds));
        }
        if (!y_gone) {
            r.append(validate_strand(y, c_.bounds));
        }
        if (!r.ok()) {
            return r;
        }

        TopoCircuit split = c_;
        split.strands[si] = x;
        if (x_gone) {
            split.strands.erase(split.strands.begin() + static_cast<std::ptrdiff_t>(si));
        }
        if (!y_gone) {
            split.strands.push_back(y);
        }
        auto is_null = [&](const DefectStrand &half, bool gone, ValidityReport &err) {
            if (gone) {
                return true;
            }
            if (half.is_open()) {
                return false;
            }
            try {
                return linking_row_zero(split, half.id);
            } catch (const LinkingError &e) {
                err.add("linking-failure", e.what(), {half.id});
                return false;
            }
        };
        ValidityReport err;
        TopoCircuit out;
        if (is_null(y, y_gone, err)) {
            out = c_;
            if (x_gone) {
                r.add("bad-bridge", "bridge leaves nothing behind", {s.id});
                return r;
            }
            out.strands[si] = std::move(x);
        } else if (is_null(x, x_gone, err)) {
            out = c_;
            y.id = s.id;
            out.strands[si] = std::move(y);
        } else {
            r.append(err);
            r.add("would-change-signature", "would change signature: neither half of the bridge is null", {s.id});
            return r;
        }
        if (result) {
            *result = std::move(out);
        }
        return r;
    }

    ValidityReport check_delete(size_t si, TopoCircuit *result) const {
        ValidityReport r;
        const DefectStrand &s = c_.strands[si];
        if (s.is_open() || !strand_ports(c_, s).empty()) {
            r.add("strand-carries-ports", "strand carries ports", {s.id});
            return r;
        }
        try {
            if (!linking_row_zero(c_, s.id)) {
                r.add("nonzero-linking-row", "nonzero linking row", {s.id});
                return r;
            }
        } catch (const LinkingError &e) {
            r.add("linking-failure", e.what(), {s.id});
            return r;
        }
        if (result) {
            *result = c_;
            result->strands.erase(result->strands.begin() + static_cast<std::ptrdiff_t>(si));
        }
        return r;
    }

    /// True iff strand `id` of `c` has zero linking number with every other
    /// strand.
    static bool linking_row_zero(const TopoCircuit &c, const std::string &id) {
        const DefectStrand *me = c.find(id);
        auto mine = detail::prepare(c, *me, me->is_open() ? open_strand_rank(c, *me) : 0);
        for (const auto &other : c.strands) {
            if (other.id == id) {
                continue;
            }
            auto theirs = detail::prepare(c, other, other.is_open() ? open_strand_rank(c, other) : 0);
            if (detail::boxes_separated(mine, theirs)) {
                continue;
            }
            if (detail::linking_of_prepared(mine, theirs, id, other.id, 0, 1) != 0) {
                return false;
            }
        }
        return true;
    }

   private:
    std::string unused_id(std::string base) const {
        while (c_.find(base)) {
            base += "'";
        }
        return base;
    }

    const TopoCircuit &c_;
    std::unordered_map<Point, size_t, PointHash> owner_;
};

inline ValidityReport check_slide(const TopoCircuit &c, const std::string &strand, size_t seg, const Point &dir,
                                  int64_t dist) {
    return MoveContext(c).check(Move::slide(strand, seg, dir, dist));
}

inline ValidityReport check_move(const TopoCircuit &c, const Move &m) {
    return MoveContext(c).check(m);
}

struct MoveError : std::runtime_error {
    ValidityReport report;
    MoveError(const std::string &what, ValidityReport r) : std::runtime_error(what), report(std::move(r)) {
    }
};

/// Applies `m` after checking it. Throws MoveError with the failing report.
inline TopoCircuit apply_move(const TopoCircuit &c, const Move &m) {
    TopoCircuit out;
    auto r = MoveContext(c).check(m, &out);
    if (!r.ok()) {
        throw MoveError(format_move(m) + ": " + r.violations.front().message, r);
    }
    return out;
}

/// A valid move together with the circuit it produces.
struct Candidate {
    Move move;
    TopoCircuit result;
};

/// Slide directions in enumeration order.
inline const std::array<Point, 6> &slide_directions() {
    static const std::array<Point, 6> dirs = {Point{-1, 0, 0}, Point{1, 0, 0},  Point{0, -1, 0},
                                              Point{0, 1, 0},  Point{0, 0, -1}, Point{0, 0, 1}};
    return dirs;
}

namespace detail {

inline void strand_candidates(const MoveContext &ctx, size_t si, size_t budget, std::vector<Candidate> &out) {
    const TopoCircuit &c = ctx.circuit();
    const DefectStrand &s = c.strands[si];
    const size_t nseg = s.num_segments();
    const int64_t reach = std::max({c.bounds.x, c.bounds.y, c.bounds.z, int64_t{1}});
    for (size_t seg = 0; seg < nseg && out.size() < budget; seg++) {
        if (s.is_open() && (seg == 0 || seg + 1 == nseg)) {
            continue;
        }
        int seg_axis = axis_of(s.seg_end(seg) - s.seg_start(seg));
        for (const auto &dir : slide_directions()) {
            if (axis_of(dir) == seg_axis) {
                continue;
            }
            for (int64_t d = 1; d <= reach && out.size() < budget; d++) {
                Candidate cand{Move::slide(s.id, seg, dir, d), {}};
                if (!ctx.check_slide(si, seg, dir, d, &cand.result).ok()) {
                    break;
                }
                out.push_back(std::move(cand));
            }
        }
    }
    for (size_t i = 0; i < nseg && out.size() < budget; i++) {
        for (size_t j = i + 1; j < nseg && out.size() < budget; j++) {
            std::vector<Point> xp, yp;
            std::string why;
            if (!ctx.bridge_shape(si, i, j, xp, yp, why)) {
                continue;
            }
            Candidate cand{Move::bridge(s.id, i, j), {}};
            if (ctx.check_bridge(si, i, j, &cand.result).ok()) {
                out.push_back(std::move(cand));
            }
        }
    }
    if (out.size() < budget && !s.is_open()) {
        Candidate cand{Move::delete_loop(s.id), {}};
        if (ctx.check_delete(si, &cand.result).ok()) {
            out.push_back(std::move(cand));
        }
    }
}

}  // namespace detail

/// Every valid move of `c` in the deterministic order (strand id, then
/// slides by segment, direction -x,+x,-y,+y,-z,+z and ascending distance,
/// then bridges by segment pair, then deletion), with the circuit each one
/// produces. The distance scan of a slide stops at its first invalid
/// distance. `workers` > 1 evaluates strands concurrently; the output is the
/// same.
inline std::vector<Candidate> enumerate_candidates(const TopoCircuit &c, size_t budget, unsigned workers = 1) {
    std::vector<size_t> order(c.strands.size());
    for (size_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return c.strands[a].id < c.strands[b].id;
    });
    MoveContext ctx(c);
    std::vector<Candidate> out;
    if (workers <= 1 || order.size() < 2) {
        for (size_t si : order) {
            if (out.size() >= budget) {
                break;
            }
            detail::strand_candidates(ctx, si, budget, out);
        }
        out.resize(std::min(out.size(), budget));
        return out;
    }
    std::vector<std::vector<Candidate>> per(order.size());
    for (size_t start = 0; start < order.size(); start += workers) {
        std::vector<std::future<void>> jobs;
        for (size_t k = start; k < std::min(order.size(), start + workers); k++) {
            jobs.push_back(std::async(std::launch::async, [&, k] {
                detail::strand_candidates(ctx, order[k], budget, per[k]);
            }));
        }
        for (auto &j : jobs) {
            j.get();
        }
    }
    for (auto &v : per) {
        for (auto &cand : v) {
            if (out.size() >= budget) {
                break;
            }
            out.push_back(std::move(cand));
        }
    }
    return out;
}

inline std::vector<Move> enumerate_moves(const TopoCircuit &c, size_t budget) {
    std::vector<Move> out;
    for (auto &cand : enumerate_candidates(c, budget)) {
        out.push_back(std::move(cand.move));
    }
    return out;
}

struct ReplayError : std::runtime_error {
    /// 1-based index of the failing move; 0 for a base mismatch.
    size_t step;
    ReplayError(size_t step_, const std::string &what) : std::runtime_error(what), step(step_) {
    }
};

/// Applies `log` to `base`, re-checking every move. Fails on the first bad
/// step without returning partial state.
inline TopoCircuit replay(const TopoCircuit &base, const MoveLog &log) {
    std::string digest = circuit_digest(base);
    if (digest != log.base_hash) {
        throw ReplayError(0, "base hash mismatch: log expects " + log.base_hash + ", circuit is " + digest);
    }
    TopoCircuit cur = base;
    for (size_t k = 0; k < log.moves.size(); k++) {
        TopoCircuit next;
        auto r = MoveContext(cur).check(log.moves[k], &next);
        if (!r.ok()) {
            throw ReplayError(k + 1, "step " + std::to_string(k + 1) + " (" + format_move(log.moves[k]) +
                                         ") is invalid: " + r.violations.front().message);
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace bw
