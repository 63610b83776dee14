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

// Pairwise linking numbers between defects and the topological signature
// built from them. Two circuits with equal signatures have the same ports,
// the same labelled strands (modulo deleted unlinked loops) and the same
// linking pattern; this is the invariant every deformation move preserves.
//
// Linking numbers are computed twice: once as the polygonal Gauss integral
// (sum of signed solid angles over segment pairs) and once by counting signed
// crossings in a generic projection. The two must agree.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "braidweave/geometry.hpp"
#include "braidweave/tqc.hpp"
#include "json.hpp"

namespace bw {

using Vec3 = std::array<double, 3>;

struct LinkingError : std::runtime_error {
    enum class Kind { not_disjoint, degenerate, disagreement, invalid };
    Kind kind;
    LinkingError(Kind k, const std::string &what) : std::runtime_error(what), kind(k) {
    }
};

inline constexpr double kIntegralityTolerance = 1e-6;

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPhi = 1.61803398874989484820;

inline Vec3 sub(const Vec3 &a, const Vec3 &b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3 &a, const Vec3 &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 normalized(const Vec3 &a) {
    double n = std::sqrt(dot(a, a));
    return {a[0] / n, a[1] / n, a[2] / n};
}
inline Vec3 to_vec(const Point &p) {
    return {static_cast<double>(p.x), static_cast<double>(p.y), static_cast<double>(p.z)};
}

// Offsets in (0.1, 0.4) that keep closure arcs of different strands off each
// other and off the lattice.
inline double jitter(size_t rank, int k) {
    double v = static_cast<double>(rank * 5 + static_cast<size_t>(k) + 1) * 1.41421356237309504880;
    return 0.1 + 0.3 * (v - std::floor(v));
}

inline double safe_asin(double x) {
    return std::asin(std::clamp(x, -1.0, 1.0));
}

}  // namespace detail

/// Signed solid angle subtended by two straight segments, divided by 4pi.
/// Summing this over all segment pairs of two closed polygons gives their
/// linking number.
inline double segment_pair_linking(const Vec3 &p1, const Vec3 &p2, const Vec3 &p3, const Vec3 &p4) {
    using namespace detail;
    Vec3 r12 = sub(p2, p1);
    Vec3 r34 = sub(p4, p3);
    Vec3 r13 = sub(p3, p1);
    Vec3 r14 = sub(p4, p1);
    Vec3 r23 = sub(p3, p2);
    Vec3 r24 = sub(p4, p2);
    double orient = dot(cross(r34, r12), r13);
    // Coplanar segments subtend no solid angle.
    double scale = std::sqrt(dot(r12, r12) * dot(r34, r34) * dot(r13, r13));
    if (std::abs(orient) <= 1e-14 * std::max(1.0, scale)) {
        return 0.0;
    }
    Vec3 n1 = normalized(cross(r13, r14));
    Vec3 n2 = normalized(cross(r14, r24));
    Vec3 n3 = normalized(cross(r24, r23));
    Vec3 n4 = normalized(cross(r23, r13));
    double omega = safe_asin(dot(n1, n2)) + safe_asin(dot(n2, n3)) + safe_asin(dot(n3, n4)) + safe_asin(dot(n4, n1));
    return (orient > 0 ? omega : -omega) / (4 * kPi);
}

/// Gauss linking integral of two closed polygons (vertex lists, implicitly
/// closed). Not rounded.
inline double gauss_linking_sum(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
    double total = 0;
    for (size_t i = 0; i < a.size(); i++) {
        const Vec3 &p1 = a[i];
        const Vec3 &p2 = a[(i + 1) % a.size()];
        for (size_t j = 0; j < b.size(); j++) {
            total += segment_pair_linking(p1, p2, b[j], b[(j + 1) % b.size()]);
        }
    }
    return total;
}

/// Linking number by signed crossings of `a` over `b` when both polygons are
/// projected along (1, phi, phi^2). `salt_a`/`salt_b` select tiny per-strand
/// in-plane offsets that break projection degeneracies.
inline int crossing_linking_count(const std::vector<Vec3> &a, const std::vector<Vec3> &b, int salt_a = 0,
                                  int salt_b = 1) {
    using namespace detail;
    const Vec3 dir = normalized({1.0, kPhi, kPhi * kPhi});
    const Vec3 u = normalized(cross(dir, {0.0, 0.0, 1.0}));
    const Vec3 v = cross(dir, u);
    struct Proj {
        double x, y, h;
    };
    auto project = [&](const std::vector<Vec3> &poly, int salt) {
        double angle = 2.39996322972865332 * (salt + 1);
        double eps = 1e-7 * (salt + 1);
        std::vector<Proj> out;
        out.reserve(poly.size());
        for (const auto &p : poly) {
            out.push_back({dot(p, u) + eps * std::cos(angle), dot(p, v) + eps * std::sin(angle), dot(p, dir)});
        }
        return out;
    };
    std::vector<Proj> pa = project(a, salt_a);
    std::vector<Proj> pb = project(b, salt_b);
    int over_a = 0;
    int over_b = 0;
    for (size_t i = 0; i < pa.size(); i++) {
        const Proj &a1 = pa[i];
        const Proj &a2 = pa[(i + 1) % pa.size()];
        double dax = a2.x - a1.x;
        double day = a2.y - a1.y;
        for (size_t j = 0; j < pb.size(); j++) {
            const Proj &b1 = pb[j];
            const Proj &b2 = pb[(j + 1) % pb.size()];
            double dbx = b2.x - b1.x;
            double dby = b2.y - b1.y;
            double denom = dax * dby - day * dbx;
            if (denom == 0) {
                continue;
            }
            double ox = b1.x - a1.x;
            double oy = b1.y - a1.y;
            double s = (ox * dby - oy * dbx) / denom;
            double t = (ox * day - oy * dax) / denom;
            if (s < 0 || s >= 1 || t < 0 || t >= 1) {
                continue;
            }
            double ha = a1.h + s * (a2.h - a1.h);
            double hb = b1.h + t * (b2.h - b1.h);
            // Positive crossing: the under strand is the over strand turned
            // counter-clockwise, seen from +dir.
            if (ha > hb) {
                over_a += denom > 0 ? 1 : -1;
            } else {
                over_b += denom < 0 ? 1 : -1;
            }
        }
    }
    if (over_a != over_b) {
        throw LinkingError(LinkingError::Kind::degenerate,
                           "crossing count is inconsistent (" + std::to_string(over_a) + " vs " +
                               std::to_string(over_b) + ")");
    }
    return over_a;
}

/// Rank of an open strand among the circuit's open strands ordered by id.
inline size_t open_strand_rank(const TopoCircuit &c, const DefectStrand &s) {
    size_t rank = 0;
    for (const auto &other : c.strands) {
        if (other.is_open() && other.id < s.id) {
            rank++;
        }
    }
    return rank;
}

/// The strand as a closed polygon. Closed strands are returned as-is. Open
/// strands are closed outside the declared bounds: each endpoint is pushed one
/// unit past its face and the two are joined through a far apex (both ends on
/// one face) or over the top of the bounds box (ends on opposite faces). The
/// exterior is empty, so the closure never passes through another defect.
inline std::vector<Vec3> closed_polygon(const TopoCircuit &c, const DefectStrand &s, size_t rank) {
    using detail::jitter;
    std::vector<Vec3> poly;
    poly.reserve(s.path.size() + 4);
    for (const auto &p : s.path) {
        poly.push_back(detail::to_vec(p));
    }
    if (!s.is_open()) {
        return poly;
    }
    if (s.path.size() < 2) {
        throw LinkingError(LinkingError::Kind::invalid, "open strand '" + s.id + "' is too short");
    }
    const double X = static_cast<double>(c.bounds.x);
    auto side_of = [&](const Point &tip) -> int {
        if (tip.x == 0) {
            return -1;
        }
        if (tip.x == c.bounds.x) {
            return +1;
        }
        throw LinkingError(LinkingError::Kind::invalid, "open strand '" + s.id + "' does not end on a boundary face");
    };
    auto far_x = [&](int side, int k) {
        double off = 3.0 + static_cast<double>(rank) + jitter(rank, k);
        return side < 0 ? -off : X + off;
    };
    const Point &a = s.path.front();
    const Point &b = s.path.back();
    int side_a = side_of(a);
    int side_b = side_of(b);
    Vec3 ext_a = {static_cast<double>(a.x + side_a), static_cast<double>(a.y), static_cast<double>(a.z)};
    Vec3 ext_b = {static_cast<double>(b.x + side_b), static_cast<double>(b.y), static_cast<double>(b.z)};
    poly.push_back(ext_b);
    if (side_a == side_b) {
        poly.push_back({far_x(side_a, 0), 0.5 * static_cast<double>(a.y + b.y) + jitter(rank, 1),
                        0.5 * static_cast<double>(a.z + b.z) + jitter(rank, 2)});
    } else {
        double top = static_cast<double>(c.bounds.z) + 2.0 + static_cast<double>(rank) + jitter(rank, 3);
        poly.push_back({far_x(side_b, 0), static_cast<double>(b.y) + jitter(rank, 1), top});
        poly.push_back({far_x(side_a, 4), static_cast<double>(a.y) + jitter(rank, 2), top + 0.5 * jitter(rank, 5)});
    }
    poly.push_back(ext_a);
    return poly;
}

inline std::vector<Vec3> closed_polygon(const TopoCircuit &c, const DefectStrand &s) {
    return closed_polygon(c, s, s.is_open() ? open_strand_rank(c, s) : 0);
}

namespace detail {

struct PreparedStrand {
    std::vector<Vec3> polygon;
    std::unordered_set<Point, PointHash> points;
    Vec3 lo{};
    Vec3 hi{};
};

inline PreparedStrand prepare(const TopoCircuit &c, const DefectStrand &s, size_t rank) {
    PreparedStrand out;
    out.polygon = closed_polygon(c, s, rank);
    for (const auto &p : strand_points(s)) {
        out.points.insert(p);
    }
    out.lo = out.hi = out.polygon.front();
    for (const auto &p : out.polygon) {
        for (int a = 0; a < 3; a++) {
            out.lo[a] = std::min(out.lo[a], p[a]);
            out.hi[a] = std::max(out.hi[a], p[a]);
        }
    }
    return out;
}

inline bool boxes_separated(const PreparedStrand &a, const PreparedStrand &b) {
    for (int k = 0; k < 3; k++) {
        if (a.hi[k] < b.lo[k] || b.hi[k] < a.lo[k]) {
            return true;
        }
    }
    return false;
}

inline int linking_of_prepared(const PreparedStrand &a, const PreparedStrand &b, const std::string &id_a,
                               const std::string &id_b, int salt_a, int salt_b) {
    const auto &small = a.points.size() <= b.points.size() ? a.points : b.points;
    const auto &large = a.points.size() <= b.points.size() ? b.points : a.points;
    for (const auto &p : small) {
        if (large.count(p)) {
            std::ostringstream msg;
            msg << "not disjoint: strands '" << id_a << "' and '" << id_b << "' share " << p;
            throw LinkingError(LinkingError::Kind::not_disjoint, msg.str());
        }
    }
    double g = gauss_linking_sum(a.polygon, b.polygon);
    double rounded = std::round(g);
    if (!(std::abs(g - rounded) <= kIntegralityTolerance)) {
        std::ostringstream msg;
        msg << "numerically degenerate: linking of '" << id_a << "' and '" << id_b << "' evaluated to " << g;
        throw LinkingError(LinkingError::Kind::degenerate, msg.str());
    }
    int solid = static_cast<int>(rounded);
    int crossings = crossing_linking_count(a.polygon, b.polygon, salt_a, salt_b);
    if (solid != crossings) {
        throw LinkingError(LinkingError::Kind::disagreement,
                           "linking backends disagree for '" + id_a + "' and '" + id_b + "': solid angle " +
                               std::to_string(solid) + ", crossings " + std::to_string(crossings));
    }
    return solid;
}

}  // namespace detail

/// Linking number of two distinct strands of `ctx`, in their stored
/// orientations. Throws LinkingError if they touch, if the Gauss sum is not
/// within 1e-6 of an integer, or if the two backends disagree.
inline int linking_number(const DefectStrand &a, const DefectStrand &b, const TopoCircuit &ctx) {
    if (a.id == b.id) {
        throw LinkingError(LinkingError::Kind::invalid, "linking number of a strand with itself");
    }
    auto pa = detail::prepare(ctx, a, a.is_open() ? open_strand_rank(ctx, a) : 0);
    auto pb = detail::prepare(ctx, b, b.is_open() ? open_strand_rank(ctx, b) : 0);
    return detail::linking_of_prepared(pa, pb, a.id, b.id, 0, 1);
}

/// Symmetric table of pairwise linking numbers keyed by unordered id pairs.
struct LinkingMatrix {
    std::vector<std::string> ids;
    std::map<std::pair<std::string, std::string>, int> entries;

    static std::pair<std::string, std::string> key(const std::string &a, const std::string &b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }
    int at(const std::string &a, const std::string &b) const {
        auto it = entries.find(key(a, b));
        return it == entries.end() ? 0 : it->second;
    }
    /// Linking numbers of `id` with every other strand.
    std::map<std::string, int> row(const std::string &id) const {
        std::map<std::string, int> out;
        for (const auto &other : ids) {
            if (other != id) {
                out[other] = at(id, other);
            }
        }
        return out;
    }
    bool row_is_zero(const std::string &id) const {
        for (const auto &[k, v] : entries) {
            if ((k.first == id || k.second == id) && v != 0) {
                return false;
            }
        }
        return true;
    }
    bool operator==(const LinkingMatrix &) const = default;
};

/// All pairwise linking numbers. Pairs whose closed polygons sit in
/// axis-separated boxes are 0 without evaluation.
inline LinkingMatrix linking_matrix(const TopoCircuit &c) {
    LinkingMatrix m;
    std::vector<size_t> order(c.strands.size());
    for (size_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return c.strands[x].id < c.strands[y].id;
    });
    std::vector<detail::PreparedStrand> prepared;
    size_t open_rank = 0;
    for (size_t idx : order) {
        const auto &s = c.strands[idx];
        m.ids.push_back(s.id);
        prepared.push_back(detail::prepare(c, s, s.is_open() ? open_rank++ : 0));
    }
    for (size_t i = 0; i < prepared.size(); i++) {
        for (size_t j = i + 1; j < prepared.size(); j++) {
            int lk = 0;
            if (!detail::boxes_separated(prepared[i], prepared[j])) {
                lk = detail::linking_of_prepared(prepared[i], prepared[j], m.ids[i], m.ids[j], static_cast<int>(i),
                                                 static_cast<int>(j));
            }
            m.entries[LinkingMatrix::key(m.ids[i], m.ids[j])] = lk;
        }
    }
    return m;
}

/// +1 if the stored traversal direction is the canonical one, else -1.
/// Closed strands: the lexicographically smallest vertex is left toward its
/// smaller neighbour. Open strands: run from the smaller port name.
inline int canonical_orientation(const TopoCircuit &c, const DefectStrand &s) {
    if (s.path.size() < 2) {
        return 1;
    }
    if (s.is_open()) {
        auto ports = strand_ports(c, s);
        if (ports.size() == 2 && ports[1] < ports[0]) {
            return -1;
        }
        return 1;
    }
    size_t n = s.path.size();
    size_t lo = static_cast<size_t>(std::min_element(s.path.begin(), s.path.end()) - s.path.begin());
    const Point &next = s.path[(lo + 1) % n];
    const Point &prev = s.path[(lo + n - 1) % n];
    return next < prev ? 1 : -1;
}

struct StrandInfo {
    StrandKind kind = StrandKind::primal;
    Closure closure = Closure::closed;
    std::map<std::string, std::string> meta;
    std::vector<std::string> ports;

    bool operator==(const StrandInfo &) const = default;
};

struct TopoSignature {
    std::vector<PortLabel> ports;
    std::map<std::string, StrandInfo> registry;
    /// Entries are orientation-canonicalized.
    LinkingMatrix linking;
};

inline TopoSignature signature(const TopoCircuit &c) {
    TopoSignature sig;
    sig.ports = c.ports;
    std::map<std::string, int> orient;
    for (const auto &s : c.strands) {
        auto ports = strand_ports(c, s);
        std::sort(ports.begin(), ports.end());
        sig.registry[s.id] = {s.kind, s.closure, s.meta, ports};
        orient[s.id] = canonical_orientation(c, s);
    }
    sig.linking = linking_matrix(c);
    for (auto &[k, v] : sig.linking.entries) {
        v *= orient[k.first] * orient[k.second];
    }
    return sig;
}

struct SignatureDiff {
    bool equal = true;
    std::vector<std::string> differences;

    explicit operator bool() const {
        return equal;
    }
    void fail(std::string why) {
        equal = false;
        differences.push_back(std::move(why));
    }
    std::string str() const {
        std::string out;
        for (const auto &d : differences) {
            out += d + "\n";
        }
        return out;
    }
};

/// Compares two signatures. Strands present on only one side are tolerated
/// when they are closed, port-free and unlinked (deleted null loops). Linking
/// entries are compared up to a consistent sign flip per strand, so a strand
/// whose canonical orientation turned over during a deformation still matches.
inline SignatureDiff signatures_equal(const TopoSignature &s1, const TopoSignature &s2) {
    SignatureDiff diff;
    if (s1.ports.size() != s2.ports.size()) {
        diff.fail("port count differs: " + std::to_string(s1.ports.size()) + " vs " + std::to_string(s2.ports.size()));
    } else {
        for (size_t i = 0; i < s1.ports.size(); i++) {
            if (!(s1.ports[i] == s2.ports[i])) {
                auto show = [](const PortLabel &p) {
                    std::ostringstream o;
                    o << "'" << p.name << "' at " << p.position << ' ' << to_string(p.face);
                    return o.str();
                };
                diff.fail("port " + std::to_string(i) + " differs (" + show(s1.ports[i]) + " vs " +
                          show(s2.ports[i]) + ")");
            }
        }
    }

    auto check_only_in = [&](const TopoSignature &mine, const TopoSignature &other, const char *side) {
        for (const auto &[id, info] : mine.registry) {
            if (other.registry.count(id)) {
                continue;
            }
            bool null_loop = info.closure == Closure::closed && info.ports.empty() && mine.linking.row_is_zero(id);
            if (!null_loop) {
                diff.fail("strand '" + id + "' only in " + side + " signature and is not an unlinked loop");
            }
        }
    };
    check_only_in(s1, s2, "first");
    check_only_in(s2, s1, "second");

    std::vector<std::string> common;
    for (const auto &[id, info] : s1.registry) {
        auto it = s2.registry.find(id);
        if (it == s2.registry.end()) {
            continue;
        }
        common.push_back(id);
        if (!(info == it->second)) {
            diff.fail("strand '" + id + "' has different kind, closure, labels or ports");
        }
    }

    // Magnitudes first, then a per-strand sign gauge over the nonzero entries.
    std::map<std::string, std::vector<std::pair<std::string, int>>> edges;
    for (size_t i = 0; i < common.size(); i++) {
        for (size_t j = i + 1; j < common.size(); j++) {
            int a = s1.linking.at(common[i], common[j]);
            int b = s2.linking.at(common[i], common[j]);
            if (std::abs(a) != std::abs(b)) {
                diff.fail("linking of '" + common[i] + "' and '" + common[j] + "' differs: " + std::to_string(a) +
                          " vs " + std::to_string(b));
            } else if (a != 0) {
                int rel = a == b ? 1 : -1;
                edges[common[i]].push_back({common[j], rel});
                edges[common[j]].push_back({common[i], rel});
            }
        }
    }
    std::map<std::string, int> gauge;
    for (const auto &id : common) {
        if (gauge.count(id)) {
            continue;
        }
        gauge[id] = 1;
        std::deque<std::string> queue{id};
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            for (const auto &[next, rel] : edges[cur]) {
                int want = gauge[cur] * rel;
                auto it = gauge.find(next);
                if (it == gauge.end()) {
                    gauge[next] = want;
                    queue.push_back(next);
                } else if (it->second != want) {
                    diff.fail("linking signs of '" + cur + "' and '" + next +
                              "' cannot be matched by reorienting strands");
                }
            }
        }
    }
    return diff;
}

inline SignatureDiff signatures_equal(const TopoCircuit &a, const TopoCircuit &b) {
    return signatures_equal(signature(a), signature(b));
}

/// Canonical text form of a signature, in the same layout style as .tqc.
inline std::string write_signature(const TopoSignature &sig) {
    std::ostringstream out;
    out << "{\n  \"version\": " << kTqcVersion << ",\n  \"ports\": [";
    for (size_t i = 0; i < sig.ports.size(); i++) {
        out << (i ? ",\n    " : "\n    ") << port_to_json(sig.ports[i]).dump();
    }
    out << (sig.ports.empty() ? "],\n" : "\n  ],\n");
    out << "  \"strands\": [";
    size_t i = 0;
    for (const auto &[id, info] : sig.registry) {
        nlohmann::ordered_json j;
        j["id"] = id;
        j["kind"] = to_string(info.kind);
        j["closure"] = to_string(info.closure);
        nlohmann::ordered_json meta = nlohmann::ordered_json::object();
        for (const auto &[k, v] : info.meta) {
            meta[k] = v;
        }
        j["meta"] = meta;
        j["ports"] = info.ports;
        out << (i++ ? ",\n    " : "\n    ") << j.dump();
    }
    out << (sig.registry.empty() ? "],\n" : "\n  ],\n");
    out << "  \"linking\": [";
    i = 0;
    for (const auto &[k, v] : sig.linking.entries) {
        if (v == 0) {
            continue;
        }
        nlohmann::ordered_json j;
        j["a"] = k.first;
        j["b"] = k.second;
        j["lk"] = v;
        out << (i++ ? ",\n    " : "\n    ") << j.dump();
    }
    out << (i == 0 ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

}  // namespace bw
