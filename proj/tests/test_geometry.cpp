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


#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace bw;
using bwtest::rect;

namespace {

TopoCircuit single_rect() {
    return bwtest::circuit({4, 4, 2}, {rect("a", StrandKind::primal, {1, 1, 0}, {2, 0, 0}, {0, 2, 0})});
}

}  // namespace

TEST(Geometry, MinimalRectangleIsValid) {
    EXPECT_TRUE(validate_geometry(single_rect()).ok());
}

TEST(Geometry, SharedPointNamesBothStrandsAndThePoint) {
    auto c = bwtest::circuit({4, 4, 2}, {rect("a", StrandKind::primal, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}),
                                         rect("b", StrandKind::dual, {1, 1, 0}, {1, 0, 0}, {0, 1, 0})});
    auto r = validate_geometry(c);
    ASSERT_TRUE(r.has("shared-point"));
    for (const auto &v : r.violations) {
        if (v.code == "shared-point") {
            EXPECT_EQ(v.strands, (std::vector<std::string>{"a", "b"}));
            EXPECT_EQ(v.points, (std::vector<Point>{{1, 1, 0}}));
        }
    }
}

TEST(Geometry, OpenEndpointInsideBoundsIsReported) {
    DefectStrand s;
    s.id = "w";
    s.closure = Closure::open;
    s.path = {{3, 0, 0}, {10, 0, 0}};
    TopoCircuit c = bwtest::circuit({10, 2, 2}, {s});
    c.ports = {{"w.a", {3, 0, 0}, Face::input}, {"w.b", {10, 0, 0}, Face::output}};
    auto r = validate_geometry(c);
    EXPECT_TRUE(r.has("endpoint-not-on-boundary"));
    EXPECT_TRUE(r.has("port-off-face"));
}

TEST(Geometry, PathInvariantViolations) {
    auto check = [](std::vector<Point> path, const char *code) {
        auto c = bwtest::circuit({9, 9, 9}, {bwtest::loop("s", std::move(path))});
        auto r = validate_geometry(c);
        EXPECT_TRUE(r.has(code)) << code << "\n" << r.str();
    };
    check({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}}, "too-few-vertices");
    check({{0, 0, 0}, {2, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}}, "zero-length-segment");
    check({{0, 0, 0}, {2, 1, 0}, {2, 2, 0}, {0, 2, 0}}, "segment-not-axis-aligned");
    check({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}}, "collinear-vertex");
    check({{0, 0, 0}, {3, 0, 0}, {3, 2, 0}, {1, 2, 0}, {1, -1, 0}, {0, -1, 0}}, "self-intersection");
    check({{0, 0, 0}, {12, 0, 0}, {12, 2, 0}, {0, 2, 0}}, "out-of-bounds");
}

TEST(Geometry, PortBookkeeping) {
    DefectStrand s;
    s.id = "w";
    s.closure = Closure::open;
    s.path = {{0, 0, 0}, {4, 0, 0}};
    TopoCircuit c = bwtest::circuit({4, 2, 2}, {s});
    EXPECT_TRUE(validate_geometry(c).has("endpoint-without-port"));
    c.ports = {{"in", {0, 0, 0}, Face::input}, {"out", {4, 0, 0}, Face::output}};
    EXPECT_TRUE(validate_geometry(c).ok());
    c.ports.push_back({"stray", {0, 2, 0}, Face::input});
    EXPECT_TRUE(validate_geometry(c).has("port-unreferenced"));
    c.ports.back() = {"in", {0, 2, 0}, Face::input};
    EXPECT_TRUE(validate_geometry(c).has("duplicate-port-name"));
    c.ports.back() = {"out", {4, 0, 0}, Face::input};
    auto r = validate_geometry(c);
    EXPECT_TRUE(r.has("duplicate-port-position") || r.has("duplicate-port-name"));
}

TEST(Geometry, BoundingVolumeExamples) {
    EXPECT_EQ(bounding_volume(single_rect()), 4);
    EXPECT_EQ(bounding_volume(TopoCircuit{}), 0);
    auto c = single_rect();
    auto box = tight_box(c);
    EXPECT_EQ(box.extent(0), 2);
    EXPECT_EQ(box.extent(1), 2);
    EXPECT_EQ(box.extent(2), 1);
}

TEST(Geometry, OccupiedPiecesExamples) {
    DefectStrand seg;
    seg.id = "s";
    seg.closure = Closure::open;
    seg.path = {{0, 0, 0}, {3, 0, 0}};
    TopoCircuit c = bwtest::circuit({3, 1, 1}, {seg});
    EXPECT_EQ(occupied_pieces(c), (std::set<Point>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}));

    auto r = single_rect();
    auto pts = occupied_pieces(r);
    EXPECT_EQ(pts.size(), 8u);
    EXPECT_FALSE(pts.count({2, 2, 0}));

    auto two = bwtest::circuit({9, 9, 2}, {rect("a", StrandKind::primal, {0, 0, 0}, {2, 0, 0}, {0, 2, 0}),
                                           rect("b", StrandKind::dual, {5, 5, 0}, {3, 0, 0}, {0, 1, 0})});
    EXPECT_EQ(occupied_pieces(two).size(), 8u + 8u);
    EXPECT_EQ(occupied_count(two), 16);
}

TEST(Geometry, VolumeTranslationAndBoundsProperties) {
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 200) {
        auto path = bwtest::random_loop(rng, 10, 5, 24);
        if (path.empty()) {
            continue;
        }
        auto c = bwtest::circuit({10, 10, 10}, {bwtest::loop("r", path)});
        ASSERT_TRUE(validate_geometry(c).ok()) << validate_geometry(c).str();
        int64_t v = bounding_volume(c);
        EXPECT_LE(v, 10 * 10 * 10);
        Point d{static_cast<int64_t>(rng() % 7), static_cast<int64_t>(rng() % 7), static_cast<int64_t>(rng() % 7)};
        EXPECT_EQ(bounding_volume(translate(c, d)), v);
        EXPECT_EQ(occupied_count(translate(c, d)), occupied_count(c));
        checked++;
    }
}

TEST(Geometry, RotationKeepsValidityAndVolume) {
    auto c = layout_canonical(parse_icm("qubits 3\ninput 0\noutput 2\ninit 0 Z0\ninit 1 X+\ninit 2 A\n"
                                        "cnot 0 2\ncnot 1 0\nmeasure 0 Z\nmeasure 1 X\nmeasure 2 Z\n"));
    ASSERT_TRUE(validate_geometry(c).ok());
    for (int axis = 0; axis < 3; axis++) {
        for (int turns = 1; turns < 4; turns++) {
            auto r = rotate_quarter(c, axis, turns);
            bool keeps_x_axis = axis == 0 || turns == 2;
            if (keeps_x_axis) {
                EXPECT_TRUE(validate_geometry(r).ok()) << axis << ' ' << turns << '\n' << validate_geometry(r).str();
            }
            EXPECT_EQ(bounding_volume(r), bounding_volume(c));
            EXPECT_EQ(occupied_count(r), occupied_count(c));
        }
    }
}
