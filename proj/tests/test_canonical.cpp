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

namespace {

ICMCircuit idle(int n) {
    ICMCircuit c;
    c.num_qubits = n;
    for (int q = 0; q < n; q++) {
        c.events.push_back(ICMEvent::init(q, InitBasis::Z0));
    }
    for (int q = 0; q < n; q++) {
        c.events.push_back(ICMEvent::measure(q, MeasureBasis::Z));
    }
    return c;
}

}  // namespace

TEST(Canonical, OneQubitNoCnot) {
    auto c = layout_canonical(idle(1));
    ASSERT_EQ(c.strands.size(), 1u);
    EXPECT_EQ(c.strands[0].path, (std::vector<Point>{{0, 0, 1}, {2, 0, 1}, {2, 2, 1}, {0, 2, 1}}));
    EXPECT_TRUE(validate_geometry(c).ok());
    // 2x2 rectangle with no ring: extents 2x2x1.
    EXPECT_EQ(bounding_volume(c), 4);
}

TEST(Canonical, TwoQubitsOneCnot) {
    auto c = layout_canonical(parse_icm("qubits 2; init 0 Z0; init 1 X+; cnot 0 1; measure 0 Z; measure 1 X"));
    ASSERT_TRUE(validate_geometry(c).ok());
    auto box = tight_box(c);
    EXPECT_EQ(box.extent(0), 4);
    EXPECT_EQ(box.extent(1), 6);
    EXPECT_EQ(box.extent(2), 2);
    EXPECT_EQ(bounding_volume(c), 48);
    const auto *ring = c.find("cnot0");
    ASSERT_NE(ring, nullptr);
    EXPECT_EQ(ring->kind, StrandKind::dual);
    EXPECT_EQ(ring->path, (std::vector<Point>{{1, 1, 0}, {1, 5, 0}, {1, 5, 2}, {1, 1, 2}}));
    EXPECT_EQ(c.find("q0")->meta.at("init"), "Z0");
    EXPECT_EQ(c.find("q1")->meta.at("measure"), "X");
    EXPECT_EQ(ring->meta.at("control"), "0");
    EXPECT_EQ(ring->meta.at("target"), "1");
}

TEST(Canonical, VolumeFormula) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 6; n++) {
        for (int m = 0; m <= 10; m++) {
            if (n == 1 && m > 0) {
                continue;
            }
            auto c = layout_canonical(bwtest::random_icm(rng, n, m, false));
            int64_t expected = (2 * m + 2) * (4 * n - 2) * (m >= 1 ? 2 : 1);
            EXPECT_EQ(bounding_volume(c), expected) << n << ' ' << m;
        }
    }
}

TEST(Canonical, LinkingPatternOnRandomCircuits) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; trial++) {
        int n = 2 + static_cast<int>(rng() % 5);
        int m = static_cast<int>(rng() % 11);
        auto icm = bwtest::random_icm(rng, n, m, trial % 2 == 1);
        auto c = layout_canonical(icm);
        ASSERT_TRUE(validate_geometry(c).ok()) << validate_geometry(c).str();
        auto lk = linking_matrix(c);
        for (const auto &[key, v] : lk.entries) {
            EXPECT_EQ(std::abs(v), bwtest::expected_abs_link(icm, key.first, key.second))
                << key.first << ' ' << key.second;
        }
    }
}

TEST(Canonical, InputOutputLinesArePinned) {
    auto c = layout_canonical(parse_icm("qubits 2\ninput 0\noutput 1\ninit 0 Z0\ninit 1 Z0\ncnot 0 1\n"
                                        "measure 0 Z\nmeasure 1 Z\n"));
    ASSERT_TRUE(validate_geometry(c).ok());
    ASSERT_EQ(c.ports.size(), 4u);
    EXPECT_EQ(c.ports[0].name, "q0.in.0");
    EXPECT_EQ(c.ports[0].face, Face::input);
    EXPECT_EQ(c.ports[0].position, (Point{0, 0, 1}));
    EXPECT_EQ(c.ports[2].name, "q1.out.0");
    EXPECT_EQ(c.ports[2].position, (Point{4, 4, 1}));
    EXPECT_TRUE(c.find("q0")->is_open());
    EXPECT_TRUE(c.find("q1")->is_open());
}

TEST(Canonical, CustomParameters) {
    CanonicalLayoutParams p{4, 8, 4};
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; trial++) {
        auto icm = bwtest::random_icm(rng, 3, 4, true);
        auto c = layout_canonical(icm, p);
        ASSERT_TRUE(validate_geometry(c).ok());
        auto lk = linking_matrix(c);
        for (const auto &[key, v] : lk.entries) {
            EXPECT_EQ(std::abs(v), bwtest::expected_abs_link(icm, key.first, key.second));
        }
    }
    EXPECT_THROW(layout_canonical(idle(1), {3, 4, 2}), std::invalid_argument);
    EXPECT_THROW(layout_canonical(idle(1), {4, 4, 2}), std::invalid_argument);
}

TEST(Canonical, Deterministic) {
    auto icm = parse_icm(read_text_file(bwtest::source_dir() + "/circuits/dist7.icm"));
    EXPECT_EQ(write_tqc(layout_canonical(icm)), write_tqc(layout_canonical(icm)));
}

TEST(Canonical, RejectsInvalidIcm) {
    ICMCircuit c;
    c.num_qubits = 1;
    c.events = {ICMEvent::init(0, InitBasis::Z0)};
    EXPECT_THROW(layout_canonical(c), std::invalid_argument);
}
