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

#include <cmath>

#include "test_util.hpp"

using namespace bw;

namespace {

// Exact rational re-evaluation of the printed piece formulas.
double q_surface(int d) {
    return 25.0 * d * d / 4.0 + 5.0 * d + 1.0;
}
double q_raussendorf(int d) {
    return 6.0 * d * d * d + 9.0 * d * d + 3.0 * d;
}
double t_piece(int d) {
    return 5.0 * d / 4.0;
}

// Linear scan using plain powers rather than logs.
int scan_distance(int64_t volume, const ErrorModel &m, double eps) {
    for (int d = 3; d <= kMaxDistance; d += 2) {
        double pl = m.prefactor * std::pow(m.p_phys / m.p_th, std::ceil((d + 1) / 2.0));
        if (static_cast<double>(volume) * pl <= eps * (1 + 1e-9)) {
            return d;
        }
    }
    return -1;
}

TopoCircuit cnot01() {
    return layout_canonical(parse_icm("qubits 2; init 0 Z0; init 1 X+; cnot 0 1; measure 0 Z; measure 1 X"));
}

}  // namespace

TEST(Resources, PieceFormulas) {
    EXPECT_EQ(qubits_per_piece(Code::surface, 4), 121);
    EXPECT_EQ(qubits_per_piece(Code::raussendorf, 4), 540);
    EXPECT_EQ(qubits_per_piece(Code::surface, 8), 441);
    EXPECT_EQ(steps_per_piece(4), 5);
    EXPECT_EQ(steps_per_piece(8), 10);
    EXPECT_EQ(steps_per_piece(5), 7);
    EXPECT_THROW(qubits_per_piece(Code::surface, 2), std::invalid_argument);
    EXPECT_THROW(steps_per_piece(1), std::invalid_argument);
}

TEST(Resources, FormulasAreExactWhenFourDividesD) {
    for (int d = 4; d <= 64; d += 4) {
        EXPECT_EQ(static_cast<double>(qubits_per_piece(Code::surface, d)), q_surface(d)) << d;
        EXPECT_EQ(static_cast<double>(steps_per_piece(d)), t_piece(d)) << d;
    }
    for (int d = 3; d <= 64; d++) {
        EXPECT_EQ(static_cast<double>(qubits_per_piece(Code::raussendorf, d)), q_raussendorf(d)) << d;
        EXPECT_EQ(static_cast<double>(qubits_per_piece(Code::surface, d)), std::ceil(q_surface(d))) << d;
        EXPECT_EQ(static_cast<double>(steps_per_piece(d)), std::ceil(t_piece(d))) << d;
    }
}

TEST(Resources, FormulasStrictlyIncrease) {
    for (int d = 3; d < 150; d++) {
        EXPECT_LT(qubits_per_piece(Code::surface, d), qubits_per_piece(Code::surface, d + 1));
        EXPECT_LT(qubits_per_piece(Code::raussendorf, d), qubits_per_piece(Code::raussendorf, d + 1));
        EXPECT_LT(steps_per_piece(d), steps_per_piece(d + 1));
    }
}

TEST(Resources, SelectDistanceExamples) {
    ErrorModel m{1e-3, 1e-2, 0.1};
    EXPECT_EQ(select_distance(1, m, 1e-10), 17);
    EXPECT_EQ(select_distance(1, m, 0.5), 3);
    EXPECT_EQ(select_distance(1000000, m, 1e-10), 29);
    EXPECT_THROW(select_distance(0, m, 1e-3), std::invalid_argument);
    EXPECT_THROW(select_distance(1, m, 0), std::invalid_argument);
    EXPECT_THROW(select_distance(1, m, 1), std::invalid_argument);
    ErrorModel near{0.0099, 0.01, 0.1};
    try {
        select_distance(1000, near, 1e-30);
        FAIL();
    } catch (const std::domain_error &e) {
        EXPECT_STREQ(e.what(), "target unreachable under model");
    }
    EXPECT_THROW(select_distance(1, ErrorModel{0.02, 0.01, 0.1}, 1e-3), std::invalid_argument);
}

TEST(Resources, SelectDistanceMatchesScan) {
    for (double ratio : {0.5, 0.1, 0.01}) {
        ErrorModel m{ratio * 0.01, 0.01, 0.1};
        for (int64_t v : {1, 7, 48, 1000, 123456}) {
            for (double eps : {0.3, 1e-3, 1e-6, 1e-9, 1e-12}) {
                int expect = scan_distance(v, m, eps);
                if (expect < 0) {
                    EXPECT_THROW(select_distance(v, m, eps), std::domain_error);
                } else {
                    EXPECT_EQ(select_distance(v, m, eps), expect) << ratio << ' ' << v << ' ' << eps;
                }
            }
        }
    }
}

TEST(Resources, SelectDistanceMonotone) {
    ErrorModel base{1e-3, 1e-2, 0.1};
    int prev = 3;
    for (int64_t v = 1; v < 100000000; v *= 3) {
        int d = select_distance(v, base, 1e-8);
        EXPECT_GE(d, prev);
        prev = d;
    }
    prev = 3;
    for (double p : {1e-5, 1e-4, 5e-4, 1e-3, 3e-3, 5e-3}) {
        int d = select_distance(1000, ErrorModel{p, 1e-2, 0.1}, 1e-8);
        EXPECT_GE(d, prev);
        prev = d;
    }
    prev = kMaxDistance;
    for (double eps : {1e-15, 1e-12, 1e-9, 1e-6, 1e-3, 0.1}) {
        int d = select_distance(1000, base, eps);
        EXPECT_LE(d, prev);
        prev = d;
    }
}

TEST(Resources, EstimateCanonicalCnot) {
    auto c = cnot01();
    ErrorModel m;
    auto s = estimate(c, Code::surface, m, 1e-3, 4);
    EXPECT_EQ(s.volume_pieces, 48);
    EXPECT_EQ(s.extent_x, 4);
    EXPECT_EQ(s.extent_y, 6);
    EXPECT_EQ(s.extent_z, 2);
    EXPECT_EQ(s.qubits, 1452);
    EXPECT_EQ(s.time_steps, 20);
    EXPECT_TRUE(s.distance_forced);
    auto r = estimate(c, Code::raussendorf, m, 1e-3, 4);
    EXPECT_EQ(r.qubits, 25920);
    EXPECT_EQ(r.qubits_cross_section, 12 * 540);
    EXPECT_EQ(s.qubits_volume, 48 * 121);

    auto chosen = estimate(c, Code::surface, m, 1e-9);
    EXPECT_EQ(chosen.d, select_distance(48, m, 1e-9));
    EXPECT_LE(chosen.total_failure, 1e-9 * (1 + 1e-9));
    EXPECT_EQ(chosen.str().substr(0, 14), "code: surface\n");
}

TEST(Resources, EstimateEmptyCircuit) {
    TopoCircuit c;
    c.bounds = {3, 3, 3};
    try {
        estimate(c, Code::surface, ErrorModel{}, 1e-3);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_STREQ(e.what(), "empty circuit");
    }
}

TEST(Resources, SweepCsv) {
    auto csv = resource_sweep_csv(cnot01(), Code::surface, ErrorModel{}, {4, 8});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "d,qubits_per_piece,steps_per_piece,qubits,time_steps,total_failure");
    EXPECT_NE(csv.find("\n4,121,5,1452,20,"), std::string::npos) << csv;
    EXPECT_NE(csv.find("\n8,441,10,5292,40,"), std::string::npos) << csv;
}

TEST(Resources, ParseCode) {
    EXPECT_EQ(parse_code("surface"), Code::surface);
    EXPECT_EQ(parse_code("raussendorf"), Code::raussendorf);
    EXPECT_THROW(parse_code("color"), std::invalid_argument);
}
