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

IcmErrorCode parse_error(const std::string &text, int *line = nullptr, int *column = nullptr) {
    try {
        parse_icm(text);
    } catch (const IcmError &e) {
        if (line) {
            *line = e.line;
        }
        if (column) {
            *column = e.column;
        }
        return e.code;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return IcmErrorCode::syntax;
}

}  // namespace

TEST(Icm, OneQubitIdentity) {
    auto c = parse_icm("qubits 1; init 0 Z0; measure 0 Z");
    EXPECT_EQ(c.num_qubits, 1);
    ASSERT_EQ(c.events.size(), 2u);
    EXPECT_EQ(c.events[0].kind, ICMEvent::Kind::init);
    EXPECT_EQ(c.events[1].kind, ICMEvent::Kind::measure);
    EXPECT_TRUE(validate_icm(c).ok());
}

TEST(Icm, TwoQubitOneCnot) {
    auto c = parse_icm("qubits 2; init 0 Z0; init 1 X+; cnot 0 1; measure 0 Z; measure 1 X");
    EXPECT_EQ(c.num_qubits, 2);
    EXPECT_EQ(c.cnot_count(), 1u);
    EXPECT_EQ(c.events[1].init_basis, InitBasis::Xplus);
    EXPECT_EQ(c.events[4].measure_basis, MeasureBasis::X);
    EXPECT_TRUE(validate_icm(c).ok());
}

TEST(Icm, SelfTargetIsReportedFirst) {
    int line = 0, col = 0;
    EXPECT_EQ(parse_error("qubits 1; cnot 0 0; measure 0 Z", &line, &col), IcmErrorCode::cnot_self_target);
    EXPECT_EQ(line, 1);
    EXPECT_EQ(col, 11);
    try {
        parse_icm("qubits 1; cnot 0 0; ...");
    } catch (const IcmError &e) {
        EXPECT_NE(std::string(e.what()).find("CNOT self-target"), std::string::npos) << e.what();
    }
}

TEST(Icm, DistinctSemanticCodes) {
    EXPECT_EQ(parse_error("qubits 1\ninit 0 Z0\ninit 0 Z0\nmeasure 0 Z\n"), IcmErrorCode::double_init);
    EXPECT_EQ(parse_error("qubits 2\ninit 0 Z0\ninit 1 Z0\nmeasure 0 Z\ncnot 0 1\n"), IcmErrorCode::use_after_measure);
    EXPECT_EQ(parse_error("qubits 2\ninit 0 Z0\ncnot 0 1\n"), IcmErrorCode::use_before_init);
    EXPECT_EQ(parse_error("qubits 1\ninit 0 Z0\nmeasure 0 Z\nmeasure 0 X\n"), IcmErrorCode::double_measure);
    EXPECT_EQ(parse_error("qubits 2\ninit 0 Z0\nmeasure 0 Z\n"), IcmErrorCode::missing_init);
    EXPECT_EQ(parse_error("qubits 1\ninit 0 Z0\n"), IcmErrorCode::missing_measure);
    EXPECT_EQ(parse_error("qubits 1\ninit 3 Z0\n"), IcmErrorCode::index_out_of_range);
    EXPECT_EQ(parse_error("qubits 1\ninput 0\noutput 0\n"), IcmErrorCode::io_conflict);
    int line = 0, col = 0;
    EXPECT_EQ(parse_error("qubits 1\n# fine\ninit 0 Q\n", &line, &col), IcmErrorCode::syntax);
    EXPECT_EQ(line, 3);
    EXPECT_EQ(col, 8);
    EXPECT_EQ(parse_error("init 0 Z0\n"), IcmErrorCode::syntax);
    EXPECT_EQ(parse_error(""), IcmErrorCode::syntax);
}

TEST(Icm, ValidateReportsEveryViolation) {
    ICMCircuit c;
    c.num_qubits = 2;
    c.events = {ICMEvent::init(0, InitBasis::Z0), ICMEvent::cnot(0, 0), ICMEvent::init(0, InitBasis::A),
                ICMEvent::measure(0, MeasureBasis::Z)};
    auto r = validate_icm(c);
    EXPECT_TRUE(r.has("cnot-self-target") || r.has(to_string(IcmErrorCode::cnot_self_target)));
    EXPECT_TRUE(r.has(to_string(IcmErrorCode::double_init)));
    EXPECT_TRUE(r.has(to_string(IcmErrorCode::missing_init)));
}

TEST(Icm, PrintParseRoundTrip) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; trial++) {
        int n = 2 + static_cast<int>(rng() % 5);
        auto c = bwtest::random_icm(rng, n, static_cast<int>(rng() % 8), true);
        c.name = "r" + std::to_string(trial);
        c.events.back().flag = "f";
        std::string text = print_icm(c);
        auto back = parse_icm(text);
        EXPECT_EQ(print_icm(back), text);
        EXPECT_EQ(back.inputs, c.inputs);
        EXPECT_EQ(back.outputs, c.outputs);
    }
}

TEST(Icm, CliffordTEmpty) {
    auto c = clifford_t_to_icm({}, 1);
    EXPECT_EQ(c.num_qubits, 1);
    ASSERT_EQ(c.events.size(), 2u);
    EXPECT_EQ(c.events[0].kind, ICMEvent::Kind::init);
    EXPECT_EQ(c.events[1].kind, ICMEvent::Kind::measure);
}

TEST(Icm, CliffordTSingleT) {
    auto c = clifford_t_to_icm({{CliffordTGate::Kind::T, 0, 0}}, 1);
    EXPECT_EQ(c.num_qubits, 2);
    ASSERT_EQ(c.events.size(), 5u);
    EXPECT_EQ(c.events[0].init_basis, InitBasis::Z0);
    EXPECT_EQ(c.events[1].init_basis, InitBasis::A);
    EXPECT_EQ(c.events[2].kind, ICMEvent::Kind::cnot);
    EXPECT_EQ(c.events[3].kind, ICMEvent::Kind::measure);
    EXPECT_EQ(c.events[3].measure_basis, MeasureBasis::Z);
    EXPECT_FALSE(c.events[3].flag.empty());
    EXPECT_EQ(c.events[4].kind, ICMEvent::Kind::measure);
    EXPECT_EQ(c.events[4].qubit, 1);
}

TEST(Icm, CliffordTCounts) {
    using K = CliffordTGate::Kind;
    auto c = clifford_t_to_icm({{K::T, 0, 0}, {K::CNOT, 0, 1}, {K::T, 1, 0}, {K::T, 0, 0}}, 2);
    EXPECT_EQ(c.num_qubits, 2 + 3);
    EXPECT_EQ(c.cnot_count(), 3u + 1u);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; trial++) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<CliffordTGate> gates;
        int t = 0, p = 0, h = 0, cx = 0;
        for (int g = 0; g < static_cast<int>(rng() % 12); g++) {
            auto kind = static_cast<K>(rng() % (n > 1 ? 4 : 3));
            int q = static_cast<int>(rng() % static_cast<uint64_t>(n));
            int tq = (q + 1 + static_cast<int>(rng() % static_cast<uint64_t>(std::max(1, n - 1)))) % n;
            gates.push_back({kind, q, tq});
            t += kind == K::T;
            p += kind == K::P;
            h += kind == K::H;
            cx += kind == K::CNOT;
        }
        auto out = clifford_t_to_icm(gates, n);
        EXPECT_TRUE(validate_icm(out).ok()) << validate_icm(out).str();
        EXPECT_EQ(out.num_qubits, n + t + p + h);
        EXPECT_EQ(out.cnot_count(), static_cast<size_t>(t + p + h + cx));
    }
}

TEST(Icm, CliffordTRejectsBadIndex) {
    EXPECT_THROW(clifford_t_to_icm({{CliffordTGate::Kind::T, 3, 0}}, 2), std::invalid_argument);
    EXPECT_THROW(clifford_t_to_icm({{CliffordTGate::Kind::CNOT, 0, 0}}, 2), std::invalid_argument);
}

TEST(Icm, BundledCircuitsParse) {
    for (const char *name : {"cnot2.icm", "dist7.icm", "dist15.icm"}) {
        auto c = parse_icm(read_text_file(bwtest::source_dir() + "/circuits/" + name));
        EXPECT_TRUE(validate_icm(c).ok()) << name;
    }
    auto d7 = parse_icm(read_text_file(bwtest::source_dir() + "/circuits/dist7.icm"));
    EXPECT_EQ(d7.num_qubits, 8);
    auto d15 = parse_icm(read_text_file(bwtest::source_dir() + "/circuits/dist15.icm"));
    EXPECT_EQ(d15.num_qubits, 16);
    int a_inits = 0;
    for (const auto &e : d15.events) {
        a_inits += e.kind == ICMEvent::Kind::init && e.init_basis == InitBasis::A;
    }
    EXPECT_EQ(a_inits, 15);
}
