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
using bwtest::run_cli;

namespace {

std::string q(const std::filesystem::path &p) {
    return "'" + p.string() + "'";
}

std::string circuit_file(const std::string &name) {
    return q(bwtest::source_dir() + "/circuits/" + name);
}

}  // namespace

TEST(Cli, CompileThenLinkingMatrix) {
    auto dir = bwtest::temp_dir("cli-compile");
    auto out = dir / "cnot2.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(out)).code, 0);
    auto icm = parse_icm(read_text_file(bwtest::source_dir() + "/circuits/cnot2.icm"));
    EXPECT_EQ(read_text_file(out.string()), write_tqc(layout_canonical(icm)));
    auto lk = run_cli("--format json lk " + q(out));
    ASSERT_EQ(lk.code, 0);
    auto j = nlohmann::json::parse(lk.out);
    auto ids = j["ids"].get<std::vector<std::string>>();
    for (size_t a = 0; a < ids.size(); a++) {
        for (size_t b = 0; b < ids.size(); b++) {
            int expect = a == b ? 0 : bwtest::expected_abs_link(icm, ids[a], ids[b]);
            EXPECT_EQ(std::abs(j["matrix"][a][b].get<int>()), expect) << ids[a] << ' ' << ids[b];
        }
    }
    auto text = run_cli("lk " + q(out));
    EXPECT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("cnot0"), std::string::npos);
}

TEST(Cli, VerifyIsReflexive) {
    auto dir = bwtest::temp_dir("cli-verify");
    auto a = dir / "a.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("dist7.icm") + " -o " + q(a)).code, 0);
    EXPECT_EQ(run_cli("verify " + q(a) + " " + q(a)).code, 0);
    auto b = dir / "b.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(b)).code, 0);
    auto diff = run_cli("--format json verify " + q(a) + " " + q(b));
    EXPECT_EQ(diff.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(diff.out)["equal"]);
}

TEST(Cli, OptimizeReplayVerify) {
    auto dir = bwtest::temp_dir("cli-opt");
    auto base = dir / "base.tqc", fin = dir / "final.tqc", log = dir / "run.moves", trace = dir / "trace.csv";
    auto again = dir / "again.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(base)).code, 0);
    auto r = run_cli("optimize " + q(base) + " --strategy anneal --seed 3 --max-steps 60 --emit-log " + q(log) +
                     " --emit-trace " + q(trace) + " -o " + q(fin));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("final: "), std::string::npos);
    auto csv = read_text_file(trace.string());
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,objective,accepted,move_kind");
    ASSERT_EQ(run_cli("replay " + q(base) + " " + q(log) + " -o " + q(again)).code, 0);
    EXPECT_EQ(read_text_file(again.string()), read_text_file(fin.string()));
    EXPECT_EQ(run_cli("verify " + q(base) + " " + q(fin)).code, 0);
    EXPECT_EQ(run_cli("validate " + q(fin)).code, 0);

    // Tampering with the log is caught at the right step.
    auto moves = read_moves(read_text_file(log.string()));
    if (!moves.moves.empty()) {
        moves.moves[0] = Move::delete_loop("cnot0");
        write_text_file((dir / "bad.moves").string(), write_moves(moves));
        EXPECT_EQ(run_cli("replay " + q(base) + " " + q(dir / "bad.moves")).code, 1);
    }
}

TEST(Cli, Estimate) {
    auto dir = bwtest::temp_dir("cli-est");
    auto base = dir / "base.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(base)).code, 0);
    auto r = run_cli("estimate " + q(base) + " --code surface --p 1e-3 --eps 1e-9 --d 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("qubits: 1452\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("time_steps: 20\n"), std::string::npos) << r.out;
    auto j = run_cli("--format json estimate " + q(base) + " --code raussendorf --d 4");
    EXPECT_EQ(nlohmann::json::parse(j.out)["qubits"], 25920);
    auto sweep = run_cli("estimate " + q(base) + " --sweep 4,8");
    EXPECT_NE(sweep.out.find("\n4,121,5,1452,20,"), std::string::npos) << sweep.out;
    EXPECT_EQ(run_cli("estimate " + q(base) + " --code color").code, 2);
    EXPECT_EQ(run_cli("estimate " + q(base) + " --p 0.5").code, 1);
}

TEST(Cli, ExitCodes) {
    auto dir = bwtest::temp_dir("cli-exit");
    EXPECT_EQ(run_cli("").code, 2);
    EXPECT_EQ(run_cli("frobnicate").code, 2);
    EXPECT_EQ(run_cli("compile").code, 2);
    EXPECT_EQ(run_cli("compile " + q(dir / "missing.icm")).code, 3);
    write_text_file((dir / "bad.icm").string(), "qubits 1\ncnot 0 0\n");
    EXPECT_EQ(run_cli("compile " + q(dir / "bad.icm")).code, 1);
    auto v = run_cli("--format json validate " + q(dir / "bad.icm"));
    EXPECT_EQ(v.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(v.out)["ok"]);
    write_text_file((dir / "bad.tqc").string(), "{");
    EXPECT_EQ(run_cli("validate " + q(dir / "bad.tqc")).code, 1);
    EXPECT_EQ(run_cli("validate " + circuit_file("dist15.icm")).code, 0);
    EXPECT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(dir / "no/such/dir/x.tqc")).code, 3);
}

TEST(Cli, ServeSurvivesKill) {
    auto dir = bwtest::temp_dir("cli-serve");
    auto base = dir / "cnot2.tqc";
    ASSERT_EQ(run_cli("compile " + circuit_file("cnot2.icm") + " -o " + q(base)).code, 0);
    auto data = (dir / "data").string();
    nlohmann::json tree, board;
    {
        bwtest::ServeProcess srv(data, {base.string()});
        auto c = read_tqc(read_text_file(base.string()));
        auto moves = enumerate_moves(c, 6);
        for (const auto &m : moves) {
            auto r = srv.call({{"op", "submit_move"}, {"puzzle", "cnot2"}, {"node", 0}, {"move", format_move(m)}, {"author", "k"}});
            ASSERT_TRUE(r["accepted"]) << r.dump();
        }
        auto rej = srv.call({{"op", "submit_move"}, {"puzzle", "cnot2"}, {"node", 0}, {"move", "delete cnot0"}});
        EXPECT_FALSE(rej["accepted"]);
        tree = srv.call({{"op", "get_tree"}, {"puzzle", "cnot2"}});
        board = srv.call({{"op", "leaderboard"}});
        srv.kill();
    }
    bwtest::ServeProcess srv(data, {base.string()});
    EXPECT_EQ(srv.call({{"op", "get_tree"}, {"puzzle", "cnot2"}}), tree);
    EXPECT_EQ(srv.call({{"op", "leaderboard"}}), board);
    EXPECT_EQ(tree["nodes"].size(), 7u);
    httplib::Client client("127.0.0.1", srv.port());
    auto res = client.Post("/api", "{\"v\":1,\"op\":\"get_tree\",\"puzzle\":\"zz\"}", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
}
