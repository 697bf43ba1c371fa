// Copyright 2026 The lmn Authors
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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = lmn_cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Digest from the system tool, independent of the library's own hashing.
std::string system_sha256(const fs::path &p) {
    const std::string cmd = "sha256sum '" + p.string() + "'";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return "";
    }
    char buf[65] = {};
    const size_t got = fread(buf, 1, 64, pipe);
    pclose(pipe);
    return std::string(buf, got);
}

std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lmn-cli-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("LMN_SEED");
    }
    void TearDown() override {
        unsetenv("LMN_SEED");
        fs::remove_all(dir_);
    }
    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }
    fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"sweep", "--sizes", "4", "--eps", "0.1:0.0:0.01"}).code, 2);
    EXPECT_EQ(cli({"sweep", "--sizes", "4", "--eps", "0.1", "--trials", "abc"}).code, 2);
    EXPECT_EQ(cli({"sweep", "--sizes", "4", "--eps", "0.1", "--lattice", "hexagonal"}).code, 2);
    EXPECT_EQ(cli({"decode-one", "--N", "4", "--eps", "0.1", "--errors", "1"}).code, 2);
    EXPECT_EQ(cli({"decode-one", "--N", "4"}).code, 2);
    setenv("LMN_SEED", "minus-one", 1);
    EXPECT_EQ(cli({"sweep", "--sizes", "4", "--eps", "0.1", "--trials", "5"}).code, 2);
    unsetenv("LMN_SEED");
    EXPECT_EQ(cli({"decode-one", "--N", "1", "--errors", ""}).code, 2);
    EXPECT_EQ(cli({"percolation", "--p-star", "1.5"}).code, 2);
}

TEST_F(CliTest, HelpAndVersionExitZero) {
    EXPECT_EQ(cli({"--help"}).code, 0);
    const Result v = cli({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}

TEST_F(CliTest, NoiselessSweepAgreesEverywhere) {
    const Result r = cli({"sweep", "--sizes", "4,6", "--eps", "0.0:0.0:0.01", "--trials", "10", "--out", path("s.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(slurp(path("s.csv")));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"kind", "N", "eps_b", "trials", "p_agree", "stderr", "seed"}));
    for (size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][0], "square-torus");
        EXPECT_EQ(rows[i][4], "1");
        EXPECT_EQ(rows[i][6], "1");
    }
    EXPECT_EQ(slurp(path("s.csv")).find('\r'), std::string::npos);
}

TEST_F(CliTest, SweepIsDeterministicAndManifestDigestsMatch) {
    const std::vector<std::string> base = {"sweep",    "--lattice", "triangular-torus", "--sizes", "4,6",
                                           "--eps",    "0.05,0.1",  "--refine",         "0.06:0.08:0.01",
                                           "--trials", "40",        "--seed",           "5"};
    auto a = base;
    a.insert(a.end(), {"--out", path("a.csv")});
    auto b = base;
    b.insert(b.end(), {"--out", path("b.csv"), "--workers", "2"});
    ASSERT_EQ(cli(a).code, 0);
    ASSERT_EQ(cli(b).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(csv_rows(slurp(path("a.csv"))).size(), 1u + 2 * 5);

    const json manifest = json::parse(slurp(path("a.csv.manifest.json")));
    EXPECT_EQ(manifest["command"], "sweep");
    EXPECT_EQ(manifest["master_seed"], 5);
    EXPECT_FALSE(manifest["code_version"].get<std::string>().empty());
    EXPECT_FALSE(manifest["timestamp"].get<std::string>().empty());
    ASSERT_EQ(manifest["outputs"].size(), 1u);
    EXPECT_EQ(manifest["outputs"][0]["sha256"], system_sha256(path("a.csv")));
    EXPECT_EQ(manifest["parameters"]["eps_grid"].size(), 5u);
}

TEST_F(CliTest, ReplayReproducesOutputs) {
    ASSERT_EQ(cli({"sweep", "--sizes", "4", "--eps", "0.05:0.1:0.05", "--trials", "30", "--seed", "9", "--out",
                   path("s.csv")})
                  .code,
              0);
    Result r = cli({"replay", path("s.csv.manifest.json")});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_TRUE(json::parse(r.out)["match"].get<bool>());

    json manifest = json::parse(slurp(path("s.csv.manifest.json")));
    manifest["master_seed"] = 10;
    std::ofstream(path("tampered.json")) << manifest.dump(2);
    r = cli({"replay", path("tampered.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(json::parse(r.out)["match"].get<bool>());
}

TEST_F(CliTest, ReplayChecksInputDigests) {
    std::ofstream(path("in.csv")) << "kind,N,eps_b,trials,p_agree,stderr,seed\n"
                                     "square-torus,8,0.08,100,0.95,0.001,1\nsquare-torus,8,0.12,100,0.80,0.001,1\n"
                                     "square-torus,16,0.08,100,0.97,0.001,1\nsquare-torus,16,0.12,100,0.70,0.001,1\n";
    ASSERT_EQ(cli({"threshold", "--in", path("in.csv"), "--out", path("t.json")}).code, 0);
    EXPECT_EQ(cli({"replay", path("t.json.manifest.json")}).code, 0);
    std::ofstream(path("in.csv"), std::ios::app) << "square-torus,16,0.1,100,0.9,0.001,1\n";
    EXPECT_EQ(cli({"replay", path("t.json.manifest.json")}).code, 1);
}

TEST_F(CliTest, SeedFromEnvironmentUnlessFlagGiven) {
    const std::vector<std::string> base = {"sweep", "--sizes", "6", "--eps", "0.1", "--trials", "50"};
    auto with_flag = base;
    with_flag.insert(with_flag.end(), {"--seed", "77", "--out", path("flag.csv")});
    ASSERT_EQ(cli(with_flag).code, 0);
    setenv("LMN_SEED", "77", 1);
    auto from_env = base;
    from_env.insert(from_env.end(), {"--out", path("env.csv")});
    ASSERT_EQ(cli(from_env).code, 0);
    EXPECT_EQ(slurp(path("flag.csv")), slurp(path("env.csv")));
    setenv("LMN_SEED", "78", 1);
    auto both = with_flag;
    both.back() = path("both.csv");
    ASSERT_EQ(cli(both).code, 0);
    EXPECT_EQ(slurp(path("flag.csv")), slurp(path("both.csv")));
    unsetenv("LMN_SEED");
    auto fallback = base;
    fallback.insert(fallback.end(), {"--out", path("default.csv")});
    ASSERT_EQ(cli(fallback).code, 0);
    EXPECT_EQ(csv_rows(slurp(path("default.csv")))[1][6], "1");
}

TEST_F(CliTest, ThresholdFromSyntheticSweep) {
    std::ostringstream csv;
    csv << "kind,N,eps_b,trials,p_agree,stderr,seed\n";
    for (int n : {8, 16, 32}) {
        for (int i = 0; i <= 16; ++i) {
            const double e = i / 100.0;
            csv << "square-torus," << n << "," << e << ",1000," << 0.75 + (0.10 - e) * 0.05 * n << ",0.001,3\n";
        }
    }
    std::ofstream(path("in.csv")) << csv.str();
    const Result r = cli({"threshold", "--in", path("in.csv"), "--pinf-out", path("pinf.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc["eps_star"].get<double>(), 0.10, 1e-12);
    for (const char *key : {"eps_star", "ci_low", "ci_high", "coefficient", "fit_eps_max", "method", "seed"}) {
        EXPECT_TRUE(doc.contains(key)) << key;
    }
    EXPECT_EQ(doc["fit_eps_max"], 0.04);
    const json pinf = json::parse(slurp(path("pinf.json")));
    EXPECT_EQ(pinf["kind"], "table");
    EXPECT_EQ(pinf["knots"].size(), 17u);
    EXPECT_TRUE(pinf.contains("fit_form"));
}

TEST_F(CliTest, ThresholdWithoutCrossingExitsOne) {
    std::ofstream(path("in.csv")) << "kind,N,eps_b,trials,p_agree,stderr,seed\n"
                                     "square-torus,8,0.01,100,0.99,0.001,1\nsquare-torus,8,0.02,100,0.98,0.001,1\n"
                                     "square-torus,16,0.01,100,0.995,0.001,1\nsquare-torus,16,0.02,100,0.99,0.001,1\n";
    const Result r = cli({"threshold", "--in", path("in.csv")});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
    std::ofstream(path("bad.csv")) << "kind,N\nsquare-torus,8\n";
    EXPECT_NE(cli({"threshold", "--in", path("bad.csv")}).code, 0);
}

TEST_F(CliTest, ResourcesSchemaAndInfeasibleCell) {
    Result r = cli({"resources", "--E", "0.5", "--N", "10,100", "--pinf", "quadratic:6"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"E_target", "N", "t", "eps_percent", "eps_b_net", "eps_p_net",
                                                 "E_achieved", "qubits_per_station"}));
    EXPECT_EQ(rows[1][1], "10");
    EXPECT_EQ(std::stoi(rows[1][7]), 5 * (2 * std::stoi(rows[1][2]) + 1));

    r = cli({"resources", "--E", "0.999", "--N", "10", "--pinf", "quadratic:6"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("infeasible"), std::string::npos);
    EXPECT_EQ(cli({"resources", "--E", "0.5", "--N", "10"}).code, 2);
    EXPECT_EQ(cli({"resources", "--E", "0.5", "--N", "10", "--pinf", path("missing.json")}).code, 1);
}

TEST_F(CliTest, ResourcesReadsTableModel) {
    json doc;
    doc["kind"] = "table";
    json knots = json::array();
    for (int i = 1; i <= 40; ++i) {
        const double x = i * 0.005;
        knots.push_back({x, std::max(0.0, 1 - 6 * x * x)});
    }
    doc["knots"] = knots;
    doc["has_fallback"] = true;
    doc["fallback_coefficient"] = 6.0;
    std::ofstream(path("pinf.json")) << doc.dump();
    const Result r = cli({"resources", "--E", "0.75", "--N", "10", "--pinf", path("pinf.json"), "--out",
                          path("plan.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json manifest = json::parse(slurp(path("plan.csv.manifest.json")));
    ASSERT_EQ(manifest["inputs"].size(), 1u);
    EXPECT_EQ(manifest["inputs"][0]["sha256"], system_sha256(path("pinf.json")));
}

TEST_F(CliTest, BudgetDocument) {
    const Result r = cli({"budget", "--beta", "0.001", "--delta", "0.001", "--mu", "0.001", "--m", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc["eps_b_phys_over_beta"].get<double>(), 8.5, 1e-12);
    EXPECT_EQ(doc["components"].size(), 3u);
    EXPECT_EQ(cli({"budget", "--beta", "0.001", "--m", "2"}).code, 2);
}

TEST_F(CliTest, PercolationDocument) {
    const Result r = cli({"percolation", "--simulate", "16,1.0,20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["percolation_bound"], 0.75);
    EXPECT_NEAR(doc["decoding_bound"].get<double>(), 0.813, 5e-4);
    EXPECT_EQ(doc["flip_rate_curve"].size(), 11u);
    EXPECT_EQ(doc["crossing"]["probability"], 1.0);
}

std::vector<std::string> dump_section(const std::string &dump, const std::string &name) {
    std::istringstream in(dump);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(name + " ", 0) == 0) {
            const int count = std::stoi(line.substr(name.size() + 1));
            std::vector<std::string> out(count);
            for (auto &entry : out) {
                std::getline(in, entry);
            }
            return out;
        }
    }
    ADD_FAILURE() << "no section " << name;
    return {};
}

TEST_F(CliTest, DecodeOneEmptyInstance) {
    const Result r = cli({"decode-one", "--N", "5", "--errors", ""});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "ERRORS 0\nPARITY 0\nDEFECTS 0\nMATCHING 0\nINFERRED 0\nRESIDUAL 0\n");
}

TEST_F(CliTest, DecodeOneTwoSeparatedErrors) {
    // Planar N = 6: horizontal edge ids are y*5 + x, vertical ones 30 + y*6 + x,
    // cell (x, y) is y*5 + x.
    const int right_of_1_1 = 30 + 1 * 6 + 2;   // vertical edge between cells (1,1) and (2,1)
    const int above_3_3 = 4 * 5 + 3;           // horizontal edge between cells (3,3) and (3,4)
    const Result r = cli({"decode-one", "--N", "6", "--errors",
                          std::to_string(right_of_1_1) + "," + std::to_string(above_3_3)});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(dump_section(r.out, "DEFECTS"), (std::vector<std::string>{"6", "7", "18", "23"}));
    EXPECT_TRUE(dump_section(r.out, "RESIDUAL").empty());
}

TEST_F(CliTest, DecodeOneStaircaseTieBreak) {
    // Errors up, right, right from cell (1,1) to (3,2); the decoder answers
    // right, up, right.
    const int up = 2 * 5 + 1;
    const int right_a = 30 + 2 * 6 + 2;
    const int right_b = 30 + 2 * 6 + 3;
    const Result r = cli({"decode-one", "--N", "6", "--errors",
                          std::to_string(up) + "," + std::to_string(right_a) + "," + std::to_string(right_b)});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(dump_section(r.out, "DEFECTS"), (std::vector<std::string>{"6", "13"}));
    const int r1 = 30 + 1 * 6 + 2;
    const int u = 2 * 5 + 2;
    const int r2 = 30 + 2 * 6 + 3;
    EXPECT_EQ(dump_section(r.out, "INFERRED"),
              (std::vector<std::string>{std::to_string(u), std::to_string(r1), std::to_string(r2)}));
    EXPECT_EQ(dump_section(r.out, "RESIDUAL").size(), 4u);
}

TEST_F(CliTest, DecodeOneSampledMatchesSeed) {
    const Result a = cli({"decode-one", "--lattice", "square-torus", "--N", "8", "--eps", "0.1", "--seed", "4",
                          "--trial", "3"});
    const Result b = cli({"decode-one", "--lattice", "square-torus", "--N", "8", "--eps", "0.1", "--seed", "4",
                          "--trial", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_TRUE(dump_section(a.out, "PARITY").empty());
}

}  // namespace
