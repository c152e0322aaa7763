// Copyright 2026 The qsvp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the built qsvp binary and checks outputs and exit codes.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qsvp/circuit_io.hpp"
#include "qsvp/dense.hpp"
#include "qsvp/random.hpp"

namespace qsvp {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome qsvp(const std::string &args) {
    const std::string cmd = std::string(QSVP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {};
    }
    Outcome o;
    std::array<char, 4096> buf{};
    while (const std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
        o.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qsvp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::complex<double>> parse_state(const std::string &text) {
    std::vector<std::complex<double>> v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        EXPECT_EQ(std::stoull(line.substr(0, a)), v.size());
        v.emplace_back(std::stod(line.substr(a + 1, b - a - 1)), std::stod(line.substr(b + 1)));
    }
    return v;
}

TEST_F(Cli, RunHadamard) {
    const auto o = qsvp("run " + write("h.txt", "qubits 1\nh 0\n"));
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "0,0.7071067811865475,0\n1,0.7071067811865475,0\n");
}

TEST_F(Cli, RunEmptyCircuit) {
    const auto o = qsvp("run --ranks 2 " + write("e.txt", "qubits 3\n"));
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "0,1,0\n1,0,0\n2,0,0\n3,0,0\n4,0,0\n5,0,0\n6,0,0\n7,0,0\n");
}

TEST_F(Cli, RunWritesStateAndStats) {
    const std::string c = write("bell.txt", "qubits 2\nh 0\ncx 0 1\n");
    const std::string out = (dir_ / "bell.state").string();
    const auto o = qsvp("run --ranks 2 --scheme a --out " + out + " " + c);
    ASSERT_EQ(o.code, 0);
    EXPECT_EQ(slurp(out), "0,0.7071067811865475,0\n1,0,0\n2,0,0\n3,0.7071067811865475,0\n");
    const std::string stats = slurp(out + ".stats.csv");
    std::istringstream lines(stats);
    std::string header, row0, row1, extra;
    std::getline(lines, header);
    std::getline(lines, row0);
    std::getline(lines, row1);
    EXPECT_FALSE(std::getline(lines, extra));
    EXPECT_EQ(header, kStatsHeader);
    EXPECT_EQ(row0.rfind("0,0,,0,0,0,", 0), 0u) << row0;
    // Target remote, control local: half of the 2-amplitude slab moves.
    EXPECT_EQ(row1.rfind("1,1,0,1,", 0), 0u) << row1;
}

TEST_F(Cli, RunMatchesVerifyOracleAndIsDeterministic) {
    std::mt19937_64 rng(31);
    for (int n : {3, 6, 8}) {
        const auto circuit = random_circuit(n, 40, rng);
        const std::string file = write("r" + std::to_string(n) + ".txt", format_circuit(circuit));
        const auto expected = oracle_run(circuit);
        for (const std::string scheme : {"a", "b", "chunked:2"}) {
            const std::string args = "run --ranks 4 --scheme " + scheme + " --layout auto " + file;
            const auto first = qsvp(args);
            ASSERT_EQ(first.code, 0);
            const auto got = parse_state(first.out);
            ASSERT_EQ(got.size(), expected.size());
            for (Index j = 0; j < expected.size(); ++j) {
                EXPECT_LE(std::abs(got[j] - expected[j]), 1e-10);
            }
            EXPECT_EQ(qsvp(args).out, first.out);
        }
    }
}

TEST_F(Cli, RunErrors) {
    EXPECT_EQ(qsvp("run " + write("bad.txt", "qubits 2\nh 5\n")).code, 2);
    EXPECT_EQ(qsvp("run " + (dir_ / "missing.txt").string()).code, 2);
    EXPECT_EQ(qsvp("run --ranks 3 " + write("ok.txt", "qubits 2\n")).code, 2);
    EXPECT_EQ(qsvp("run --scheme q " + write("ok2.txt", "qubits 2\n")).code, 2);
    EXPECT_EQ(qsvp("run " + write("big.txt", "qubits 31\n")).code, 3);
    EXPECT_EQ(qsvp("run " + write("wide.txt", "qubits 21\n")).code, 3);
    EXPECT_EQ(qsvp("run --bogus").code, 2);
}

TEST_F(Cli, RunTopAmplitudes) {
    const auto o = qsvp("run --top-amplitudes 1 " + write("x.txt", "qubits 21\nx 20\n"));
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "1048576,1,0\n");
}

TEST_F(Cli, Verify) {
    std::mt19937_64 rng(8);
    const std::string file = write("v.txt", format_circuit(random_circuit(8, 50, rng)));
    const auto o = qsvp("verify --ranks 8 --scheme b " + file);
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("OK"), std::string::npos);

    const auto id = qsvp("verify " + write("id.txt", "qubits 1\ni 0\n"));
    EXPECT_EQ(id.code, 0);
    EXPECT_NE(id.out.find("max deviation 0\n"), std::string::npos);

    EXPECT_EQ(qsvp("verify " + write("nu.txt", "qubits 1\nu 0 1 0 1 0 0 0 1 0\n")).code, 2);
    EXPECT_EQ(qsvp("verify " + write("13.txt", "qubits 13\n")).code, 3);
}

TEST(CliMem, Examples) {
    const auto full = qsvp("mem --qubits 33 --ranks 1 --scheme none --node-bytes 137438953472");
    EXPECT_EQ(full.code, 0);
    EXPECT_NE(full.out.find("none,137438953472,0,137438953472,137438953472,yes,33\n"), std::string::npos) << full.out;

    const auto thirty = qsvp("mem --qubits 30 --ranks 8 --scheme none");
    EXPECT_NE(thirty.out.find("none,2147483648,"), std::string::npos) << thirty.out;

    const auto both = qsvp("mem --qubits 4 --ranks 4");
    EXPECT_NE(both.out.find("\na,64,32,"), std::string::npos) << both.out;
    EXPECT_NE(both.out.find("\nb,64,16,"), std::string::npos) << both.out;

    EXPECT_EQ(qsvp("mem --qubits 4 --ranks 16").code, 2);
}

TEST(CliPairs, Examples) {
    EXPECT_EQ(qsvp("pairs --qubits 3 --ranks 4 --qubit 2").out, "0 <-> 2\n1 <-> 3\n");
    EXPECT_EQ(qsvp("pairs --qubits 4 --ranks 4 --qubit 3").out, "0 <-> 2\n1 <-> 3\n");
    EXPECT_EQ(qsvp("pairs --qubits 3 --ranks 4 --qubit 0").out, "no communication\n");
    EXPECT_EQ(qsvp("pairs --qubits 3 --ranks 4 --qubit 3").code, 2);
}

TEST(CliBench, DryRunRatio) {
    const auto o = qsvp("bench --qubits 30 --ranks 8 --dry-run");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("c = 9.00\n"), std::string::npos) << o.out;
}

TEST(CliBench, SingleRankHasNoRatio) {
    const auto o = qsvp("bench --qubits 6 --ranks 1 --repeat 2");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("c = n/a\n"), std::string::npos);
    EXPECT_NE(o.out.find("T = n/a\n"), std::string::npos);
    EXPECT_NE(o.out.find("\n5,0,"), std::string::npos);
    EXPECT_EQ(o.out.find(",1,"), std::string::npos) << o.out;
}

TEST(CliBench, ReportsCommColumns) {
    const auto o = qsvp("bench --qubits 8 --ranks 4 --scheme b --repeat 2");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("\n7,1,"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("\n0,0,"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("T = "), std::string::npos);
    EXPECT_EQ(qsvp("bench --qubits 40 --ranks 1").code, 3);
}

TEST_F(Cli, Layout) {
    const std::string skewed = write("s.txt", "qubits 3\nh 1\nx 0\nx 0\nx 0\nx 0\nx 0\n"
                                                  "h 2\nh 2\nh 2\nh 2\nh 2\nh 2\nh 2\n");
    const auto o = qsvp("layout --ranks 2 " + skewed);
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("qubit,gates\n0,5\n1,1\n2,7\n"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("phys_to_logical 0 2 1\n"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("communicated gates 7 -> 1\n"), std::string::npos) << o.out;

    const auto flat = qsvp("layout --ranks 4 " + write("f.txt", "qubits 3\nh 0\nh 1\nh 2\n"));
    EXPECT_NE(flat.out.find("phys_to_logical 0 1 2\n"), std::string::npos) << flat.out;

    const auto q0 = qsvp("layout --ranks 2 " + write("q0.txt", "qubits 3\nx 0\nh 0\n"));
    EXPECT_NE(q0.out.find("-> 0\n"), std::string::npos) << q0.out;

    EXPECT_EQ(qsvp("layout --ranks 1 " + skewed).code, 2);
    EXPECT_EQ(qsvp("layout --ranks 2 " + write("p.txt", "qubits 2\nfoo 0\n")).code, 2);
}

} // namespace
} // namespace qsvp
