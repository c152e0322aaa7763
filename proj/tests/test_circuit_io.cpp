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

#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qsvp/circuit_io.hpp"
#include "qsvp/random.hpp"

namespace qsvp {
namespace {

std::size_t error_line(std::string_view text) {
    try {
        (void)parse_circuit(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return 0;
}

TEST(ParseCircuit, StandardAndControlledGates) {
    const auto c = parse_circuit("# bell pair\nqubits 2\n\nH 0   # superpose\ncx 0 1\n");
    ASSERT_EQ(c.qubits(), 2);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c.ops()[0], GateOp<double>::single(standard_gate<double>(StandardGate::H), 0));
    EXPECT_EQ(c.ops()[1], GateOp<double>::controlled(standard_gate<double>(StandardGate::X), 0, 1));
    EXPECT_TRUE(parse_circuit("qubits 3").empty());
}

TEST(ParseCircuit, ExplicitMatrices) {
    const auto c = parse_circuit("qubits 2\nu 1 0 0 0 -1 0 1 0 0\ncu 1 0 1 0 0 0 0 0 0 -1\n");
    EXPECT_EQ(c.ops()[0].gate, standard_gate<double>(StandardGate::Y));
    EXPECT_EQ(c.ops()[0].target, 1);
    EXPECT_EQ(c.ops()[1].gate(1, 1), std::complex<double>(0, -1));
    EXPECT_EQ(c.ops()[1].control, 1);
}

TEST(ParseCircuit, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("h 0\n"), 1u);
    EXPECT_EQ(error_line("qubits 2\nh 0\nh 2\n"), 3u);
    EXPECT_EQ(error_line("qubits 2\n\n# c\nq 0\n"), 4u);
    EXPECT_EQ(error_line("qubits 2\ncx 1 1\n"), 2u);
    EXPECT_EQ(error_line("qubits 2\nh\n"), 2u);
    EXPECT_EQ(error_line("qubits 2\nh 0 1\n"), 2u);
    EXPECT_EQ(error_line("qubits 2\nu 0 1 0 0 0 0 0 1 x\n"), 2u);
    EXPECT_EQ(error_line("qubits 0\n"), 1u);
    EXPECT_EQ(error_line("qubits 2\nqubits 3\n"), 2u);
    EXPECT_EQ(error_line("qubits 1\nh -1\n"), 2u);
    EXPECT_EQ(error_line(""), 0u);
}

TEST(ParseCircuit, NonUnitaryMatrixIsRejected) {
    EXPECT_EQ(error_line("qubits 1\nh 0\nu 0 1 0 0 0 0 0 2 0\n"), 3u);
    EXPECT_EQ(error_line("qubits 2\ncu 0 1 1 0 1 0 0 0 1 0\n"), 2u);
    try {
        (void)parse_circuit("qubits 1\nu 0 1 0 1 0 0 0 1 0\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("unitary"), std::string::npos);
    }
}

TEST(FormatCircuit, RoundTripsExactly) {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 8; ++n) {
        const auto c = random_circuit(n, 40, rng);
        const std::string text = format_circuit(c);
        EXPECT_EQ(parse_circuit(text), c);
        EXPECT_EQ(format_circuit(parse_circuit(text)), text);
    }
}

TEST(FormatCircuit, StandardGatesByName) {
    Circuit<double> c(2);
    c.add(GateOp<double>::single(standard_gate<double>(StandardGate::H), 1));
    c.add(GateOp<double>::controlled(standard_gate<double>(StandardGate::Z), 1, 0));
    EXPECT_EQ(format_circuit(c), "qubits 2\nh 1\ncz 1 0\n");
}

TEST(FormatReal, ShortestRoundTrip) {
    EXPECT_EQ(format_real(1.0 / std::sqrt(2.0)), "0.7071067811865475");
    EXPECT_EQ(format_real(0.0), "0");
    EXPECT_EQ(format_real(-0.5), "-0.5");
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double v = u(rng);
        EXPECT_EQ(std::stod(format_real(v)), v);
    }
}

TEST(WriteState, Lines) {
    std::ostringstream out;
    write_state(out, StateVector<double>(1, AmplitudeVector<double>::Constant(2, 1.0 / std::sqrt(2.0))));
    EXPECT_EQ(out.str(), "0,0.7071067811865475,0\n1,0.7071067811865475,0\n");
}

TEST(WriteState, TopAmplitudesInIndexOrder) {
    AmplitudeVector<double> v(4);
    v << 0.1, std::complex<double>(0, -0.8), 0.5, -0.3;
    std::ostringstream out;
    write_state_top(out, StateVector<double>(2, v), 2);
    EXPECT_EQ(out.str(), "1,0,-0.8\n2,0.5,0\n");
}

TEST(WriteStats, HeaderAndRows) {
    GateStats a;
    a.gate_index = 0;
    a.qubit = 2;
    a.comm_required = true;
    a.messages_per_rank = 4;
    a.bytes_per_rank = 64;
    a.wall_time = 0.25;
    GateStats b;
    b.gate_index = 1;
    b.qubit = 0;
    b.control = 1;
    std::ostringstream out;
    write_stats_csv(out, {a, b});
    EXPECT_EQ(out.str(), std::string(kStatsHeader) + "\n0,2,,1,4,64,0.25\n1,0,1,0,0,0,0\n");
    EXPECT_EQ(kStatsHeader, "gate_index,qubit,control,comm_required,messages_per_rank,bytes_per_rank,wall_time_s");
}

} // namespace
} // namespace qsvp
