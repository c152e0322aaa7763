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

#pragma once

// Text formats:
//
//   circuit file   "qubits <n>" then one gate per line:
//                    <g> <target>                 g in i x y z h
//                    u <target> <8 reals>         re/im of q11 q12 q21 q22
//                    c<g> <control> <target>
//                    cu <control> <target> <8 reals>
//                  '#' starts a comment.
//   state file     "index,re,im" per amplitude, ascending index.
//   stats csv      header kStatsHeader, one row per gate.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsvp/core.hpp"
#include "qsvp/engine.hpp"

namespace qsvp {

inline constexpr std::string_view kStatsHeader =
    "gate_index,qubit,control,comm_required,messages_per_rank,bytes_per_rank,wall_time_s";

/// Largest qubit count the parser accepts; callers enforce their own caps.
inline constexpr int kMaxParsedQubits = 62;

[[nodiscard]] Circuit<double> parse_circuit(std::string_view text);
[[nodiscard]] Circuit<double> read_circuit_file(const std::filesystem::path &path);

/// Re-parses to an identical circuit: standard gates by name, anything else
/// as u/cu with shortest round-trip reals.
[[nodiscard]] std::string format_circuit(const Circuit<double> &circuit);

/// Shortest decimal that parses back to exactly `value`.
[[nodiscard]] std::string format_real(double value);

void write_state(std::ostream &out, const StateVector<double> &state);

/// Only the `top` largest-magnitude amplitudes, still in ascending index
/// order; ties go to the lower index.
void write_state_top(std::ostream &out, const StateVector<double> &state, std::size_t top);

void write_stats_csv(std::ostream &out, const std::vector<GateStats> &stats);

} // namespace qsvp
