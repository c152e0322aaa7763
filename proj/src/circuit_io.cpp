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

#include "qsvp/circuit_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

namespace qsvp {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
            ++pos;
        }
        if (pos > start) {
            tokens.push_back(line.substr(start, pos - start));
        }
    }
    return tokens;
}

int parse_int(std::string_view token, std::size_t line, const char *what) {
    int value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size()) {
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

double parse_real(std::string_view token, std::size_t line) {
    double value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size() || !std::isfinite(value)) {
        throw ParseError(line, "invalid real '" + std::string(token) + "'");
    }
    return value;
}

Gate2x2<double> parse_matrix(std::span<const std::string_view> reals, std::size_t line) {
    std::array<double, 8> v{};
    for (std::size_t t = 0; t < 8; ++t) {
        v[t] = parse_real(reals[t], line);
    }
    Gate2x2<double> g;
    g << std::complex<double>(v[0], v[1]), std::complex<double>(v[2], v[3]), std::complex<double>(v[4], v[5]),
        std::complex<double>(v[6], v[7]);
    if (!is_unitary(g, kValidationTol)) {
        throw ParseError(line, "gate matrix is not unitary");
    }
    return g;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void expect_arity(const std::vector<std::string_view> &tokens, std::size_t n, std::size_t line) {
    if (tokens.size() != n) {
        throw ParseError(line, "'" + std::string(tokens[0]) + "' expects " + std::to_string(n - 1) +
                                   " arguments, got " + std::to_string(tokens.size() - 1));
    }
}

std::optional<std::string_view> standard_name(const Gate2x2<double> &g) {
    static constexpr std::array<std::pair<StandardGate, std::string_view>, 5> names{{
        {StandardGate::I, "i"},
        {StandardGate::X, "x"},
        {StandardGate::Y, "y"},
        {StandardGate::Z, "z"},
        {StandardGate::H, "h"},
    }};
    for (const auto &[which, name] : names) {
        if (g == standard_gate<double>(which)) {
            return name;
        }
    }
    return std::nullopt;
}

} // namespace

Circuit<double> parse_circuit(std::string_view text) {
    std::optional<Circuit<double>> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            continue;
        }

        const std::string head = lowercase(tokens[0]);
        if (!circuit) {
            if (head != "qubits" || tokens.size() != 2) {
                throw ParseError(line_no, "expected 'qubits <n>' as the first statement");
            }
            const int n = parse_int(tokens[1], line_no, "qubit count");
            if (n < 1 || n > kMaxParsedQubits) {
                throw ParseError(line_no, "qubit count out of range");
            }
            circuit.emplace(n);
            continue;
        }
        if (head == "qubits") {
            throw ParseError(line_no, "duplicate 'qubits' statement");
        }

        try {
            if (head == "u") {
                expect_arity(tokens, 10, line_no);
                const int t = parse_int(tokens[1], line_no, "target");
                circuit->add(GateOp<double>::single(parse_matrix(std::span(tokens).subspan(2), line_no), t));
            } else if (head == "cu") {
                expect_arity(tokens, 11, line_no);
                const int c = parse_int(tokens[1], line_no, "control");
                const int t = parse_int(tokens[2], line_no, "target");
                circuit->add(
                    GateOp<double>::controlled(parse_matrix(std::span(tokens).subspan(3), line_no), c, t));
            } else if (head.size() == 2 && head[0] == 'c') {
                expect_arity(tokens, 3, line_no);
                const auto g = standard_gate<double>(parse_standard_gate(std::string_view(head).substr(1)));
                const int c = parse_int(tokens[1], line_no, "control");
                const int t = parse_int(tokens[2], line_no, "target");
                circuit->add(GateOp<double>::controlled(g, c, t));
            } else {
                expect_arity(tokens, 2, line_no);
                const auto g = standard_gate<double>(parse_standard_gate(head));
                circuit->add(GateOp<double>::single(g, parse_int(tokens[1], line_no, "target")));
            }
        } catch (const ParseError &e) {
            if (e.line() != 0) throw;
            throw ParseError(line_no, e.what());
        } catch (const ValidationError &e) {
            throw ParseError(line_no, e.what());
        } catch (const RangeError &e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!circuit) {
        throw ParseError(line_no, "missing 'qubits <n>' statement");
    }
    return std::move(*circuit);
}

Circuit<double> read_circuit_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open circuit file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_circuit(buf.str());
}

std::string format_real(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string format_circuit(const Circuit<double> &circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.qubits() << '\n';
    for (const auto &op : circuit.ops()) {
        const auto name = standard_name(op.gate);
        if (op.control) {
            out << 'c' << (name ? *name : "u") << ' ' << *op.control << ' ' << op.target;
        } else {
            out << (name ? *name : "u") << ' ' << op.target;
        }
        if (!name) {
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    out << ' ' << format_real(op.gate(r, c).real()) << ' ' << format_real(op.gate(r, c).imag());
                }
            }
        }
        out << '\n';
    }
    return out.str();
}

void write_state(std::ostream &out, const StateVector<double> &state) {
    for (Index j = 0; j < state.size(); ++j) {
        out << j << ',' << format_real(state[j].real()) << ',' << format_real(state[j].imag()) << '\n';
    }
}

void write_state_top(std::ostream &out, const StateVector<double> &state, std::size_t top) {
    std::vector<Index> order(state.size());
    std::iota(order.begin(), order.end(), Index{0});
    top = std::min<std::size_t>(top, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](Index a, Index b) {
                          const double na = std::norm(state[a]);
                          const double nb = std::norm(state[b]);
                          return na != nb ? na > nb : a < b;
                      });
    order.resize(top);
    std::sort(order.begin(), order.end());
    for (const Index j : order) {
        out << j << ',' << format_real(state[j].real()) << ',' << format_real(state[j].imag()) << '\n';
    }
}

void write_stats_csv(std::ostream &out, const std::vector<GateStats> &stats) {
    out << kStatsHeader << '\n';
    for (const auto &s : stats) {
        out << s.gate_index << ',' << s.qubit << ',';
        if (s.control) {
            out << *s.control;
        }
        out << ',' << (s.comm_required ? 1 : 0) << ',' << s.messages_per_rank << ',' << s.bytes_per_rank << ','
            << format_real(s.wall_time) << '\n';
    }
}

} // namespace qsvp
