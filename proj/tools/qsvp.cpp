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

// qsvp: command-line driver for the partitioned state-vector simulator.
//
//   qsvp run     <circuit> [--ranks P] [--scheme a|b|chunked:m] [--layout identity|auto] [--out F]
//   qsvp verify  <circuit> [--ranks P] [--scheme ...]
//   qsvp mem     --qubits n [--ranks P] [--scheme none|a|b|chunked:m|all] [--node-bytes B]
//   qsvp pairs   --qubits n --ranks P --qubit i
//   qsvp bench   --qubits n [--ranks P] [--scheme ...] [--gate x] [--repeat r]
//   qsvp layout  <circuit> --ranks P
//
// Exit codes: 0 ok, 1 verification deviation, 2 bad input, 3 capacity.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsvp/circuit_io.hpp"
#include "qsvp/dense.hpp"
#include "qsvp/engine.hpp"
#include "qsvp/layout.hpp"
#include "qsvp/partition.hpp"

namespace {

using namespace qsvp;

constexpr int kExitOk = 0;
constexpr int kExitDeviation = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

constexpr int kMaxFullDumpQubits = 20;
constexpr double kVerifyTol = 1e-10;

struct ExecArgs {
    std::uint64_t ranks = 1;
    std::string scheme = "b";
    std::string strategy = "sequential";
    int threads = 1;
    std::string execution = "cooperative";
};

void add_exec_options(CLI::App *cmd, ExecArgs &args) {
    cmd->add_option("--ranks", args.ranks, "Number of ranks (power of two)")->capture_default_str();
    cmd->add_option("--scheme", args.scheme, "Communication scheme: a, b or chunked:<m>")->capture_default_str();
    cmd->add_option("--strategy", args.strategy, "Kernel loop strategy: sequential, outer, inner, collapsed")
        ->capture_default_str();
    cmd->add_option("--threads", args.threads, "Kernel worker threads")->capture_default_str();
    cmd->add_option("--execution", args.execution, "Rank execution: cooperative or threaded")->capture_default_str();
}

RunOptions to_options(const ExecArgs &args) {
    RunOptions opts;
    opts.scheme = CommScheme::parse(args.scheme);
    opts.strategy.mode = parse_exec_mode(args.strategy);
    opts.strategy.worker_count = std::max(1, args.threads);
    if (args.execution == "cooperative") {
        opts.execution = RankExecution::cooperative;
    } else if (args.execution == "threaded") {
        opts.execution = RankExecution::threaded;
    } else {
        throw ParseError("unknown execution mode '" + args.execution + "'");
    }
    return opts;
}

PartitionPlan make_plan(int qubits, std::uint64_t ranks) {
    const int k = rank_bits_for(ranks);
    if (k > qubits - 1) {
        throw ValidationError(std::to_string(ranks) + " ranks need at least " + std::to_string(k + 1) + " qubits");
    }
    return PartitionPlan(qubits, k);
}

std::optional<QubitPermutation> choose_layout(const std::string &mode, const Circuit<double> &circuit,
                                              const PartitionPlan &plan) {
    if (mode == "identity") {
        return std::nullopt;
    }
    if (mode == "auto") {
        const auto counts = gate_histogram(circuit);
        return optimize_layout(counts, plan);
    }
    throw ParseError("unknown layout '" + mode + "' (expected identity or auto)");
}

// ---------------------------------------------------------------------------
int cmd_run(const std::string &file, const ExecArgs &exec, const std::string &layout_mode, const std::string &out_path,
            std::string stats_path, std::size_t top) {
    const Circuit<double> circuit = read_circuit_file(file);
    if (circuit.qubits() > kMaxQubits) {
        throw CapacityError("circuit has " + std::to_string(circuit.qubits()) + " qubits, limit is " +
                            std::to_string(kMaxQubits));
    }
    if (circuit.qubits() > kMaxFullDumpQubits && top == 0) {
        throw CapacityError("states above " + std::to_string(kMaxFullDumpQubits) +
                            " qubits need --top-amplitudes");
    }
    const PartitionPlan plan = make_plan(circuit.qubits(), exec.ranks);
    const RunOptions opts = to_options(exec);
    const auto layout = choose_layout(layout_mode, circuit, plan);

    auto result = run_circuit(circuit, plan, opts, nullptr, layout);
    const StateVector<double> state = gather_logical(result.state, layout);

    std::ostringstream body;
    if (top > 0) {
        write_state_top(body, state, top);
    } else {
        write_state(body, state);
    }
    if (out_path == "-") {
        std::cout << body.str();
    } else {
        std::ofstream(out_path) << body.str();
        if (stats_path.empty()) {
            stats_path = out_path + ".stats.csv";
        }
    }
    if (!stats_path.empty()) {
        std::ofstream stats(stats_path);
        write_stats_csv(stats, result.stats);
    }
    return kExitOk;
}

int cmd_verify(const std::string &file, const ExecArgs &exec, const std::string &layout_mode) {
    const Circuit<double> circuit = read_circuit_file(file);
    if (circuit.qubits() > kMaxDenseQubits) {
        throw CapacityError("verification needs n <= " + std::to_string(kMaxDenseQubits));
    }
    const PartitionPlan plan = make_plan(circuit.qubits(), exec.ranks);
    const RunOptions opts = to_options(exec);
    const auto layout = choose_layout(layout_mode, circuit, plan);

    auto result = run_circuit(circuit, plan, opts, nullptr, layout);
    const StateVector<double> engine_state = gather_logical(result.state, layout);
    const StateVector<double> oracle_state = oracle_run(circuit);
    const double deviation = max_deviation(engine_state, oracle_state);

    std::cout << "qubits " << circuit.qubits() << ", gates " << circuit.size() << ", ranks " << plan.ranks()
              << ", scheme " << opts.scheme.name() << '\n';
    std::cout << "max deviation " << format_real(deviation) << '\n';
    if (deviation <= kVerifyTol) {
        std::cout << "OK\n";
        return kExitOk;
    }
    std::cout << "FAIL (tolerance " << format_real(kVerifyTol) << ")\n";
    return kExitDeviation;
}

int cmd_mem(int qubits, std::uint64_t ranks, const std::string &scheme, std::uint64_t node_bytes,
            std::uint64_t bpa) {
    const PartitionPlan plan = make_plan(qubits, ranks);
    std::vector<std::pair<std::string, std::optional<CommScheme>>> rows;
    if (scheme == "all") {
        rows = {{"none", std::nullopt}, {"a", CommScheme::a()}, {"b", CommScheme::b()}};
    } else if (scheme == "none") {
        rows = {{"none", std::nullopt}};
    } else {
        const CommScheme s = CommScheme::parse(scheme);
        s.validate(plan);
        rows = {{s.name(), s}};
    }
    std::cout << "qubits " << qubits << ", ranks " << plan.ranks() << " (k = " << plan.rank_bits()
              << "), bytes/amplitude " << bpa << ", node bytes " << node_bytes << '\n';
    std::cout << "scheme,state_bytes_per_rank,buffer_bytes_per_rank,total_bytes_per_rank,total_bytes,fits,max_qubits\n";
    for (const auto &[name, s] : rows) {
        const MemEstimate e = mem_estimate(plan, s, bpa, node_bytes);
        std::cout << name << ',' << e.per_rank_state_bytes << ',' << e.per_rank_buffer_bytes << ','
                  << e.per_rank_total_bytes << ',' << e.total_bytes << ','
                  << (e.per_rank_total_bytes <= node_bytes ? "yes" : "no") << ',' << e.max_qubits << '\n';
    }
    return kExitOk;
}

int cmd_pairs(int qubits, std::uint64_t ranks, int qubit) {
    const PartitionPlan plan = make_plan(qubits, ranks);
    if (!needs_comm(plan, qubit)) {
        std::cout << "no communication\n";
        return kExitOk;
    }
    for (const auto &p : comm_pairs(plan, qubit).pairs) {
        std::cout << p.lo << " <-> " << p.hi << '\n';
    }
    return kExitOk;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_bench(int qubits, const ExecArgs &exec, const std::string &gate_name, int repeat, bool dry_run,
              const std::string &stats_path) {
    const PartitionPlan plan = make_plan(qubits, exec.ranks);
    const RunOptions opts = to_options(exec);
    opts.scheme.validate(plan);
    const Gate2x2<double> gate = standard_gate<double>(gate_name);
    const auto ratio = comm_ratio(plan);

    std::cout << "qubits " << qubits << ", ranks " << plan.ranks() << " (k = " << plan.rank_bits() << "), scheme "
              << opts.scheme.name() << ", gate " << gate_name << ", repeat " << repeat << '\n';
    std::cout << "c = " << (ratio ? format_ratio(*ratio) : std::string("n/a")) << '\n';
    if (dry_run) {
        return kExitOk;
    }
    if (qubits > kMaxQubits) {
        throw CapacityError("bench supports n <= " + std::to_string(kMaxQubits));
    }
    if (repeat < 1) {
        throw ValidationError("--repeat must be >= 1");
    }

    auto transport = std::make_shared<InMemoryTransport>(plan.ranks(), false);
    auto ds = dist_init<double>(plan, transport, opts.scheme);
    std::vector<GateStats> all;
    std::vector<double> comm_medians;
    std::vector<double> local_medians;

    std::cout << "qubit,comm_required,median_wall_time_s,messages_per_rank,bytes_per_rank\n";
    for (int q = 0; q < qubits; ++q) {
        std::vector<double> times;
        GateStats last;
        for (int r = 0; r < repeat; ++r) {
            last = dist_apply_single(ds, gate, q, opts);
            last.gate_index = all.size();
            all.push_back(last);
            times.push_back(last.wall_time);
        }
        const double med = median(times);
        (last.comm_required ? comm_medians : local_medians).push_back(med);
        std::cout << q << ',' << (last.comm_required ? 1 : 0) << ',' << format_real(med) << ','
                  << last.messages_per_rank << ',' << last.bytes_per_rank << '\n';
    }
    if (comm_medians.empty() || local_medians.empty()) {
        std::cout << "T = n/a\n";
    } else {
        std::cout << "T = " << format_real(time_ratio(median(comm_medians), median(local_medians))) << '\n';
    }
    if (!stats_path.empty()) {
        std::ofstream stats(stats_path);
        write_stats_csv(stats, all);
    }
    return kExitOk;
}

int cmd_layout(const std::string &file, std::uint64_t ranks) {
    const Circuit<double> circuit = read_circuit_file(file);
    const PartitionPlan plan = make_plan(circuit.qubits(), ranks);
    if (plan.rank_bits() < 1) {
        throw ValidationError("layout optimization needs at least 2 ranks");
    }
    const auto counts = gate_histogram(circuit);
    const QubitPermutation chosen = optimize_layout(counts, plan);
    const QubitPermutation identity = identity_perm(circuit.qubits());

    std::cout << "qubit,gates\n";
    for (std::size_t q = 0; q < counts.size(); ++q) {
        std::cout << q << ',' << counts[q] << '\n';
    }
    std::cout << "phys_to_logical";
    for (const int q : chosen.phys_to_logical()) {
        std::cout << ' ' << q;
    }
    std::cout << '\n';
    std::cout << "communicated gates " << communicated_gates(counts, plan, identity) << " -> "
              << communicated_gates(counts, plan, chosen) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Partitioned state-vector quantum circuit simulator"};
    app.require_subcommand(1);

    std::string file;
    ExecArgs exec;
    std::string layout_mode = "identity";
    std::string out_path = "-";
    std::string stats_path;
    std::size_t top = 0;

    auto *run = app.add_subcommand("run", "Simulate a circuit on the distributed engine");
    run->add_option("circuit", file, "Circuit file")->required();
    add_exec_options(run, exec);
    run->add_option("--layout", layout_mode, "Qubit layout: identity or auto")->capture_default_str();
    run->add_option("--out", out_path, "State output file ('-' for stdout)")->capture_default_str();
    run->add_option("--stats", stats_path, "Per-gate stats CSV (default <out>.stats.csv)");
    run->add_option("--top-amplitudes", top, "Write only the K largest amplitudes");

    auto *verify = app.add_subcommand("verify", "Compare the engine against the dense oracle");
    verify->add_option("circuit", file, "Circuit file")->required();
    add_exec_options(verify, exec);
    verify->add_option("--layout", layout_mode, "Qubit layout: identity or auto")->capture_default_str();

    int qubits = 0;
    std::string mem_scheme = "all";
    std::uint64_t node_bytes = std::uint64_t{1} << 37;
    std::uint64_t bpa = 16;
    auto *mem = app.add_subcommand("mem", "Per-rank memory requirements");
    mem->add_option("--qubits", qubits, "Qubit count")->required();
    mem->add_option("--ranks", exec.ranks, "Number of ranks (power of two)")->capture_default_str();
    mem->add_option("--scheme", mem_scheme, "none, a, b, chunked:<m> or all")->capture_default_str();
    mem->add_option("--node-bytes", node_bytes, "Memory per node in bytes")->capture_default_str();
    mem->add_option("--bpa", bpa, "Bytes per amplitude (8 or 16)")->capture_default_str();

    int qubit = 0;
    auto *pairs = app.add_subcommand("pairs", "Communication pairs for a gate on one qubit");
    pairs->add_option("--qubits", qubits, "Qubit count")->required();
    pairs->add_option("--ranks", exec.ranks, "Number of ranks (power of two)")->required();
    pairs->add_option("--qubit", qubit, "Target qubit")->required();

    std::string gate_name = "x";
    int repeat = 3;
    bool dry_run = false;
    auto *bench = app.add_subcommand("bench", "Time one gate on every qubit");
    bench->add_option("--qubits", qubits, "Qubit count")->required();
    add_exec_options(bench, exec);
    bench->add_option("--gate", gate_name, "Gate: i, x, y, z or h")->capture_default_str();
    bench->add_option("--repeat", repeat, "Repetitions per qubit")->capture_default_str();
    bench->add_option("--stats", stats_path, "Per-gate stats CSV");
    bench->add_flag("--dry-run", dry_run, "Print the configuration and communication ratio only");

    auto *layout = app.add_subcommand("layout", "Choose a qubit layout from the gate histogram");
    layout->add_option("circuit", file, "Circuit file")->required();
    layout->add_option("--ranks", exec.ranks, "Number of ranks (power of two)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*run) return cmd_run(file, exec, layout_mode, out_path, stats_path, top);
        if (*verify) return cmd_verify(file, exec, layout_mode);
        if (*mem) return cmd_mem(qubits, exec.ranks, mem_scheme, node_bytes, bpa);
        if (*pairs) return cmd_pairs(qubits, exec.ranks, qubit);
        if (*bench) return cmd_bench(qubits, exec, gate_name, repeat, dry_run, stats_path);
        if (*layout) return cmd_layout(file, exec.ranks);
    } catch (const CapacityError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
