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

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstring>
#include <memory>
#include <optional>
#include <vector>

#include "qsvp/core.hpp"
#include "qsvp/detail/rank_task.hpp"
#include "qsvp/kernel.hpp"
#include "qsvp/layout.hpp"
#include "qsvp/partition.hpp"
#include "qsvp/transport.hpp"

namespace qsvp {

/// One rank's slab of 2^(n-k) amplitudes and its communication scratch.
template <typename Scalar = double> struct RankState {
    Index rank = 0;
    AmplitudeVector<Scalar> local;
    AmplitudeVector<Scalar> buffer;
};

/// The state vector distributed over 2^k ranks sharing one transport.
template <typename Scalar = double> class DistState {
  public:
    DistState(PartitionPlan plan, std::shared_ptr<Transport> transport, Index buffer_amplitudes)
        : plan_(plan), transport_(std::move(transport)) {
        if (!transport_) {
            throw ValidationError("distributed state needs a transport");
        }
        if (transport_->ranks() != plan_.ranks()) {
            throw ValidationError("transport rank count does not match the partition plan");
        }
        ranks_.resize(plan_.ranks());
        for (Index r = 0; r < plan_.ranks(); ++r) {
            ranks_[r].rank = r;
            ranks_[r].local = AmplitudeVector<Scalar>::Zero(static_cast<Eigen::Index>(plan_.local_len()));
            ranks_[r].buffer = AmplitudeVector<Scalar>::Zero(static_cast<Eigen::Index>(buffer_amplitudes));
        }
    }

    [[nodiscard]] const PartitionPlan &plan() const noexcept { return plan_; }
    [[nodiscard]] Transport &transport() const noexcept { return *transport_; }
    [[nodiscard]] std::vector<RankState<Scalar>> &ranks() noexcept { return ranks_; }
    [[nodiscard]] const std::vector<RankState<Scalar>> &ranks() const noexcept { return ranks_; }
    [[nodiscard]] Index buffer_amplitudes() const noexcept {
        return ranks_.empty() ? 0 : static_cast<Index>(ranks_.front().buffer.size());
    }

  private:
    PartitionPlan plan_;
    std::shared_ptr<Transport> transport_;
    std::vector<RankState<Scalar>> ranks_;
};

struct RunOptions {
    CommScheme scheme = CommScheme::b();
    ExecStrategy strategy{};
    RankExecution execution = RankExecution::cooperative;
    /// Order in which the cooperative scheduler visits ranks; empty is
    /// ascending. Results never depend on it.
    std::vector<Index> schedule;
};

struct GateStats {
    std::size_t gate_index = 0;
    int qubit = 0;
    std::optional<int> control;
    bool comm_required = false;
    /// Maxima over ranks.
    std::uint64_t messages_per_rank = 0;
    std::uint64_t bytes_per_rank = 0;
    double wall_time = 0.0;
};

/// |0...0> spread over the plan's ranks, with scratch sized for `scheme`.
template <typename Scalar = double>
[[nodiscard]] DistState<Scalar> dist_init(const PartitionPlan &plan, std::shared_ptr<Transport> transport,
                                          const CommScheme &scheme = CommScheme::b()) {
    scheme.validate(plan);
    DistState<Scalar> ds(plan, std::move(transport), scheme.buffer_amplitudes(plan));
    ds.ranks().front().local(0) = Scalar(1);
    return ds;
}

template <typename Scalar = double>
[[nodiscard]] DistState<Scalar> dist_init(const PartitionPlan &plan, const CommScheme &scheme = CommScheme::b()) {
    return dist_init<Scalar>(plan, std::make_shared<InMemoryTransport>(plan.ranks()), scheme);
}

/// Rank slabs concatenated in rank order.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> gather(const DistState<Scalar> &ds, int max_qubits = kMaxQubits) {
    const PartitionPlan &plan = ds.plan();
    if (plan.qubits() > max_qubits) {
        throw CapacityError("state too large to gather on one node");
    }
    AmplitudeVector<Scalar> all(static_cast<Eigen::Index>(pow2(plan.qubits())));
    const auto len = static_cast<Eigen::Index>(plan.local_len());
    for (const auto &r : ds.ranks()) {
        all.segment(static_cast<Eigen::Index>(r.rank) * len, len) = r.local;
    }
    return StateVector<Scalar>(plan.qubits(), std::move(all));
}

/// t_comm / t_nocomm.
[[nodiscard]] inline double time_ratio(double t_comm, double t_nocomm) {
    if (!(t_comm > 0.0) || !(t_nocomm > 0.0)) {
        throw ValidationError("time ratio needs positive wall times");
    }
    return t_comm / t_nocomm;
}

[[nodiscard]] inline double time_ratio(const GateStats &comm, const GateStats &nocomm) {
    return time_ratio(comm.wall_time, nocomm.wall_time);
}

namespace detail {

template <typename Scalar>
Payload pack(const AmplitudeVector<Scalar> &src, std::span<const Index> indices, std::size_t slots) {
    using C = std::complex<Scalar>;
    Payload p(slots * sizeof(C));
    for (std::size_t t = 0; t < indices.size(); ++t) {
        const C value = src(static_cast<Eigen::Index>(indices[t]));
        std::memcpy(p.data() + t * sizeof(C), &value, sizeof(C));
    }
    return p;
}

template <typename Scalar>
Payload pack_prefix(const AmplitudeVector<Scalar> &src, std::size_t count) {
    using C = std::complex<Scalar>;
    Payload p(count * sizeof(C));
    if (count != 0) {
        std::memcpy(p.data(), src.data(), count * sizeof(C));
    }
    return p;
}

template <typename Scalar>
void unpack_into(const Payload &p, AmplitudeVector<Scalar> &dst, std::size_t count) {
    using C = std::complex<Scalar>;
    if (p.size() < count * sizeof(C) || static_cast<std::size_t>(dst.size()) < count) {
        throw CapacityError("message does not fit the receive buffer");
    }
    if (count != 0) {
        std::memcpy(dst.data(), p.data(), count * sizeof(C));
    }
}

template <typename Scalar>
void scatter(const Payload &p, AmplitudeVector<Scalar> &dst, std::span<const Index> indices) {
    using C = std::complex<Scalar>;
    if (p.size() < indices.size() * sizeof(C)) {
        throw CapacityError("message shorter than expected");
    }
    for (std::size_t t = 0; t < indices.size(); ++t) {
        C value;
        std::memcpy(&value, p.data() + t * sizeof(C), sizeof(C));
        dst(static_cast<Eigen::Index>(indices[t])) = value;
    }
}

template <typename Scalar>
RankTask local_single_program(RankState<Scalar> &st, Gate2x2<Scalar> g, int bit, ExecStrategy strat) {
    apply_single(std::span<std::complex<Scalar>>(st.local.data(), static_cast<std::size_t>(st.local.size())), g,
                 bit, strat);
    co_return;
}

template <typename Scalar>
RankTask local_controlled_program(RankState<Scalar> &st, Gate2x2<Scalar> g, int control, int target,
                                  ExecStrategy strat) {
    apply_controlled(std::span<std::complex<Scalar>>(st.local.data(), static_cast<std::size_t>(st.local.size())),
                     g, control, target, strat);
    co_return;
}

// Half-slab exchange with compute-and-return. Every local index j of the
// lower rank pairs with index j of the upper rank. The lower rank computes
// the pairs in `lower_work`, the upper rank those in `upper_work`; each ships
// the operands the other needs, then returns the updated remote halves.
template <typename Scalar>
RankTask scheme_a_program(RankChannel &ch, RankState<Scalar> &st, Index partner, bool lower,
                          Gate2x2<Scalar> g, std::span<const Index> lower_work,
                          std::span<const Index> upper_work) {
    const auto mine = lower ? lower_work : upper_work;
    const auto theirs = lower ? upper_work : lower_work;
    auto &buf = st.buffer;

    if (lower) {
        ch.send(partner, pack(st.local, theirs, theirs.size()));
        unpack_into(co_await ch.receive(partner), buf, mine.size());
    } else {
        unpack_into(co_await ch.receive(partner), buf, mine.size());
        ch.send(partner, pack(st.local, theirs, theirs.size()));
    }

    for (std::size_t t = 0; t < mine.size(); ++t) {
        auto &own = st.local(static_cast<Eigen::Index>(mine[t]));
        auto &remote = buf(static_cast<Eigen::Index>(t));
        if (lower) {
            const auto [a0, a1] = update_pair(own, remote, g);
            own = a0;
            remote = a1;
        } else {
            const auto [a0, a1] = update_pair(remote, own, g);
            remote = a0;
            own = a1;
        }
    }

    if (lower) {
        ch.send(partner, pack_prefix(buf, mine.size()));
        scatter(co_await ch.receive(partner), st.local, theirs);
    } else {
        scatter(co_await ch.receive(partner), st.local, theirs);
        ch.send(partner, pack_prefix(buf, mine.size()));
    }
}

// Pairwise streaming exchange of `chunk` amplitudes per message. Both ranks
// walk the same local indices in ascending order; each keeps its own row of
// the 2x2 update, so nothing is sent back. Messages are always `chunk`
// slots long.
template <typename Scalar>
RankTask streaming_program(RankChannel &ch, RankState<Scalar> &st, Index partner, bool lower,
                           Gate2x2<Scalar> g, std::span<const Index> work, std::size_t chunk) {
    auto &buf = st.buffer;
    for (std::size_t begin = 0; begin < work.size(); begin += chunk) {
        const auto part = work.subspan(begin, std::min(chunk, work.size() - begin));
        if (lower) {
            ch.send(partner, pack(st.local, part, chunk));
            unpack_into(co_await ch.receive(partner), buf, part.size());
        } else {
            unpack_into(co_await ch.receive(partner), buf, part.size());
            ch.send(partner, pack(st.local, part, chunk));
        }
        for (std::size_t t = 0; t < part.size(); ++t) {
            auto &own = st.local(static_cast<Eigen::Index>(part[t]));
            const auto remote = buf(static_cast<Eigen::Index>(t));
            own = lower ? g(0, 0) * own + g(0, 1) * remote : g(1, 0) * remote + g(1, 1) * own;
        }
    }
}

/// Builds one task per participating rank, runs them and times the whole.
template <typename Scalar, typename Build>
GateStats run_gate(DistState<Scalar> &ds, const RunOptions &opts, Build &&build) {
    const auto start = std::chrono::steady_clock::now();

    std::vector<RankChannel> channels;
    std::vector<RankTask> tasks;
    channels.reserve(ds.ranks().size());
    tasks.reserve(ds.ranks().size());
    for (auto &st : ds.ranks()) {
        channels.push_back(RankChannel{&ds.transport(), st.rank});
        std::optional<RankTask> task = build(channels.back(), st);
        if (task) {
            tasks.push_back(std::move(*task));
        } else {
            channels.pop_back();
        }
    }
    run_rank_tasks(tasks, channels, opts.execution, opts.schedule);

    GateStats stats;
    for (const auto &ch : channels) {
        stats.messages_per_rank = std::max(stats.messages_per_rank, ch.messages);
        stats.bytes_per_rank = std::max(stats.bytes_per_rank, ch.bytes);
    }
    stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

/// Exchange-based update of communication qubit `bit`. `local_control`
/// restricts the update to local indices with that bit set; `rank_control`
/// restricts it to ranks whose id has that bit set.
template <typename Scalar>
GateStats exchange(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int bit, const CommScheme &scheme,
                   const RunOptions &opts, std::optional<int> local_control, std::optional<int> rank_control) {
    const PartitionPlan &plan = ds.plan();
    if (!needs_comm(plan, bit)) {
        throw ContractError("qubit " + std::to_string(bit) + " does not require communication");
    }
    scheme.validate(plan);
    if (ds.buffer_amplitudes() < scheme.buffer_amplitudes(plan)) {
        throw CapacityError("rank buffer holds " + std::to_string(ds.buffer_amplitudes()) +
                            " amplitudes, scheme " + scheme.name() + " needs " +
                            std::to_string(scheme.buffer_amplitudes(plan)));
    }

    const RankMatching matching = comm_pairs(plan, bit);
    std::vector<Index> partner(plan.ranks());
    std::vector<bool> is_lower(plan.ranks());
    for (const auto &p : matching.pairs) {
        partner[p.lo] = p.hi;
        partner[p.hi] = p.lo;
        is_lower[p.lo] = true;
    }

    const Index len = plan.local_len();
    std::vector<Index> work;
    work.reserve(local_control ? len / 2 : len);
    for (Index j = 0; j < len; ++j) {
        if (!local_control || bit_set(j, *local_control)) {
            work.push_back(j);
        }
    }
    const auto split = static_cast<std::size_t>(
        std::partition_point(work.begin(), work.end(), [&](Index j) { return j < len / 2; }) - work.begin());
    const std::span<const Index> all(work);
    const auto lower_work = all.first(split);
    const auto upper_work = all.subspan(split);

    return run_gate(ds, opts, [&](RankChannel &ch, RankState<Scalar> &st) -> std::optional<RankTask> {
        if (rank_control && !bit_set(st.rank, *rank_control)) {
            return std::nullopt;
        }
        const Index other = partner[st.rank];
        const bool lower = is_lower[st.rank];
        switch (scheme.kind) {
        case CommScheme::Kind::scheme_a:
            return scheme_a_program(ch, st, other, lower, g, lower_work, upper_work);
        case CommScheme::Kind::scheme_b:
            return streaming_program(ch, st, other, lower, g, all, std::size_t{1});
        case CommScheme::Kind::chunked:
            return streaming_program(ch, st, other, lower, g, all, static_cast<std::size_t>(scheme.chunk));
        }
        return std::nullopt;
    });
}

template <typename Scalar> void check_target(const DistState<Scalar> &ds, int q) {
    if (q < 0 || q >= ds.plan().qubits()) {
        throw RangeError("qubit index " + std::to_string(q) + " out of range");
    }
}

} // namespace detail

/// Gate on a qubit whose pairs never leave a rank: every rank runs the
/// stride kernel on its own slab.
template <typename Scalar>
GateStats dist_apply_local(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int i, const RunOptions &opts = {}) {
    detail::check_target(ds, i);
    if (needs_comm(ds.plan(), i)) {
        throw ContractError("qubit " + std::to_string(i) + " requires communication");
    }
    GateStats s = detail::run_gate(ds, opts, [&](detail::RankChannel &, RankState<Scalar> &st) {
        return std::optional<detail::RankTask>(detail::local_single_program(st, g, i, opts.strategy));
    });
    s.qubit = i;
    return s;
}

template <typename Scalar>
GateStats dist_apply_scheme_a(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int i, const RunOptions &opts = {}) {
    detail::check_target(ds, i);
    GateStats s = detail::exchange(ds, g, i, CommScheme::a(), opts, std::nullopt, std::nullopt);
    s.qubit = i;
    s.comm_required = true;
    return s;
}

template <typename Scalar>
GateStats dist_apply_scheme_b(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int i, const RunOptions &opts = {}) {
    detail::check_target(ds, i);
    GateStats s = detail::exchange(ds, g, i, CommScheme::b(), opts, std::nullopt, std::nullopt);
    s.qubit = i;
    s.comm_required = true;
    return s;
}

template <typename Scalar>
GateStats dist_apply_chunked(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int i, Index m,
                             const RunOptions &opts = {}) {
    detail::check_target(ds, i);
    GateStats s = detail::exchange(ds, g, i, CommScheme::chunked(m), opts, std::nullopt, std::nullopt);
    s.qubit = i;
    s.comm_required = true;
    return s;
}

/// Single-qubit gate on physical bit i, routed by needs_comm.
template <typename Scalar>
GateStats dist_apply_single(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int i, const RunOptions &opts = {}) {
    detail::check_target(ds, i);
    if (!needs_comm(ds.plan(), i)) {
        return dist_apply_local(ds, g, i, opts);
    }
    GateStats s = detail::exchange(ds, g, i, opts.scheme, opts, std::nullopt, std::nullopt);
    s.qubit = i;
    s.comm_required = true;
    return s;
}

/**
 * Controlled gate on physical bits (c, t), three cases:
 *  - both local: kernel on every slab;
 *  - target remote, control local: scheme exchange over the local indices
 *    whose control bit is 1;
 *  - control remote: the control bit is fixed per rank, so only ranks whose
 *    id carries it apply the target update, locally or by exchange.
 */
template <typename Scalar>
GateStats dist_apply_controlled(DistState<Scalar> &ds, const Gate2x2<Scalar> &g, int c, int t,
                                const RunOptions &opts = {}) {
    detail::check_target(ds, c);
    detail::check_target(ds, t);
    if (c == t) {
        throw ValidationError("control and target must differ");
    }
    const int local_bits = ds.plan().local_bits();
    const bool target_remote = t >= local_bits;
    GateStats s;
    if (c < local_bits && !target_remote) {
        s = detail::run_gate(ds, opts, [&](detail::RankChannel &, RankState<Scalar> &st) {
            return std::optional<detail::RankTask>(detail::local_controlled_program(st, g, c, t, opts.strategy));
        });
    } else if (c < local_bits) {
        s = detail::exchange(ds, g, t, opts.scheme, opts, c, std::nullopt);
    } else if (!target_remote) {
        const int rank_bit = c - local_bits;
        s = detail::run_gate(ds, opts, [&](detail::RankChannel &, RankState<Scalar> &st) {
            if (!bit_set(st.rank, rank_bit)) {
                return std::optional<detail::RankTask>();
            }
            return std::optional<detail::RankTask>(detail::local_single_program(st, g, t, opts.strategy));
        });
    } else {
        s = detail::exchange(ds, g, t, opts.scheme, opts, std::nullopt, c - local_bits);
    }
    s.qubit = t;
    s.control = c;
    s.comm_required = target_remote;
    return s;
}

/// Applies op with its qubits already mapped to physical bits.
template <typename Scalar>
GateStats dist_apply(DistState<Scalar> &ds, const GateOp<Scalar> &op, const RunOptions &opts = {}) {
    if (op.kind == GateKind::controlled) {
        return dist_apply_controlled(ds, op.gate, *op.control, op.target, opts);
    }
    return dist_apply_single(ds, op.gate, op.target, opts);
}

template <typename Scalar = double> struct RunResult {
    DistState<Scalar> state;
    std::vector<GateStats> stats;
};

/**
 * Runs a circuit from |0...0>. With a layout, logical qubit q is stored at
 * physical bit perm.phys_of(q); stats keep logical qubit labels.
 */
template <typename Scalar>
[[nodiscard]] RunResult<Scalar> run_circuit(const Circuit<Scalar> &circuit, const PartitionPlan &plan,
                                            const RunOptions &opts = {},
                                            std::shared_ptr<Transport> transport = nullptr,
                                            const std::optional<QubitPermutation> &layout = std::nullopt) {
    if (circuit.qubits() != plan.qubits()) {
        throw ValidationError("circuit and plan qubit counts differ");
    }
    if (layout && layout->qubits() != plan.qubits()) {
        throw ValidationError("layout and plan qubit counts differ");
    }
    if (!transport) {
        transport = std::make_shared<InMemoryTransport>(plan.ranks());
    }
    RunResult<Scalar> result{dist_init<Scalar>(plan, std::move(transport), opts.scheme), {}};
    result.stats.reserve(circuit.size());
    for (std::size_t idx = 0; idx < circuit.size(); ++idx) {
        const GateOp<Scalar> &op = circuit.ops()[idx];
        GateOp<Scalar> phys = op;
        if (layout) {
            phys.target = layout->phys_of(op.target);
            if (op.control) {
                phys.control = layout->phys_of(*op.control);
            }
        }
        GateStats s = dist_apply(result.state, phys, opts);
        s.gate_index = idx;
        s.qubit = op.target;
        s.control = op.control;
        result.stats.push_back(s);
    }
    return result;
}

/// Gathered final state in logical index order.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> gather_logical(const DistState<Scalar> &ds,
                                                 const std::optional<QubitPermutation> &layout) {
    StateVector<Scalar> phys = gather(ds);
    if (!layout || layout->is_identity()) {
        return phys;
    }
    return permute_state(phys, layout->inverse());
}

} // namespace qsvp
