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

// Brute-force reference simulator: materialize the full 2^n x 2^n unitary of
// each gate and multiply it into the state. Used as the ground truth for the
// stride kernel and the distributed engine, and as the cost model for a
// 1D row-partitioned matrix-vector product.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qsvp/core.hpp"

namespace qsvp {

/// Largest qubit count for which a dense unitary is materialized.
inline constexpr int kMaxDenseQubits = 12;

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar = double> struct DenseUnitary {
    int qubits = 0;
    DenseMatrix<Scalar> entries;

    [[nodiscard]] Index dim() const noexcept { return pow2(qubits); }
};

/// Memory and traffic of a 1D row-partitioned product over 2^kappa ranks.
struct MatvecCostReport {
    std::uint64_t ranks = 1;
    std::uint64_t rows_per_rank = 0;
    std::uint64_t replicated_vector_bytes = 0;
    std::uint64_t per_rank_matrix_bytes = 0;
    std::uint64_t per_rank_vector_bytes = 0;

    /// Row block plus the full state copy each rank keeps.
    [[nodiscard]] std::uint64_t per_rank_bytes() const noexcept {
        return per_rank_matrix_bytes + per_rank_vector_bytes;
    }
};

/// Cost of partitioning an n-qubit dense product over 2^kappa ranks.
[[nodiscard]] inline MatvecCostReport dense_cost(int n, int kappa, std::uint64_t bytes_per_entry) {
    if (n < 1 || n > 30) {
        throw CapacityError("dense cost model supports 1 <= n <= 30");
    }
    if (kappa < 0 || kappa > n) {
        throw RangeError("kappa must satisfy 0 <= kappa <= n");
    }
    if (bytes_per_entry == 0 || pow2(2 * n - kappa) > UINT64_MAX / bytes_per_entry) {
        throw CapacityError("dense matrix byte count overflows 64 bits");
    }
    MatvecCostReport r;
    r.ranks = pow2(kappa);
    r.rows_per_rank = pow2(n - kappa);
    r.per_rank_matrix_bytes = pow2(2 * n - kappa) * bytes_per_entry;
    r.per_rank_vector_bytes = pow2(n) * bytes_per_entry;
    r.replicated_vector_bytes = r.ranks * r.per_rank_vector_bytes;
    return r;
}

/// Largest n whose per-rank footprint fits into node_bytes; 0 if none does.
[[nodiscard]] inline int dense_max_qubits(std::uint64_t node_bytes, int kappa,
                                          std::uint64_t bytes_per_entry) {
    if (bytes_per_entry == 0) {
        throw ValidationError("bytes per entry must be positive");
    }
    int best = 0;
    for (int n = std::max(1, kappa); n <= 30; ++n) {
        if (pow2(2 * n - kappa) > node_bytes / bytes_per_entry ||
            dense_cost(n, kappa, bytes_per_entry).per_rank_bytes() > node_bytes) {
            break;
        }
        best = n;
    }
    return best;
}

namespace detail {

inline void check_dense_qubits(int n) {
    if (n < 1 || n > kMaxDenseQubits) {
        throw CapacityError("dense unitary supports 1 <= n <= " + std::to_string(kMaxDenseQubits));
    }
}

/// factors[q] acts on qubit q; qubit 0 is the fastest-varying index bit, so
/// the chain is factors[n-1] (x) ... (x) factors[0].
template <typename Scalar>
DenseMatrix<Scalar> kron_chain(const std::vector<Gate2x2<Scalar>> &factors) {
    DenseMatrix<Scalar> acc = factors.back();
    for (int q = static_cast<int>(factors.size()) - 2; q >= 0; --q) {
        DenseMatrix<Scalar> next = Eigen::kroneckerProduct(acc, factors[q]).eval();
        acc = std::move(next);
    }
    return acc;
}

template <typename Scalar>
void multiply_rows(const DenseMatrix<Scalar> &u, const AmplitudeVector<Scalar> &in,
                   AmplitudeVector<Scalar> &out, Eigen::Index row_begin, Eigen::Index row_end) {
    const Eigen::Index cols = u.cols();
    for (Eigen::Index r = row_begin; r < row_end; ++r) {
        std::complex<Scalar> acc(0);
        for (Eigen::Index c = 0; c < cols; ++c) {
            acc += u(r, c) * in(c);
        }
        out(r) = acc;
    }
}

} // namespace detail

/// I (x) ... (x) g (x) ... (x) I with g on qubit i.
template <typename Scalar>
[[nodiscard]] DenseUnitary<Scalar> embed_single(const Gate2x2<Scalar> &g, int i, int n) {
    detail::check_dense_qubits(n);
    if (i < 0 || i >= n) {
        throw RangeError("qubit index out of range");
    }
    std::vector<Gate2x2<Scalar>> factors(static_cast<std::size_t>(n), Gate2x2<Scalar>::Identity());
    factors[static_cast<std::size_t>(i)] = g;
    return {n, detail::kron_chain(factors)};
}

/// |0><0|_c (x) I + |1><1|_c (x) g_t.
template <typename Scalar>
[[nodiscard]] DenseUnitary<Scalar> embed_controlled(const Gate2x2<Scalar> &g, int c, int t, int n) {
    detail::check_dense_qubits(n);
    if (c < 0 || c >= n || t < 0 || t >= n) {
        throw RangeError("qubit index out of range");
    }
    if (c == t) {
        throw ValidationError("control and target must differ");
    }
    using G = Gate2x2<Scalar>;
    G p0 = G::Zero();
    G p1 = G::Zero();
    p0(0, 0) = Scalar(1);
    p1(1, 1) = Scalar(1);

    std::vector<G> idle(static_cast<std::size_t>(n), G::Identity());
    std::vector<G> fired = idle;
    idle[static_cast<std::size_t>(c)] = p0;
    fired[static_cast<std::size_t>(c)] = p1;
    fired[static_cast<std::size_t>(t)] = g;
    return {n, detail::kron_chain(idle) + detail::kron_chain(fired)};
}

template <typename Scalar>
[[nodiscard]] DenseUnitary<Scalar> embed(const GateOp<Scalar> &op, int n) {
    if (op.kind == GateKind::controlled) {
        return embed_controlled(op.gate, *op.control, op.target, n);
    }
    return embed_single(op.gate, op.target, n);
}

/// Dense product U s, summing each row in ascending column order.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> matvec(const DenseUnitary<Scalar> &u, const StateVector<Scalar> &s) {
    if (u.qubits != s.qubits()) {
        throw ValidationError("dimension mismatch between unitary and state");
    }
    AmplitudeVector<Scalar> out(u.entries.rows());
    detail::multiply_rows(u.entries, s.amps(), out, 0, u.entries.rows());
    return StateVector<Scalar>(s.qubits(), std::move(out));
}

/// The same product with rows split into 2^kappa contiguous blocks, one per
/// simulated rank, each holding its row block and a full copy of the state.
template <typename Scalar>
[[nodiscard]] std::pair<StateVector<Scalar>, MatvecCostReport>
matvec_partitioned(const DenseUnitary<Scalar> &u, const StateVector<Scalar> &s, int kappa) {
    if (u.qubits != s.qubits()) {
        throw ValidationError("dimension mismatch between unitary and state");
    }
    if (kappa < 0 || kappa > u.qubits) {
        throw RangeError("kappa must satisfy 0 <= kappa <= n");
    }
    const MatvecCostReport report = dense_cost(u.qubits, kappa, sizeof(std::complex<Scalar>));
    const auto rows = static_cast<Eigen::Index>(report.rows_per_rank);

    AmplitudeVector<Scalar> out(u.entries.rows());
    for (std::uint64_t rank = 0; rank < report.ranks; ++rank) {
        const AmplitudeVector<Scalar> replica = s.amps();
        const auto begin = static_cast<Eigen::Index>(rank) * rows;
        detail::multiply_rows(u.entries, replica, out, begin, begin + rows);
    }
    return {StateVector<Scalar>(s.qubits(), std::move(out)), report};
}

/// Apply every gate of the circuit to |0...0> by embed + matvec.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> oracle_run(const Circuit<Scalar> &circuit) {
    detail::check_dense_qubits(circuit.qubits());
    StateVector<Scalar> state = make_state<Scalar>(circuit.qubits());
    for (const auto &op : circuit.ops()) {
        state = matvec(embed(op, circuit.qubits()), state);
    }
    return state;
}

} // namespace qsvp
