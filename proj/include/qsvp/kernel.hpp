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

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

#include "qsvp/core.hpp"

namespace qsvp {

/// Loop-parallelization choice for the pair-update kernel.
struct ExecStrategy {
    enum class Mode { sequential, parallel_outer, parallel_inner, parallel_collapsed };

    Mode mode = Mode::sequential;
    int worker_count = 1;

    [[nodiscard]] static ExecStrategy sequential() { return {}; }

    [[nodiscard]] bool is_sequential() const noexcept {
        return mode == Mode::sequential || worker_count <= 1;
    }
};

[[nodiscard]] inline ExecStrategy::Mode parse_exec_mode(std::string_view name) {
    using M = ExecStrategy::Mode;
    if (name == "sequential") return M::sequential;
    if (name == "outer") return M::parallel_outer;
    if (name == "inner") return M::parallel_inner;
    if (name == "collapsed") return M::parallel_collapsed;
    throw ParseError("unknown execution strategy '" + std::string(name) + "'");
}

/// (q11 a0 + q12 a1, q21 a0 + q22 a1).
template <typename Scalar>
[[nodiscard]] inline std::pair<std::complex<Scalar>, std::complex<Scalar>>
update_pair(std::complex<Scalar> a0, std::complex<Scalar> a1, const Gate2x2<Scalar> &g) noexcept {
    return {g(0, 0) * a0 + g(0, 1) * a1, g(1, 0) * a0 + g(1, 1) * a1};
}

namespace detail {

inline void check_kernel_args(std::size_t len, int bit) {
    if (len < 2 || (len & (len - 1)) != 0) {
        throw ValidationError("amplitude array length must be a power of two >= 2");
    }
    if (bit < 0 || bit >= 63 || (pow2(bit) << 1) > len) {
        throw RangeError("qubit index " + std::to_string(bit) + " out of range");
    }
}

// Visits every pair base j (bit `bit` of j is 0) exactly once: the outer
// loop walks blocks of 2^(bit+1) amplitudes, the inner loop the 2^bit bases
// in a block. Visits never overlap, so every mode gives identical results.
template <typename Visit>
void for_each_pair(std::size_t len, int bit, const ExecStrategy &strat, Visit &&visit) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(bit));
    const std::int64_t blocks = static_cast<std::int64_t>(len) / (2 * half);
    const int workers = strat.worker_count;

    if (strat.is_sequential()) {
        for (std::int64_t b = 0; b < blocks; ++b) {
            for (std::int64_t r = 0; r < half; ++r) {
                visit(static_cast<Index>(b * 2 * half + r));
            }
        }
        return;
    }

    switch (strat.mode) {
    case ExecStrategy::Mode::parallel_outer:
#pragma omp parallel for num_threads(workers) schedule(static)
        for (std::int64_t b = 0; b < blocks; ++b) {
            for (std::int64_t r = 0; r < half; ++r) {
                visit(static_cast<Index>(b * 2 * half + r));
            }
        }
        break;
    case ExecStrategy::Mode::parallel_inner:
        for (std::int64_t b = 0; b < blocks; ++b) {
#pragma omp parallel for num_threads(workers) schedule(static)
            for (std::int64_t r = 0; r < half; ++r) {
                visit(static_cast<Index>(b * 2 * half + r));
            }
        }
        break;
    case ExecStrategy::Mode::parallel_collapsed:
#pragma omp parallel for collapse(2) num_threads(workers) schedule(static)
        for (std::int64_t b = 0; b < blocks; ++b) {
            for (std::int64_t r = 0; r < half; ++r) {
                visit(static_cast<Index>(b * 2 * half + r));
            }
        }
        break;
    case ExecStrategy::Mode::sequential:
        break;
    }
}

} // namespace detail

/// Apply g to qubit `bit` of a contiguous amplitude array in place.
template <typename Scalar>
void apply_single(std::span<std::complex<Scalar>> amps, const Gate2x2<Scalar> &g, int bit,
                  const ExecStrategy &strat = {}) {
    detail::check_kernel_args(amps.size(), bit);
    const Index stride = pow2(bit);
    std::complex<Scalar> *data = amps.data();
    detail::for_each_pair(amps.size(), bit, strat, [&](Index j) {
        const auto [lo, hi] = update_pair(data[j], data[j + stride], g);
        data[j] = lo;
        data[j + stride] = hi;
    });
}

/// As apply_single, restricted to indices whose `control` bit is 1.
template <typename Scalar>
void apply_controlled(std::span<std::complex<Scalar>> amps, const Gate2x2<Scalar> &g, int control,
                      int target, const ExecStrategy &strat = {}) {
    detail::check_kernel_args(amps.size(), target);
    detail::check_kernel_args(amps.size(), control);
    if (control == target) {
        throw ValidationError("control and target must differ");
    }
    const Index stride = pow2(target);
    std::complex<Scalar> *data = amps.data();
    detail::for_each_pair(amps.size(), target, strat, [&](Index j) {
        if (!bit_set(j, control)) {
            return;
        }
        const auto [lo, hi] = update_pair(data[j], data[j + stride], g);
        data[j] = lo;
        data[j + stride] = hi;
    });
}

template <typename Scalar>
void apply_single(StateVector<Scalar> &s, const Gate2x2<Scalar> &g, int i,
                  const ExecStrategy &strat = {}) {
    if (i < 0 || i >= s.qubits()) {
        throw RangeError("qubit index " + std::to_string(i) + " out of range");
    }
    apply_single(s.span(), g, i, strat);
}

template <typename Scalar>
void apply_controlled(StateVector<Scalar> &s, const Gate2x2<Scalar> &g, int c, int t,
                      const ExecStrategy &strat = {}) {
    if (c < 0 || c >= s.qubits() || t < 0 || t >= s.qubits()) {
        throw RangeError("qubit index out of range");
    }
    apply_controlled(s.span(), g, c, t, strat);
}

template <typename Scalar>
void apply(StateVector<Scalar> &s, const GateOp<Scalar> &op, const ExecStrategy &strat = {}) {
    if (op.kind == GateKind::controlled) {
        apply_controlled(s, op.gate, *op.control, op.target, strat);
    } else {
        apply_single(s, op.gate, op.target, strat);
    }
}

/// Single-node simulation of a whole circuit with the stride kernel.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> kernel_run(const Circuit<Scalar> &circuit,
                                             const ExecStrategy &strat = {}) {
    StateVector<Scalar> state = make_state<Scalar>(circuit.qubits());
    for (const auto &op : circuit.ops()) {
        apply(state, op, strat);
    }
    return state;
}

} // namespace qsvp
