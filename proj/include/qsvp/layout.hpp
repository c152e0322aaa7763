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

#include <cstdint>
#include <span>
#include <vector>

#include "qsvp/core.hpp"
#include "qsvp/partition.hpp"

namespace qsvp {

/**
 * Bijection between physical index bits of the stored state and logical
 * qubits. Storing logical qubit q at physical bit p gives its gates stride
 * 2^p, so placing rarely used qubits on the top k bits moves communication
 * onto them.
 */
class QubitPermutation {
  public:
    /// Throws ValidationError unless phys_to_logical is a permutation of [0, n).
    explicit QubitPermutation(std::vector<int> phys_to_logical);

    [[nodiscard]] int qubits() const noexcept { return static_cast<int>(phys_to_logical_.size()); }
    [[nodiscard]] int logical_of(int phys) const { return phys_to_logical_.at(static_cast<std::size_t>(phys)); }
    [[nodiscard]] int phys_of(int logical) const { return logical_to_phys_.at(static_cast<std::size_t>(logical)); }
    [[nodiscard]] const std::vector<int> &phys_to_logical() const noexcept { return phys_to_logical_; }
    [[nodiscard]] const std::vector<int> &logical_to_phys() const noexcept { return logical_to_phys_; }

    [[nodiscard]] QubitPermutation inverse() const { return QubitPermutation(logical_to_phys_); }
    [[nodiscard]] bool is_identity() const noexcept;

    /// Index whose bit phys_to_logical[j] equals bit j of `index`.
    [[nodiscard]] Index route(Index index) const noexcept;

    friend bool operator==(const QubitPermutation &, const QubitPermutation &) = default;

  private:
    std::vector<int> phys_to_logical_;
    std::vector<int> logical_to_phys_;
};

[[nodiscard]] QubitPermutation identity_perm(int n);

/// 2^(physical bit of logical qubit q).
[[nodiscard]] Index permuted_stride(const QubitPermutation &perm, int logical_qubit);

/// Whether a gate on logical qubit q communicates under `plan`.
[[nodiscard]] bool needs_comm(const PartitionPlan &plan, const QubitPermutation &perm, int logical_qubit);

/// Per-qubit gate counts; a controlled gate counts once for its target and
/// once for its control.
template <typename Scalar>
[[nodiscard]] std::vector<std::uint64_t> gate_histogram(const Circuit<Scalar> &circuit) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(circuit.qubits()), 0);
    for (const auto &op : circuit.ops()) {
        ++counts[static_cast<std::size_t>(op.target)];
        if (op.control) {
            ++counts[static_cast<std::size_t>(*op.control)];
        }
    }
    return counts;
}

/// Sum of counts over the logical qubits placed on communication bits.
[[nodiscard]] std::uint64_t communicated_gates(std::span<const std::uint64_t> counts,
                                               const PartitionPlan &plan,
                                               const QubitPermutation &perm);

/**
 * Static layout that puts the k least active qubits on physical bits
 * n-k .. n-1 and the rest on 0 .. n-k-1, each group in ascending qubit
 * order. Among equal counts the higher-indexed qubit takes the
 * communication slot, so a flat histogram yields the identity.
 */
[[nodiscard]] QubitPermutation optimize_layout(std::span<const std::uint64_t> counts,
                                               const PartitionPlan &plan);

/// Physical-order state: out[p] = s[perm.route(p)].
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> permute_state(const StateVector<Scalar> &s, const QubitPermutation &perm) {
    if (perm.qubits() != s.qubits()) {
        throw ValidationError("permutation and state sizes differ");
    }
    AmplitudeVector<Scalar> out(s.amps().size());
    for (Index p = 0; p < s.size(); ++p) {
        out(static_cast<Eigen::Index>(p)) = s[perm.route(p)];
    }
    return StateVector<Scalar>(s.qubits(), std::move(out));
}

} // namespace qsvp
