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

#include "qsvp/layout.hpp"

#include <algorithm>
#include <numeric>

namespace qsvp {

QubitPermutation::QubitPermutation(std::vector<int> phys_to_logical)
    : phys_to_logical_(std::move(phys_to_logical)) {
    const int n = static_cast<int>(phys_to_logical_.size());
    if (n < 1 || n > 62) {
        throw ValidationError("permutation size out of range");
    }
    logical_to_phys_.assign(static_cast<std::size_t>(n), -1);
    for (int p = 0; p < n; ++p) {
        const int q = phys_to_logical_[static_cast<std::size_t>(p)];
        if (q < 0 || q >= n || logical_to_phys_[static_cast<std::size_t>(q)] != -1) {
            throw ValidationError("not a permutation of [0, n)");
        }
        logical_to_phys_[static_cast<std::size_t>(q)] = p;
    }
}

bool QubitPermutation::is_identity() const noexcept {
    for (std::size_t p = 0; p < phys_to_logical_.size(); ++p) {
        if (phys_to_logical_[p] != static_cast<int>(p)) {
            return false;
        }
    }
    return true;
}

Index QubitPermutation::route(Index index) const noexcept {
    Index out = 0;
    for (std::size_t p = 0; p < phys_to_logical_.size(); ++p) {
        out |= ((index >> p) & Index{1}) << phys_to_logical_[p];
    }
    return out;
}

QubitPermutation identity_perm(int n) {
    std::vector<int> ids(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(ids.begin(), ids.end(), 0);
    return QubitPermutation(std::move(ids));
}

Index permuted_stride(const QubitPermutation &perm, int logical_qubit) {
    if (logical_qubit < 0 || logical_qubit >= perm.qubits()) {
        throw RangeError("logical qubit out of range");
    }
    return pow2(perm.phys_of(logical_qubit));
}

bool needs_comm(const PartitionPlan &plan, const QubitPermutation &perm, int logical_qubit) {
    if (perm.qubits() != plan.qubits()) {
        throw ValidationError("permutation and plan sizes differ");
    }
    if (logical_qubit < 0 || logical_qubit >= perm.qubits()) {
        throw RangeError("logical qubit out of range");
    }
    return needs_comm(plan, perm.phys_of(logical_qubit));
}

std::uint64_t communicated_gates(std::span<const std::uint64_t> counts, const PartitionPlan &plan,
                                 const QubitPermutation &perm) {
    if (counts.size() != static_cast<std::size_t>(plan.qubits())) {
        throw ValidationError("histogram length must equal qubit count");
    }
    std::uint64_t total = 0;
    for (int p = plan.local_bits(); p < plan.qubits(); ++p) {
        total += counts[static_cast<std::size_t>(perm.logical_of(p))];
    }
    return total;
}

QubitPermutation optimize_layout(std::span<const std::uint64_t> counts, const PartitionPlan &plan) {
    const int n = plan.qubits();
    const int k = plan.rank_bits();
    if (counts.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("histogram length must equal qubit count");
    }
    std::vector<int> by_activity(static_cast<std::size_t>(n));
    std::iota(by_activity.begin(), by_activity.end(), 0);
    std::stable_sort(by_activity.begin(), by_activity.end(), [&](int a, int b) {
        if (counts[static_cast<std::size_t>(a)] != counts[static_cast<std::size_t>(b)]) {
            return counts[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(b)];
        }
        return a > b;
    });
    std::vector<int> comm(by_activity.begin(), by_activity.begin() + k);
    std::vector<int> local(by_activity.begin() + k, by_activity.end());
    std::sort(comm.begin(), comm.end());
    std::sort(local.begin(), local.end());

    std::vector<int> phys_to_logical;
    phys_to_logical.reserve(static_cast<std::size_t>(n));
    phys_to_logical.insert(phys_to_logical.end(), local.begin(), local.end());
    phys_to_logical.insert(phys_to_logical.end(), comm.begin(), comm.end());
    return QubitPermutation(std::move(phys_to_logical));
}

} // namespace qsvp
