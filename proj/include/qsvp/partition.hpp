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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsvp/core.hpp"

namespace qsvp {

/// n-qubit state split over 2^k ranks; rank r owns the contiguous global
/// indices [r 2^(n-k), (r+1) 2^(n-k)).
class PartitionPlan {
  public:
    PartitionPlan(int qubits, int rank_bits);

    [[nodiscard]] int qubits() const noexcept { return qubits_; }
    [[nodiscard]] int rank_bits() const noexcept { return rank_bits_; }
    [[nodiscard]] int local_bits() const noexcept { return qubits_ - rank_bits_; }
    [[nodiscard]] Index ranks() const noexcept { return pow2(rank_bits_); }
    [[nodiscard]] Index local_len() const noexcept { return pow2(local_bits()); }

    [[nodiscard]] Index first_global(Index rank) const noexcept { return rank << local_bits(); }
    [[nodiscard]] Index owner(Index global) const noexcept { return global >> local_bits(); }

    friend bool operator==(const PartitionPlan &, const PartitionPlan &) = default;

  private:
    int qubits_;
    int rank_bits_;
};

/// Rank count -> k. Throws unless ranks is a power of two.
[[nodiscard]] int rank_bits_for(std::uint64_t ranks);

/// True iff a gate on qubit i pairs amplitudes held by different ranks.
[[nodiscard]] bool needs_comm(const PartitionPlan &plan, int i);

/// Rank holding the partners of `rank`'s amplitudes for a gate on qubit i.
[[nodiscard]] Index comm_partner(const PartitionPlan &plan, Index rank, int i);

struct RankPair {
    Index lo = 0;
    Index hi = 0;

    friend bool operator==(const RankPair &, const RankPair &) = default;
    friend auto operator<=>(const RankPair &, const RankPair &) = default;
};

/// Communication pairs for one qubit, sorted by lower rank.
struct RankMatching {
    int qubit = 0;
    std::vector<RankPair> pairs;

    [[nodiscard]] Index partner_of(Index rank) const;
    [[nodiscard]] bool is_perfect(Index ranks) const;

    friend bool operator==(const RankMatching &, const RankMatching &) = default;
};

/// Partner rules for the pairing walk. `global_xor` flips bit i of the
/// rank's first global index; `forward_stride` adds 2^i to it (wrapping),
/// which only agrees with the XOR rule when the walk visits ranks in
/// increasing order.
enum class PartnerRule { global_xor, forward_stride };

/**
 * Pair up all ranks for a gate on communication qubit i: walk the ranks in
 * increasing order, look up the partner of each rank still pending, record
 * both directions in a hash map and drop the two from the pending list.
 */
[[nodiscard]] RankMatching comm_pairs(const PartitionPlan &plan, int i);

/// The same walk with an explicit visit order and partner rule. Exposed to
/// demonstrate that the walk depends on starting at rank 0.
[[nodiscard]] RankMatching comm_pairs_walk(const PartitionPlan &plan, int i,
                                           std::span<const Index> visit_order, PartnerRule rule);

/// {r, r xor 2^(i-(n-k))} for every r.
[[nodiscard]] RankMatching comm_pairs_closed_form(const PartitionPlan &plan, int i);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational &, const Rational &) = default;
};

/// (n-k)/k in lowest terms; nullopt for a single rank (no communication).
[[nodiscard]] std::optional<Rational> comm_ratio(const PartitionPlan &plan);

/// Two-decimal rendering, e.g. "9.00".
[[nodiscard]] std::string format_ratio(const Rational &r);

/// Protocol used for gates on communication qubits.
struct CommScheme {
    enum class Kind { scheme_a, scheme_b, chunked };

    Kind kind = Kind::scheme_b;
    Index chunk = 1;

    [[nodiscard]] static CommScheme a() { return {Kind::scheme_a, 0}; }
    [[nodiscard]] static CommScheme b() { return {Kind::scheme_b, 1}; }
    [[nodiscard]] static CommScheme chunked(Index m) { return {Kind::chunked, m}; }

    /// "a", "b" or "chunked:<m>".
    [[nodiscard]] static CommScheme parse(std::string_view text);
    [[nodiscard]] std::string name() const;

    /// Scratch amplitudes a rank needs to run this scheme under `plan`.
    [[nodiscard]] Index buffer_amplitudes(const PartitionPlan &plan) const;

    /// Throws ValidationError if the chunk size does not fit the plan.
    void validate(const PartitionPlan &plan) const;

    friend bool operator==(const CommScheme &, const CommScheme &) = default;
};

struct MemEstimate {
    std::uint64_t bytes_per_amplitude = 16;
    std::uint64_t per_rank_state_bytes = 0;
    std::uint64_t per_rank_buffer_bytes = 0;
    std::uint64_t per_rank_total_bytes = 0;
    std::uint64_t total_bytes = 0;
    /// Largest n whose per-rank state plus buffer fits into node_bytes at
    /// the same k; 0 if none fits.
    int max_qubits = 0;
};

/// Memory footprint of a plan; `scheme` nullopt means no communication buffer.
[[nodiscard]] MemEstimate mem_estimate(const PartitionPlan &plan,
                                       const std::optional<CommScheme> &scheme,
                                       std::uint64_t bytes_per_amplitude,
                                       std::uint64_t node_bytes);

[[nodiscard]] int max_qubits_for(int rank_bits, const std::optional<CommScheme> &scheme,
                                 std::uint64_t bytes_per_amplitude, std::uint64_t node_bytes);

} // namespace qsvp
