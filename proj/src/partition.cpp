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

#include "qsvp/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <unordered_map>

namespace qsvp {

namespace {

constexpr int kMaxPlanQubits = 62;

void check_qubit(const PartitionPlan &plan, int i) {
    if (i < 0 || i >= plan.qubits()) {
        throw RangeError("qubit index " + std::to_string(i) + " out of range");
    }
}

void check_comm_qubit(const PartitionPlan &plan, int i) {
    check_qubit(plan, i);
    if (!needs_comm(plan, i)) {
        throw ContractError("qubit " + std::to_string(i) + " does not require communication");
    }
}

Index partner_by_rule(const PartitionPlan &plan, Index rank, int i, PartnerRule rule) {
    const Index first = plan.first_global(rank);
    if (rule == PartnerRule::global_xor) {
        return plan.owner(first ^ pow2(i));
    }
    const Index total = pow2(plan.qubits());
    return plan.owner((first + pow2(i)) % total);
}

RankMatching to_matching(int i, const std::unordered_map<Index, Index> &pair_of) {
    RankMatching m;
    m.qubit = i;
    for (const auto &[rank, partner] : pair_of) {
        if (rank < partner) {
            m.pairs.push_back({rank, partner});
        }
    }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

} // namespace

PartitionPlan::PartitionPlan(int qubits, int rank_bits) : qubits_(qubits), rank_bits_(rank_bits) {
    if (qubits < 1 || qubits > kMaxPlanQubits) {
        throw CapacityError("qubit count out of range");
    }
    if (rank_bits < 0 || rank_bits > qubits - 1) {
        throw ValidationError("rank bits k must satisfy 0 <= k <= n - 1");
    }
}

int rank_bits_for(std::uint64_t ranks) {
    if (ranks == 0 || (ranks & (ranks - 1)) != 0) {
        throw ValidationError("rank count must be a power of two");
    }
    int k = 0;
    while ((std::uint64_t{1} << k) < ranks) {
        ++k;
    }
    return k;
}

bool needs_comm(const PartitionPlan &plan, int i) {
    check_qubit(plan, i);
    return i >= plan.local_bits();
}

Index comm_partner(const PartitionPlan &plan, Index rank, int i) {
    check_comm_qubit(plan, i);
    if (rank >= plan.ranks()) {
        throw RangeError("rank out of range");
    }
    return partner_by_rule(plan, rank, i, PartnerRule::global_xor);
}

Index RankMatching::partner_of(Index rank) const {
    for (const auto &p : pairs) {
        if (p.lo == rank) return p.hi;
        if (p.hi == rank) return p.lo;
    }
    throw RangeError("rank " + std::to_string(rank) + " not in matching");
}

bool RankMatching::is_perfect(Index ranks) const {
    std::vector<int> seen(ranks, 0);
    for (const auto &p : pairs) {
        if (p.lo == p.hi || p.lo >= ranks || p.hi >= ranks) {
            return false;
        }
        ++seen[p.lo];
        ++seen[p.hi];
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

RankMatching comm_pairs(const PartitionPlan &plan, int i) {
    std::vector<Index> order(plan.ranks());
    std::iota(order.begin(), order.end(), Index{0});
    return comm_pairs_walk(plan, i, order, PartnerRule::global_xor);
}

RankMatching comm_pairs_walk(const PartitionPlan &plan, int i, std::span<const Index> visit_order,
                             PartnerRule rule) {
    check_comm_qubit(plan, i);
    std::vector<Index> pending(visit_order.begin(), visit_order.end());
    std::unordered_map<Index, Index> pair_of;
    while (!pending.empty()) {
        const Index rank = pending.front();
        const Index partner = partner_by_rule(plan, rank, i, rule);
        pair_of[rank] = partner;
        pair_of[partner] = rank;
        std::erase_if(pending, [&](Index r) { return r == rank || r == partner; });
    }
    return to_matching(i, pair_of);
}

RankMatching comm_pairs_closed_form(const PartitionPlan &plan, int i) {
    check_comm_qubit(plan, i);
    const Index flip = pow2(i - plan.local_bits());
    RankMatching m;
    m.qubit = i;
    for (Index r = 0; r < plan.ranks(); ++r) {
        if ((r & flip) == 0) {
            m.pairs.push_back({r, r ^ flip});
        }
    }
    return m;
}

std::optional<Rational> comm_ratio(const PartitionPlan &plan) {
    const std::int64_t k = plan.rank_bits();
    if (k == 0) {
        return std::nullopt;
    }
    const std::int64_t num = plan.qubits() - k;
    const std::int64_t g = std::gcd(num, k);
    return Rational{num / g, k / g};
}

std::string format_ratio(const Rational &r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r.value());
    return buf;
}

CommScheme CommScheme::parse(std::string_view text) {
    if (text == "a" || text == "A") {
        return a();
    }
    if (text == "b" || text == "B") {
        return b();
    }
    constexpr std::string_view prefix = "chunked:";
    if (text.starts_with(prefix)) {
        const std::string_view digits = text.substr(prefix.size());
        Index m = 0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
        if (ec != std::errc{} || end != digits.data() + digits.size() || m == 0) {
            throw ParseError("invalid chunk size in '" + std::string(text) + "'");
        }
        return chunked(m);
    }
    throw ParseError("unknown scheme '" + std::string(text) + "' (expected a, b or chunked:<m>)");
}

std::string CommScheme::name() const {
    switch (kind) {
    case Kind::scheme_a:
        return "a";
    case Kind::scheme_b:
        return "b";
    case Kind::chunked:
        return "chunked:" + std::to_string(chunk);
    }
    return "?";
}

Index CommScheme::buffer_amplitudes(const PartitionPlan &plan) const {
    switch (kind) {
    case Kind::scheme_a:
        return plan.local_len() / 2;
    case Kind::scheme_b:
        return 1;
    case Kind::chunked:
        return chunk;
    }
    return 0;
}

void CommScheme::validate(const PartitionPlan &plan) const {
    if (kind == Kind::chunked && (chunk < 1 || chunk > plan.local_len())) {
        throw ValidationError("chunk size " + std::to_string(chunk) + " outside [1, " +
                              std::to_string(plan.local_len()) + "]");
    }
}

namespace {

std::uint64_t buffer_bytes(const PartitionPlan &plan, const std::optional<CommScheme> &scheme,
                           std::uint64_t bpa) {
    return scheme ? scheme->buffer_amplitudes(plan) * bpa : 0;
}

} // namespace

int max_qubits_for(int rank_bits, const std::optional<CommScheme> &scheme,
                   std::uint64_t bytes_per_amplitude, std::uint64_t node_bytes) {
    int best = 0;
    // Keep 2^(n-k) * bpa well inside 64 bits.
    for (int n = rank_bits + 1; n - rank_bits <= 56 && n <= kMaxPlanQubits; ++n) {
        const PartitionPlan plan(n, rank_bits);
        const std::uint64_t need = plan.local_len() * bytes_per_amplitude +
                                   buffer_bytes(plan, scheme, bytes_per_amplitude);
        if (need > node_bytes) {
            break;
        }
        best = n;
    }
    return best;
}

MemEstimate mem_estimate(const PartitionPlan &plan, const std::optional<CommScheme> &scheme,
                         std::uint64_t bytes_per_amplitude, std::uint64_t node_bytes) {
    if (bytes_per_amplitude != 8 && bytes_per_amplitude != 16) {
        throw ValidationError("bytes per amplitude must be 8 or 16");
    }
    if (plan.local_bits() > 56) {
        throw CapacityError("per-rank state too large to account in 64-bit bytes");
    }
    MemEstimate e;
    e.bytes_per_amplitude = bytes_per_amplitude;
    e.per_rank_state_bytes = plan.local_len() * bytes_per_amplitude;
    e.per_rank_buffer_bytes = buffer_bytes(plan, scheme, bytes_per_amplitude);
    e.per_rank_total_bytes = e.per_rank_state_bytes + e.per_rank_buffer_bytes;
    e.total_bytes = plan.ranks() * e.per_rank_total_bytes;
    e.max_qubits = max_qubits_for(plan.rank_bits(), scheme, bytes_per_amplitude, node_bytes);
    return e;
}

} // namespace qsvp
