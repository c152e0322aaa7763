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

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "qsvp/core.hpp"

namespace qsvp {

using Payload = std::vector<std::byte>;

/**
 * Point-to-point message layer between ranks.
 *
 * Each ordered (sender, receiver) channel is FIFO, reliable and unbounded:
 * send never blocks, receive blocks until a message from that sender is
 * available.
 */
class Transport {
  public:
    virtual ~Transport() = default;

    [[nodiscard]] virtual Index ranks() const = 0;

    virtual void send(Index from, Index to, Payload payload) = 0;

    /// Blocks until a message from `from` to `to` is available.
    [[nodiscard]] virtual Payload receive(Index to, Index from) = 0;

    [[nodiscard]] virtual std::optional<Payload> try_receive(Index to, Index from) = 0;

    [[nodiscard]] virtual bool has_message(Index to, Index from) const = 0;
};

struct MessageRecord {
    Index sender = 0;
    Index receiver = 0;
    std::size_t bytes = 0;

    friend bool operator==(const MessageRecord &, const MessageRecord &) = default;
};

/// Transport between ranks living in one process. Counts messages and bytes
/// per sender and can keep a full (sender, receiver, length) log.
class InMemoryTransport final : public Transport {
  public:
    explicit InMemoryTransport(Index ranks, bool record_log = true);

    [[nodiscard]] Index ranks() const override { return ranks_; }

    void send(Index from, Index to, Payload payload) override;
    [[nodiscard]] Payload receive(Index to, Index from) override;
    [[nodiscard]] std::optional<Payload> try_receive(Index to, Index from) override;
    [[nodiscard]] bool has_message(Index to, Index from) const override;

    [[nodiscard]] std::uint64_t messages_sent(Index rank) const;
    [[nodiscard]] std::uint64_t bytes_sent(Index rank) const;
    [[nodiscard]] std::uint64_t total_messages() const;
    [[nodiscard]] std::uint64_t total_bytes() const;

    /// Messages sent but not yet received.
    [[nodiscard]] std::size_t in_flight() const;

    [[nodiscard]] std::vector<MessageRecord> log() const;
    void clear_log();
    void set_recording(bool on);

  private:
    [[nodiscard]] std::size_t channel(Index from, Index to) const;
    void check_rank(Index r) const;

    Index ranks_;
    bool record_log_;
    mutable std::mutex mutex_;
    std::condition_variable arrived_;
    std::vector<std::deque<Payload>> channels_;
    std::vector<std::uint64_t> messages_;
    std::vector<std::uint64_t> bytes_;
    std::vector<MessageRecord> log_;
};

} // namespace qsvp
