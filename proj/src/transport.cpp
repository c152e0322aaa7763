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

#include "qsvp/transport.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace qsvp {

InMemoryTransport::InMemoryTransport(Index ranks, bool record_log)
    : ranks_(ranks), record_log_(record_log) {
    if (ranks == 0 || ranks > 4096) {
        throw ValidationError("in-memory transport supports 1 to 4096 ranks");
    }
    channels_.resize(ranks * ranks);
    messages_.assign(ranks, 0);
    bytes_.assign(ranks, 0);
}

void InMemoryTransport::check_rank(Index r) const {
    if (r >= ranks_) {
        throw RangeError("rank " + std::to_string(r) + " out of range");
    }
}

std::size_t InMemoryTransport::channel(Index from, Index to) const {
    check_rank(from);
    check_rank(to);
    return from * ranks_ + to;
}

void InMemoryTransport::send(Index from, Index to, Payload payload) {
    const std::size_t ch = channel(from, to);
    {
        std::lock_guard lock(mutex_);
        ++messages_[from];
        bytes_[from] += payload.size();
        if (record_log_) {
            log_.push_back({from, to, payload.size()});
        }
        channels_[ch].push_back(std::move(payload));
    }
    arrived_.notify_all();
}

Payload InMemoryTransport::receive(Index to, Index from) {
    const std::size_t ch = channel(from, to);
    std::unique_lock lock(mutex_);
    arrived_.wait(lock, [&] { return !channels_[ch].empty(); });
    Payload p = std::move(channels_[ch].front());
    channels_[ch].pop_front();
    return p;
}

std::optional<Payload> InMemoryTransport::try_receive(Index to, Index from) {
    const std::size_t ch = channel(from, to);
    std::lock_guard lock(mutex_);
    if (channels_[ch].empty()) {
        return std::nullopt;
    }
    Payload p = std::move(channels_[ch].front());
    channels_[ch].pop_front();
    return p;
}

bool InMemoryTransport::has_message(Index to, Index from) const {
    const std::size_t ch = channel(from, to);
    std::lock_guard lock(mutex_);
    return !channels_[ch].empty();
}

std::uint64_t InMemoryTransport::messages_sent(Index rank) const {
    check_rank(rank);
    std::lock_guard lock(mutex_);
    return messages_[rank];
}

std::uint64_t InMemoryTransport::bytes_sent(Index rank) const {
    check_rank(rank);
    std::lock_guard lock(mutex_);
    return bytes_[rank];
}

std::uint64_t InMemoryTransport::total_messages() const {
    std::lock_guard lock(mutex_);
    return std::accumulate(messages_.begin(), messages_.end(), std::uint64_t{0});
}

std::uint64_t InMemoryTransport::total_bytes() const {
    std::lock_guard lock(mutex_);
    return std::accumulate(bytes_.begin(), bytes_.end(), std::uint64_t{0});
}

std::size_t InMemoryTransport::in_flight() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto &ch : channels_) {
        n += ch.size();
    }
    return n;
}

std::vector<MessageRecord> InMemoryTransport::log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

void InMemoryTransport::clear_log() {
    std::lock_guard lock(mutex_);
    log_.clear();
}

void InMemoryTransport::set_recording(bool on) {
    std::lock_guard lock(mutex_);
    record_log_ = on;
}

} // namespace qsvp
