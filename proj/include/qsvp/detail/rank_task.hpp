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

// Rank programs are C++20 coroutines. The same body runs either on its own
// thread (receives block, the coroutine never suspends) or interleaved with
// the other ranks on one thread (a receive with nothing queued suspends and
// the scheduler resumes it once a message from the awaited sender arrives).

#include <coroutine>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qsvp/transport.hpp"

namespace qsvp {

enum class RankExecution { cooperative, threaded };

namespace detail {

class RankTask {
  public:
    struct promise_type {
        std::exception_ptr error;

        RankTask get_return_object() {
            return RankTask(std::coroutine_handle<promise_type>::from_promise(*this));
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() noexcept {}
        void unhandled_exception() noexcept { error = std::current_exception(); }
    };

    RankTask() = default;
    explicit RankTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
    RankTask(RankTask &&other) noexcept : handle_(std::exchange(other.handle_, {})) {}
    RankTask &operator=(RankTask &&other) noexcept {
        if (this != &other) {
            reset();
            handle_ = std::exchange(other.handle_, {});
        }
        return *this;
    }
    RankTask(const RankTask &) = delete;
    RankTask &operator=(const RankTask &) = delete;
    ~RankTask() { reset(); }

    [[nodiscard]] bool done() const { return !handle_ || handle_.done(); }
    void resume() { handle_.resume(); }

    void rethrow_if_failed() const {
        if (handle_ && handle_.promise().error) {
            std::rethrow_exception(handle_.promise().error);
        }
    }

  private:
    void reset() {
        if (handle_) {
            handle_.destroy();
            handle_ = {};
        }
    }

    std::coroutine_handle<promise_type> handle_;
};

/// Per-rank view of the transport, plus the sender a suspended receive is
/// waiting on and the traffic this rank generated.
struct RankChannel {
    Transport *transport = nullptr;
    Index rank = 0;
    bool blocking = false;
    std::optional<Index> awaiting;
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;

    void send(Index to, Payload payload) {
        ++messages;
        bytes += payload.size();
        transport->send(rank, to, std::move(payload));
    }

    struct ReceiveAwaiter {
        RankChannel &ch;
        Index from;
        Payload out{};

        bool await_ready() {
            if (ch.blocking) {
                out = ch.transport->receive(ch.rank, from);
                return true;
            }
            if (auto p = ch.transport->try_receive(ch.rank, from)) {
                out = std::move(*p);
                return true;
            }
            return false;
        }
        void await_suspend(std::coroutine_handle<>) noexcept { ch.awaiting = from; }
        Payload await_resume() {
            if (ch.awaiting) {
                ch.awaiting.reset();
                out = ch.transport->receive(ch.rank, from);
            }
            return std::move(out);
        }
    };

    [[nodiscard]] ReceiveAwaiter receive(Index from) { return ReceiveAwaiter{*this, from}; }
};

/// Runs every task to completion. `order` lists task positions in the order
/// the cooperative scheduler visits them each sweep; empty means ascending.
void run_rank_tasks(std::span<RankTask> tasks, std::span<RankChannel> channels,
                    RankExecution execution, std::span<const Index> order);

} // namespace detail
} // namespace qsvp
