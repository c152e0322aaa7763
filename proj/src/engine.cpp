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

#include "qsvp/engine.hpp"

#include <numeric>
#include <thread>

namespace qsvp::detail {

namespace {

std::vector<std::size_t> visit_order(std::span<const RankChannel> channels, std::span<const Index> order) {
    std::vector<std::size_t> positions(channels.size());
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    if (order.empty()) {
        return positions;
    }
    auto rank_pos = [&](Index rank) {
        const auto it = std::find(order.begin(), order.end(), rank);
        if (it == order.end()) {
            throw ValidationError("schedule is missing rank " + std::to_string(rank));
        }
        return it - order.begin();
    };
    std::stable_sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
        return rank_pos(channels[a].rank) < rank_pos(channels[b].rank);
    });
    return positions;
}

void run_cooperative(std::span<RankTask> tasks, std::span<RankChannel> channels, std::span<const Index> order) {
    const std::vector<std::size_t> visit = visit_order(channels, order);
    std::size_t remaining = tasks.size();
    while (remaining > 0) {
        bool progressed = false;
        for (const std::size_t t : visit) {
            RankTask &task = tasks[t];
            if (task.done()) {
                continue;
            }
            RankChannel &ch = channels[t];
            if (ch.awaiting && !ch.transport->has_message(ch.rank, *ch.awaiting)) {
                continue;
            }
            task.resume();
            progressed = true;
            if (task.done()) {
                task.rethrow_if_failed();
                --remaining;
            }
        }
        if (!progressed) {
            throw ContractError("rank programs deadlocked: every rank waits on an empty channel");
        }
    }
}

void run_threaded(std::span<RankTask> tasks, std::span<RankChannel> channels) {
    for (auto &ch : channels) {
        ch.blocking = true;
    }
    {
        std::vector<std::jthread> workers;
        workers.reserve(tasks.size());
        for (auto &task : tasks) {
            workers.emplace_back([&task] { task.resume(); });
        }
    }
    for (auto &task : tasks) {
        task.rethrow_if_failed();
    }
}

} // namespace

void run_rank_tasks(std::span<RankTask> tasks, std::span<RankChannel> channels, RankExecution execution,
                    std::span<const Index> order) {
    if (tasks.size() != channels.size()) {
        throw ValidationError("one channel per rank task required");
    }
    if (tasks.empty()) {
        return;
    }
    if (execution == RankExecution::threaded && tasks.size() > 1) {
        run_threaded(tasks, channels);
    } else {
        run_cooperative(tasks, channels, order);
    }
}

} // namespace qsvp::detail
