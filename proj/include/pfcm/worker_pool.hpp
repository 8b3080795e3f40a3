// Copyright 2026 The pfcm Authors.
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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace pfcm {

struct TaskFailure {
  std::size_t index;
  std::exception_ptr error;
};

/// Runs task(i) for every i in [0, count) on up to `workers` threads, each
/// pulling the next index from a shared counter. After the first failure or
/// once `cancel` is set, no new indices are started. Returns the failure with
/// the lowest index, if any.
template <class Task>
std::optional<TaskFailure> parallel_for(std::size_t count, std::size_t workers, Task&& task,
                                        const std::atomic<bool>* cancel = nullptr) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::optional<TaskFailure> first;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed) &&
           !(cancel && cancel->load(std::memory_order_relaxed))) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first || i < first->index) first = TaskFailure{i, std::current_exception()};
        failed.store(true);
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return first;
}

}  // namespace pfcm
