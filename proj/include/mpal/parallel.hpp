// Copyright 2026 The mpal Authors
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

// Deterministic fan-out over realisation indices. Workers pull indices from
// a shared counter; results land in a slot per index, so the merged output
// never depends on the thread count or the scheduling.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "mpal/errors.hpp"

namespace mpal {

template <class Fn>
auto map_realizations(std::uint64_t count, int threads, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::uint64_t>;
  // optional<> keeps each slot a distinct object (vector<bool> packs bits).
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = static_cast<std::uint64_t>(std::max(1, threads));
  if (n == 1 || count < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t t = 0; t < std::min(n, count); ++t) pool.emplace_back(worker);
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw RealizationError(std::string("realization ") + std::to_string(i) + ": " + e.what(), i);
    }
  }
  std::vector<Result> results;
  results.reserve(count);
  for (auto& s : slots) results.push_back(std::move(*s));
  return results;
}

}  // namespace mpal
