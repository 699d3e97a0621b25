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

// Counter-based random numbers (Philox4x32-10). A draw is a pure function of
// (key, counter), so any value can be recomputed without replaying a stream.

#include <array>
#include <cstdint>

namespace mpal {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block through the active kernel table.
PhiloxCounter philox4x32_10(const PhiloxCounter& ctr, const PhiloxKey& key);

/// Uniform double in [0, 1) built from 53 bits of two 32-bit words.
inline double unit_double(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi >> 5) << 26) | (lo >> 6);
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Uniform double in (0, 1], safe as a logarithm argument.
inline double unit_double_open0(std::uint32_t hi, std::uint32_t lo) { return 1.0 - unit_double(hi, lo); }

}  // namespace mpal
