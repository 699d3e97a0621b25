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

#include "mpal/rng.hpp"

#include "mpal/kernels.hpp"

namespace mpal {

PhiloxCounter philox4x32_10(const PhiloxCounter& ctr, const PhiloxKey& key) {
  PhiloxCounter out{};
  kernels::PhiloxBatch batch{{&ctr[0], &ctr[1], &ctr[2], &ctr[3]}, {&out[0], &out[1], &out[2], &out[3]}, 1};
  kernels::active().philox4x32_10(batch, key[0], key[1]);
  return out;
}

}  // namespace mpal
