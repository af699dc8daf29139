// Copyright 2026 The Softlimb Authors
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

#ifndef SOFTLIMB_NUMERIC_PARALLEL_FOR_HPP_
#define SOFTLIMB_NUMERIC_PARALLEL_FOR_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace softlimb::numeric {

/// Runs fn(worker_id, index) for index in [0, count). Work is split into
/// contiguous blocks, one per worker; results must be written to disjoint
/// per-index or per-worker storage so the outcome is independent of the
/// thread count.
template <class Fn>
void parallel_for(int count, int num_workers, Fn&& fn) {
  num_workers = std::max(1, std::min(num_workers, count));
  if (num_workers == 1) {
    for (int i = 0; i < count; ++i) fn(0, i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(num_workers));
  const int block = (count + num_workers - 1) / num_workers;
  for (int w = 0; w < num_workers; ++w) {
    const int lo = w * block;
    const int hi = std::min(count, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([w, lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(w, i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace softlimb::numeric

#endif  // SOFTLIMB_NUMERIC_PARALLEL_FOR_HPP_
