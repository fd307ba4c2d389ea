/* Copyright 2026 The lpdebias Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LPDEBIAS_DETAIL_PARALLEL_HPP_
#define LPDEBIAS_DETAIL_PARALLEL_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace lpdebias {

template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn, std::size_t grain) {
  const std::size_t threads = std::min<std::size_t>(
      worker_threads(), std::max<std::size_t>(n / std::max<std::size_t>(grain, 1), 1));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace lpdebias

#endif  // LPDEBIAS_DETAIL_PARALLEL_HPP_
