// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic block-parallel execution.  Work is split into fixed-size
// blocks independent of the worker count and each block writes only its own
// outputs, so results are bit-identical for any number of threads.
#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace polyshape {

inline constexpr int kParallelBlock = 256;

template <typename Fn>
void parallel_blocks(int total, int threads, Fn&& fn) {
  const int nblocks = (total + kParallelBlock - 1) / kParallelBlock;
  auto run_block = [&](int b) {
    const int lo = b * kParallelBlock;
    const int hi = std::min(total, lo + kParallelBlock);
    fn(lo, hi);
  };
  if (threads <= 1 || nblocks <= 1) {
    for (int b = 0; b < nblocks; ++b) run_block(b);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (int b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
        if (failed.load(std::memory_order_relaxed)) return;
        run_block(b);
      }
    } catch (...) {
      if (!failed.exchange(true)) err = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min(threads, nblocks);
  pool.reserve(nw);
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace polyshape
