// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_PARALLEL_HPP
#define QCHAN_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qchan {

// Worker cap: min(hardware, QCHAN_THREADS). Results are always collected
// into index-addressed slots, so the outcome is independent of the cap.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("QCHAN_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

// Apply fn(i) for i in [0, count); each call must write only into its own
// slot of caller-owned storage. Exceptions are rethrown on the caller
// thread (first by task index).
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = count < 2 ? 1 : std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qchan

#endif  // QCHAN_PARALLEL_HPP
