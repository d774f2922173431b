#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sod {

inline unsigned effective_threads(unsigned requested, std::size_t items) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned t = requested == 0 ? hw : requested;
  if (static_cast<std::size_t>(t) > items) t = static_cast<unsigned>(items);
  return t == 0 ? 1 : t;
}

// Runs fn(i) for i in [0, n). Work items must be independent; each writes its
// own pre-sized output slot, so results are identical for any thread count.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  const unsigned t = effective_threads(threads, n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += t) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sod
