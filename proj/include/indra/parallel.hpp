#pragma once

#include <cstddef>
#include <functional>

namespace indra {

// Worker count used by parallel_for. 0 restores the default
// (INDRA_THREADS env var if set, else hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(begin, end) over a static partition of [0, n). Chunks are disjoint,
// so callers writing only to indices they own get results independent of the
// worker count.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

template <class F>
void parallel_for(std::size_t n, F&& fn) {
  parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace indra
