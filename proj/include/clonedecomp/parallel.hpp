#pragma once

#include <cstddef>
#include <functional>

namespace clonedecomp {

/// Runs fn(i) for every i in [0, n) using up to `threads` workers pulling
/// from a shared counter. Callers must write results into per-index slots so
/// the outcome does not depend on the thread count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

/// --threads fallback: CLONEDECOMP_THREADS, else 1.
unsigned default_thread_count();

}  // namespace clonedecomp
