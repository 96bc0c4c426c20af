#pragma once

#include <cstddef>
#include <functional>

namespace lorentz {

/// Worker count: set_threads() if called, else LORENTZ_BG_THREADS, else hardware concurrency.
int threads();
void set_threads(int n);

/// Calls body(begin, end) on a static partition of [0, n). The partition depends
/// only on n, never on the thread count, so per-chunk reductions are reproducible.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// body(i) for every i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lorentz
