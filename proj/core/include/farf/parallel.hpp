#pragma once

#include <cstddef>
#include <functional>

namespace farf {

/// Worker count: FARF_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n) across thread_count() workers. Work is split
/// into contiguous static blocks; the first exception thrown is rethrown.
/// Callers keep results independent of scheduling by writing to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace farf
