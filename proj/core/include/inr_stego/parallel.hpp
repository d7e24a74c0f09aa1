#pragma once

#include <cstddef>
#include <functional>

namespace inr_stego {

/// Worker threads available to kernels: hardware concurrency, capped by the
/// INR_STEGO_THREADS environment variable when it is set to a positive integer.
/// Read on every call so tests can change it between runs.
std::size_t worker_count();

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on
/// each, one chunk per worker. Callers must make every output element depend
/// on a single chunk so results are independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 1);

}  // namespace inr_stego
