// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace curlvar {

/// Worker count: CURLVAR_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs body(k) for k in [0, n) on up to thread_count() threads. Work is
/// split into contiguous blocks, so results written by index are independent
/// of the thread count. The exception thrown for the smallest k is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace curlvar
