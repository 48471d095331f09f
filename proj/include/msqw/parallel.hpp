#pragma once

#include <cstddef>
#include <functional>

namespace msqw {

/// MSQW_BENCH_THREADS if set and positive, otherwise hardware concurrency.
int default_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out by an atomic counter; callers write results by index so output
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace msqw
