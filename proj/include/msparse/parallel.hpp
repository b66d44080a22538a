#pragma once

#include <cstddef>
#include <functional>

namespace msparse {

/// Worker count used by internal loops. Defaults to MORREY_SPARSE_THREADS
/// when set, otherwise 1.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). Each index is handled exactly once;
/// callers write results into per-index slots so output never depends on
/// scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace msparse
