#ifndef QONN_THREADING_HPP
#define QONN_THREADING_HPP

#include <cstddef>
#include <functional>

namespace qonn {

// Process-wide worker count. Resolution order: explicit set_thread_count,
// QONNSIM_THREADS environment variable, hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Static-partition parallel map over [0, n). Each index is processed exactly
// once and writes only to its own slot, so results do not depend on the
// worker count; any reduction done afterwards in index order is bit-stable.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace qonn

#endif
