#pragma once

#include <cstddef>
#include <functional>

namespace pwave {

// Worker count from PWAVE_WORKERS, else hardware concurrency (at least 1).
int default_workers();

// Calls body(i) for i in [0, n) on up to `workers` threads. Each index runs exactly once;
// callers write results into slot i so the reduction order never depends on scheduling.
// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace pwave
