#pragma once

#include <functional>

namespace screwbif {

/// Worker count: hardware concurrency, capped by SCREWBIF_THREADS when set.
int thread_count();

/// Runs fn(0..n-1) over thread_count() workers using static chunking, so the
/// assignment of indices to workers does not depend on timing. The first
/// exception thrown by any call is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace screwbif
