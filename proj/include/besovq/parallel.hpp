#pragma once

#include <cstddef>
#include <functional>

namespace besovq {

/// Worker count: BESOVQ_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, count); every index writes only its own outputs,
/// so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace besovq
