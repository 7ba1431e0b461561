#pragma once

#include <cstddef>
#include <functional>

namespace smallscat {

// Number of workers used by internally parallel operations (operator
// application). Initialized from the SMALLSCAT_THREADS environment variable
// when set, otherwise from the hardware concurrency. Always >= 1.
std::size_t worker_count();

// Overrides the worker count for the current process. Values < 1 clamp to 1.
void set_worker_count(std::size_t n);

// Splits [begin, end) into one contiguous block per worker and runs
// body(block_begin, block_end) on each. Results must depend only on which
// indices a call owns, never on the block layout, so any worker count
// produces identical output.
void parallel_for_blocks(
    std::size_t begin, std::size_t end,
    const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace smallscat
