#pragma once

namespace roasel {

/// Worker count for parallel loops: ROA_SELECT_THREADS when set and positive,
/// otherwise the OpenMP default. 1 forces the serial path.
int thread_count();

}  // namespace roasel
