#pragma once

#include <cstddef>
#include <functional>

namespace bhlab {

// Worker count used by parallel_for_chunks.  Defaults to the BHLAB_THREADS
// environment variable when set, otherwise hardware concurrency.
int worker_count();
void set_worker_count(int n);

// Runs body(chunk_index, begin, end) over [0, n) split into a fixed number of
// chunks.  The chunk layout depends only on n -- never on the worker count --
// so reductions that merge per-chunk partials in chunk order are bit-for-bit
// reproducible regardless of threading.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// Number of chunks parallel_for_chunks will use for a loop of length n.
std::size_t chunk_count(std::size_t n);

}  // namespace bhlab
