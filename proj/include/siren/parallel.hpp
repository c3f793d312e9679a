#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace siren {

//! Worker cap: the last set_worker_count() value, else SIREN_THREADS, else the
//! hardware concurrency. Always >= 1.
int worker_count();
void set_worker_count(int workers);

//! Calls body(i) for i in [0, count) on up to worker_count() threads. Results
//! must be written to per-index slots; the first exception is rethrown.
//! Calls made from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace siren
