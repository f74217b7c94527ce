#pragma once

#include <cstddef>
#include <functional>

namespace maxlln {

/// Worker count: `requested` if positive, else MAXLLN_THREADS if set, else
/// the hardware concurrency.
[[nodiscard]] std::size_t resolve_workers(std::size_t requested = 0);

/// Runs body(i) for i in [0, count) on `workers` threads. Work is assigned by
/// index, so any reduction done by the caller in index order is independent
/// of the worker count. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace maxlln
