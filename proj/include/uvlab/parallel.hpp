#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace uvlab {

/// Environment variable holding the worker count.
inline constexpr const char* kWorkersEnv = "UVLAB_WORKERS";

/// Worker count from UVLAB_WORKERS, else hardware concurrency (at least 1).
int worker_count();

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of stream `index` under `master`. Streams are a pure function of
/// (master, index), so sampling is independent of how work is scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Runs body(i) for i in [0, n) on `workers` threads. Exceptions are
/// rethrown on the caller's thread (the one from the lowest index wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace uvlab
