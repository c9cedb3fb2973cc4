#pragma once

#include <cstddef>
#include <span>

namespace mlebound {

// Every parallel kernel partitions its work into chunks of a fixed size and
// combines chunk partials in chunk order, so results do not depend on the
// number of OpenMP workers.
inline constexpr std::size_t kIndexChunk = 1u << 14;
inline constexpr std::size_t kReplicateChunk = 256;

int worker_count();

// workers <= 0 restores the OpenMP runtime default.
void set_worker_count(int workers);

// Left-to-right sum. Used to fold chunk partials.
double ordered_sum(std::span<const double> values);

inline std::size_t chunk_count(std::size_t items, std::size_t chunk) {
  return (items + chunk - 1) / chunk;
}

// Scoped worker override, mostly for tests and the benchmark.
class WorkerScope {
 public:
  explicit WorkerScope(int workers);
  ~WorkerScope();
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  int previous_;
};

}  // namespace mlebound
