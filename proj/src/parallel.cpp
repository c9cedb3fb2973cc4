#include "mlebound/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlebound {

namespace {
int default_workers() {
#ifdef _OPENMP
  static const int workers = omp_get_max_threads();
  return workers;
#else
  return 1;
#endif
}
}  // namespace

int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_worker_count(int workers) {
  const int resolved = workers > 0 ? workers : default_workers();
#ifdef _OPENMP
  omp_set_num_threads(resolved);
#else
  (void)resolved;
#endif
}

double ordered_sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

WorkerScope::WorkerScope(int workers) : previous_(worker_count()) {
  default_workers();
  set_worker_count(workers);
}

WorkerScope::~WorkerScope() { set_worker_count(previous_); }

}  // namespace mlebound
