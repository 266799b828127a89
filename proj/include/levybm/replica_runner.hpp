#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levybm {

// Runs fn(replica_index) for every index in [0, n). Each call must write only
// to its own replica's slot in caller-owned storage; under that discipline
// the parallel sweep is bitwise-identical to the serial one, because every
// replica's randomness is keyed by its index, not by thread scheduling.
//
// workers: 1 forces the serial reference loop; 0 or negative means "all
// hardware threads"; any other value caps the team size. Without OpenMP the
// loop is always serial.
template <class F>
void run_replicas(std::size_t n, int workers, F&& fn) {
#ifdef _OPENMP
  if (workers != 1 && n > 1) {
    const int team = workers <= 0 ? omp_get_max_threads() : workers;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(team)
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)workers;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace levybm
