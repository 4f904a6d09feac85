#pragma once

#include <cstddef>
#include <string>

namespace polariton {

enum class Execution { Serial, Parallel };

std::string to_string(Execution execution);

// Index-space map. Serial is the reference path; Parallel fans indices out
// over OpenMP threads. Callers write results into per-index slots so the
// output never depends on scheduling.
template <class Fn>
void for_each_index(std::size_t count, Execution execution, Fn&& fn) {
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

int max_threads();

}  // namespace polariton
