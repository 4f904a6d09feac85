#include "polariton/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polariton {

std::string to_string(Execution execution) {
  return execution == Execution::Serial ? "serial" : "parallel";
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace polariton
