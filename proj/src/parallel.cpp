#include "ringburst/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <mutex>
#include <string>

namespace ringburst {

int configure_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (const char* env = std::getenv("RINGBURST_THREADS")) {
      try {
        const int n = std::stoi(env);
        if (n > 0) omp_set_num_threads(n);
      } catch (const std::exception&) {
        // ignore malformed values; OpenMP defaults apply
      }
    }
  });
  return omp_get_max_threads();
}

}  // namespace ringburst
