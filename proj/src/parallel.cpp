#include "gdsr/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "gdsr/error.hpp"

namespace gdsr::parallel {

int threads_from_environment() {
  const char* env = std::getenv("GDSR_THREADS");
  if (env == nullptr || *env == '\0') return omp_get_num_procs();
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(env, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(env).size() || value <= 0)
    throw InvalidArgument(std::string("GDSR_THREADS must be a positive integer, got '") + env + "'");
  return value;
}

void set_threads(int count) {
  if (count <= 0) throw InvalidArgument("thread count must be positive");
  omp_set_num_threads(count);
  omp_set_max_active_levels(1);
}

int threads() { return omp_get_max_threads(); }

}  // namespace gdsr::parallel
