#pragma once

namespace gdsr::parallel {

/// Worker count from GDSR_THREADS, falling back to the number of logical cores.
/// Throws InvalidArgument when the variable is set but not a positive integer.
int threads_from_environment();

/// Sets the OpenMP team size used by every kernel and restricts parallelism to a
/// single active level, so a parallel outer loop runs its kernels serially.
void set_threads(int count);

int threads();

}  // namespace gdsr::parallel
