#ifndef SARTENSOR_PARALLEL_HPP
#define SARTENSOR_PARALLEL_HPP

namespace sartensor {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference path that computes bit-identical results; tests compare the two
/// and the bench target times them.
enum class Exec {
    Serial,
    Parallel,
};

/// Number of worker threads a kernel would use under the given policy.
int exec_threads(Exec exec);

/// Caps the global OpenMP thread count (CLI --threads).
void set_thread_count(int n);

} // namespace sartensor

#endif
