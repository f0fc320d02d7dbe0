#pragma once

#include "crjet/series.hpp"

// The truncated-multiply kernel, the one data-parallel inner loop of the
// exact engine. `multiply` dispatches between the serial reference kernel and
// an OpenMP-parallel kernel; the two must agree coefficient for coefficient,
// which the kernel tests check on random inputs.

namespace crjet::kernels {

// Product truncated at total degree `limit` (coefficients exact, no rounding).
Series serial_multiply(const Series& a, const Series& b, int limit);

// Same contract as serial_multiply; splits the left factor across threads and
// merges the partial term maps. Falls back to the serial kernel for small
// inputs or when OpenMP is unavailable.
Series parallel_multiply(const Series& a, const Series& b, int limit);

Series multiply(const Series& a, const Series& b, int limit);

// Process-wide switch used by tests and the benchmark harness.
void set_parallel_enabled(bool enabled);
bool parallel_enabled();

int max_threads();

}  // namespace crjet::kernels
