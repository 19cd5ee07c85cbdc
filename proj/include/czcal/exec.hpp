#pragma once

#include <cstddef>
#include <exception>

#include <omp.h>

namespace czcal {

// kSerial is the reference path; kParallel must produce bit-identical results.
enum class ExecPolicy { kSerial, kParallel };

// Runs body(i) for i in [0, n). Work items must be independent. The first
// exception thrown by any item is rethrown on the calling thread.
template <typename Body>
void for_each_index(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(czcal_for_each_index_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace czcal
