#pragma once

#include "mscv/common.hpp"

#include <exception>
#include <mutex>

namespace mscv {

/// Runs fn(i) for i in [0, n). With Exec::Parallel the loop is split over
/// OpenMP threads; the first exception thrown by any iteration is rethrown
/// on the calling thread.
template <class Fn>
void for_range(int n, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex m;
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace mscv
