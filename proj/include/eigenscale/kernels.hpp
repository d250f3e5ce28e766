#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version; both compute each output element with the same
// sequential reduction, so their results are bit-identical.

#include <cstddef>
#include <functional>

#include "eigenscale/matrix.hpp"

namespace eigenscale {

enum class Execution { serial, parallel };

namespace kernels {

namespace serial {

/// out(i, j) = scale * <rows(i), rows(j)>; symmetric, computed on the upper
/// triangle and mirrored.
Matrix gram(const Matrix& rows, double scale);

/// out(i, j) = <a.row(i), b.row(j)>.
Matrix cross_dot(const Matrix& a, const Matrix& b);

/// out(k, t) = sum_j basis(j, k) * data(j, t) for the first `count` columns of
/// `basis`.
Matrix project(const Matrix& basis, std::size_t count, const Matrix& data);

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace serial

namespace omp {

Matrix gram(const Matrix& rows, double scale);
Matrix cross_dot(const Matrix& a, const Matrix& b);
Matrix project(const Matrix& basis, std::size_t count, const Matrix& data);

/// Runs task(0..n-1) across threads. If tasks throw, the exception from the
/// lowest index is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task);

/// Number of threads the parallel kernels will use.
int max_threads();
void set_threads(int threads);

}  // namespace omp

inline Matrix gram(const Matrix& rows, double scale, Execution ex) {
  return ex == Execution::parallel ? omp::gram(rows, scale) : serial::gram(rows, scale);
}

inline Matrix cross_dot(const Matrix& a, const Matrix& b, Execution ex) {
  return ex == Execution::parallel ? omp::cross_dot(a, b) : serial::cross_dot(a, b);
}

inline Matrix project(const Matrix& basis, std::size_t count, const Matrix& data, Execution ex) {
  return ex == Execution::parallel ? omp::project(basis, count, data)
                                   : serial::project(basis, count, data);
}

inline void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task,
                           Execution ex) {
  if (ex == Execution::parallel)
    omp::for_each_index(n, task);
  else
    serial::for_each_index(n, task);
}

}  // namespace kernels
}  // namespace eigenscale
