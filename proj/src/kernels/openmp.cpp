#include <cassert>
#include <exception>
#include <vector>

#include <omp.h>

#include "eigenscale/kernels.hpp"

namespace eigenscale::kernels::omp {

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

}  // namespace

Matrix gram(const Matrix& rows, double scale) {
  const auto n = static_cast<std::ptrdiff_t>(rows.rows());
  Matrix out(rows.rows(), rows.rows());
  // Row i costs n - i dot products; dynamic scheduling balances the triangle.
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i; j < n; ++j) {
      const double v = scale * dot(rows.row(i), rows.row(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix cross_dot(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.cols());
  Matrix out(a.rows(), b.rows());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

Matrix project(const Matrix& basis, std::size_t count, const Matrix& data) {
  assert(basis.rows() == data.rows() && count <= basis.cols());
  Matrix out(count, data.cols());
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    auto dst = out.row(k);
    for (std::size_t j = 0; j < data.rows(); ++j) {
      const double w = basis(j, k);
      auto src = data.row(j);
      for (std::size_t t = 0; t < dst.size(); ++t) dst[t] += w * src[t];
    }
  }
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      task(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace eigenscale::kernels::omp
