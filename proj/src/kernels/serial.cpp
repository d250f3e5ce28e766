#include <cassert>

#include "eigenscale/kernels.hpp"

namespace eigenscale::kernels::serial {

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

}  // namespace

Matrix gram(const Matrix& rows, double scale) {
  const std::size_t n = rows.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
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
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

Matrix project(const Matrix& basis, std::size_t count, const Matrix& data) {
  assert(basis.rows() == data.rows() && count <= basis.cols());
  Matrix out(count, data.cols());
  for (std::size_t k = 0; k < count; ++k) {
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
  for (std::size_t i = 0; i < n; ++i) task(i);
}

}  // namespace eigenscale::kernels::serial
