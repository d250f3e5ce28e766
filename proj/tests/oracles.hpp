#pragma once

// Test-only reference computations, independent of the library's numerical
// paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "eigenscale/matrix.hpp"

namespace oracle {

/// Eigenvalues of a small symmetric matrix as the roots of its
/// characteristic polynomial: Faddeev-LeVerrier coefficients and
/// Durand-Kerner for all roots at once, then a Newton polish of each root on
/// det(A - xI) evaluated by LU. All in long double. Descending.
inline std::vector<double> char_poly_eigenvalues(const eigenscale::Matrix& a) {
  using ld = long double;
  const std::size_t n = a.rows();
  std::vector<std::vector<ld>> mk(n, std::vector<ld>(n, 0.0L)), am(n, std::vector<ld>(n));
  // coeff[k] multiplies x^(n-k); coeff[0] = 1
  std::vector<ld> coeff(n + 1, 0.0L);
  coeff[0] = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ld s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += static_cast<ld>(a(i, l)) * mk[l][j];
        am[i][j] = s + (i == j ? coeff[k - 1] : 0.0L);
      }
    mk = am;
    ld trace = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += static_cast<ld>(a(i, l)) * mk[l][i];
    coeff[k] = -trace / static_cast<ld>(k);
  }

  auto eval = [&](std::complex<ld> x) {
    std::complex<ld> v = coeff[0];
    for (std::size_t k = 1; k <= n; ++k) v = v * x + coeff[k];
    return v;
  };
  ld radius = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, 1.0L + std::abs(coeff[k]));
  std::vector<std::complex<ld>> z(n);
  const std::complex<ld> seed(0.4L, 0.9L);
  z[0] = seed;
  for (std::size_t i = 1; i < n; ++i) z[i] = z[i - 1] * seed;
  for (auto& zi : z) zi *= radius / 2.0L;
  for (int iter = 0; iter < 5000; ++iter) {
    ld change = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<ld> denom = 1.0L;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      const auto step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15L * radius) break;
  }

  // Polish on det(A - xI) itself, which is far better conditioned than the
  // expanded coefficients: d/dx log det(A - xI) = -tr((A - xI)^-1), so the
  // Newton step is x += 1 / tr((A - xI)^-1).
  auto inverse_trace = [&](ld x, bool& singular) {
    std::vector<std::vector<ld>> m(n, std::vector<ld>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = static_cast<ld>(a(i, j)) - (i == j ? x : 0.0L);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    singular = false;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      std::swap(m[c], m[piv]);
      std::swap(perm[c], perm[piv]);
      if (m[c][c] == 0.0L) {
        singular = true;
        return 0.0L;
      }
      for (std::size_t r = c + 1; r < n; ++r) {
        m[r][c] /= m[c][c];
        for (std::size_t k = c + 1; k < n; ++k) m[r][k] -= m[r][c] * m[c][k];
      }
    }
    // trace of the inverse: solve for each unit column
    ld trace = 0.0L;
    for (std::size_t col = 0; col < n; ++col) {
      std::vector<ld> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        ld v = perm[i] == col ? 1.0L : 0.0L;
        for (std::size_t k = 0; k < i; ++k) v -= m[i][k] * y[k];
        y[i] = v;
      }
      for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) y[i] -= m[i][k] * y[k];
        y[i] /= m[i][i];
      }
      trace += y[col];
    }
    return trace;
  };

  std::vector<double> roots;
  for (auto zi : z) {
    ld x = zi.real();
    for (int it = 0; it < 50; ++it) {
      bool singular = false;
      const ld tr = inverse_trace(x, singular);
      if (singular || tr == 0.0L) break;
      const ld step = 1.0L / tr;
      if (std::abs(step) > 1e-6L) break;  // left the basin of this root
      x += step;
      if (std::abs(step) < 1e-20L * std::max(1.0L, std::abs(x))) break;
    }
    roots.push_back(static_cast<double>(x));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

/// Pearson correlation from raw sums (single pass, long double).
inline double pearson_sums(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

/// Brute-force row-major matrix product a * b^T.
inline eigenscale::Matrix multiply_transpose(const eigenscale::Matrix& a, const eigenscale::Matrix& b) {
  eigenscale::Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(j, k);
      out(i, j) = static_cast<double>(s);
    }
  return out;
}

}  // namespace oracle
