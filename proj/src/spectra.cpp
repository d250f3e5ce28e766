#include "eigenscale/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"
#include "numeric.hpp"

namespace eigenscale {

CorrelationMatrix CorrelationMatrix::from_matrix(Matrix m) {
  if (m.rows() != m.cols()) throw data_error("correlation matrix must be square");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 1.0) throw data_error(fmt::format("diagonal entry {} is not 1", i));
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(std::abs(v) <= 1.0))
        throw data_error(fmt::format("entry ({}, {}) = {} outside [-1, 1]", i, j, v));
      if (std::abs(v - m(j, i)) > 1e-14)
        throw data_error(fmt::format("matrix not symmetric at ({}, {})", i, j));
    }
  }
  return CorrelationMatrix(std::move(m));
}

Matrix standardize_rows(const ReturnPanel& panel) {
  const std::size_t len = panel.length();
  if (len < 2) throw data_error("standardization needs at least two observations");
  Matrix z(panel.stocks(), len);
  for (std::size_t j = 0; j < panel.stocks(); ++j) {
    auto x = panel.returns.row(j);
    const double m = detail::mean(x);
    const double ss = detail::centered_ss(x, m);
    if (detail::zero_variance(x, ss))
      throw data_error(fmt::format("stock '{}' has zero variance", panel.tickers.at(j)));
    const double inv_sd = 1.0 / std::sqrt(ss / static_cast<double>(len - 1));
    auto out = z.row(j);
    for (std::size_t t = 0; t < len; ++t) out[t] = (x[t] - m) * inv_sd;
  }
  return z;
}

CorrelationMatrix correlation_matrix(const ReturnPanel& panel, Execution ex) {
  const Matrix z = standardize_rows(panel);
  Matrix c = kernels::gram(z, 1.0 / static_cast<double>(panel.length() - 1), ex);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = std::clamp(c(i, j), -1.0, 1.0);
    c(i, i) = 1.0;
  }
  return CorrelationMatrix(std::move(c));
}

namespace {

double off_diagonal_norm(const Matrix& a, double* abs_sum) {
  double ss = 0.0, sa = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p) {
    auto row = a.row(p);
    for (std::size_t q = p + 1; q < a.cols(); ++q) {
      ss += row[q] * row[q];
      sa += std::abs(row[q]);
    }
  }
  *abs_sum = sa;
  return std::sqrt(2.0 * ss);
}

struct Rotation {
  std::size_t p, q;
  double s, tau;
  double app, aqq;  // rotated diagonal entries
};

inline void rotate_pair(double& x, double& y, double s, double tau) {
  const double a = x;
  const double b = y;
  x = a - s * (b + tau * a);
  y = b + s * (a - tau * b);
}

// Round-robin pairing: every sweep visits each (p, q) exactly once in n' - 1
// rounds of disjoint pairs, n' = n rounded up to even. Slot n' - 1 is fixed,
// the others rotate; a pair touching index n (odd n) is a bye.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> tournament(std::size_t n) {
  const std::size_t m = n + (n % 2);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds(m - 1);
  for (std::size_t r = 0; r + 1 < m; ++r) {
    auto slot = [&](std::size_t i) { return i == m - 1 ? m - 1 : (i + r) % (m - 1); };
    for (std::size_t i = 0; i < m / 2; ++i) {
      std::size_t p = slot(i);
      std::size_t q = slot(m - 1 - i);
      if (p >= n || q >= n) continue;
      if (p > q) std::swap(p, q);
      rounds[r].emplace_back(p, q);
    }
  }
  return rounds;
}

// Applies a set of disjoint rotations: A <- J^T A J and Vt <- J^T Vt, where
// `vt` holds eigenvectors as rows. Both passes run along rows.
void apply_round(Matrix& a, Matrix& vt, const std::vector<Rotation>& rots) {
  const std::size_t n = a.rows();
  for (const auto& r : rots) {
    double* rp = a.row(r.p).data();
    double* rq = a.row(r.q).data();
    for (std::size_t k = 0; k < n; ++k) rotate_pair(rp[k], rq[k], r.s, r.tau);
    double* vp = vt.row(r.p).data();
    double* vq = vt.row(r.q).data();
    for (std::size_t k = 0; k < n; ++k) rotate_pair(vp[k], vq[k], r.s, r.tau);
  }
  for (std::size_t k = 0; k < n; ++k) {
    double* row = a.row(k).data();
    for (const auto& r : rots) rotate_pair(row[r.p], row[r.q], r.s, r.tau);
  }
  for (const auto& r : rots) {
    a(r.p, r.p) = r.app;
    a(r.q, r.q) = r.aqq;
    a(r.p, r.q) = 0.0;
    a(r.q, r.p) = 0.0;
  }
}

}  // namespace

EigenSystem eigh_symmetric(const Matrix& input, const JacobiOptions& options) {
  if (input.rows() != input.cols()) throw config_error("eigh needs a square matrix");
  const std::size_t n = input.rows();
  EigenSystem out;
  if (n == 0) return out;

  Matrix a = input;
  Matrix vt = Matrix::identity(n);
  double frobenius = 0.0;
  for (double v : a.data()) frobenius += v * v;
  frobenius = std::sqrt(frobenius);
  const double tolerance = options.relative_tolerance * frobenius;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  const auto rounds = tournament(n);
  std::vector<Rotation> rots;
  rots.reserve(n / 2);
  bool converged = false;
  double residual = 0.0;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    double abs_sum = 0.0;
    residual = off_diagonal_norm(a, &abs_sum);
    if (residual <= tolerance) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    // Early sweeps only rotate the large elements.
    const double threshold = sweep < 3 ? 0.2 * abs_sum / static_cast<double>(n * n) : 0.0;
    for (const auto& pairs : rounds) {
      rots.clear();
      for (const auto& [p, q] : pairs) {
        const double apq = a(p, q);
        if (apq == 0.0 || std::abs(apq) <= threshold) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (sweep > 3 && 100.0 * std::abs(apq) < eps * std::abs(app) &&
            100.0 * std::abs(apq) < eps * std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        rots.push_back({p, q, sn, sn / (1.0 + c), app - t * apq, aqq + t * apq});
      }
      if (!rots.empty()) apply_round(a, vt, rots);
    }
  }
  if (!converged)
    throw numerical_error(fmt::format(
        "Jacobi eigensolver did not converge after {} sweeps (off-diagonal norm {:.3e}, "
        "target {:.3e})",
        options.max_sweeps, residual, tolerance));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    auto v = vt.row(order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v[i];
  }
  out.vectors = fix_signs(std::move(out.vectors));
  return out;
}

EigenSystem eigh(const CorrelationMatrix& c, const JacobiOptions& options) {
  return eigh_symmetric(c.matrix(), options);
}

Matrix fix_signs(Matrix vectors) {
  constexpr double tie = 1e-12;
  for (std::size_t k = 0; k < vectors.cols(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < vectors.rows(); ++i) sum += vectors(i, k);
    bool flip = false;
    if (std::abs(sum) <= tie) {
      for (std::size_t i = 0; i < vectors.rows(); ++i) {
        if (std::abs(vectors(i, k)) > tie) {
          flip = vectors(i, k) < 0.0;
          break;
        }
      }
    } else {
      flip = sum < 0.0;
    }
    if (flip)
      for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, k) = -vectors(i, k);
  }
  return vectors;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::string text;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += csv::number(m(i, j));
    }
    text += '\n';
  }
  csv::write_file(path, text);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

}  // namespace eigenscale
