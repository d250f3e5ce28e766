#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenscale/ingest.hpp"
#include "eigenscale/kernels.hpp"
#include "eigenscale/matrix.hpp"

namespace eigenscale {

/// Symmetric matrix of Pearson correlations with unit diagonal.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;

  /// Validates symmetry (1e-14), unit diagonal and range [-1, 1].
  /// Throws Error(data) otherwise.
  static CorrelationMatrix from_matrix(Matrix m);

  std::size_t size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

 private:
  explicit CorrelationMatrix(Matrix m) : m_(std::move(m)) {}
  friend CorrelationMatrix correlation_matrix(const ReturnPanel&, Execution);

  Matrix m_;
};

/// Rows shifted to zero mean and scaled to unit sample variance (divisor L-1).
/// Throws Error(data) naming the ticker of any zero-variance row.
Matrix standardize_rows(const ReturnPanel& panel);

CorrelationMatrix correlation_matrix(const ReturnPanel& panel,
                                     Execution ex = Execution::serial);

struct EigenSystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]

  std::size_t size() const noexcept { return values.size(); }
  std::vector<double> vector(std::size_t i) const { return vectors.column(i); }
};

struct JacobiOptions {
  double relative_tolerance = 1e-12;  // off-diagonal Frobenius norm vs ||C||_F
  int max_sweeps = 100;
};

/// Full symmetric eigendecomposition by cyclic Jacobi with threshold sweeps.
/// Eigenvalues are sorted descending; exact ties keep the original diagonal
/// order. Sign convention from fix_signs is applied.
/// Throws Error(numerical) if the sweep cap is hit.
EigenSystem eigh(const CorrelationMatrix& c, const JacobiOptions& options = {});

/// Same solver on any symmetric matrix.
EigenSystem eigh_symmetric(const Matrix& a, const JacobiOptions& options = {});

/// Flips each column so its component sum is >= 0. When the sum is zero
/// within 1e-12 the first nonzero component is made positive instead.
Matrix fix_signs(Matrix vectors);

void write_matrix_csv(const std::string& path, const Matrix& m);
nlohmann::json matrix_to_json(const Matrix& m);

}  // namespace eigenscale
