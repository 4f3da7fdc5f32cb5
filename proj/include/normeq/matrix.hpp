#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "normeq/errors.hpp"

namespace normeq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerances are relative bases; each operation applies the power of
// scale = max(1, operator norm of the largest input) its residual needs.
struct ToleranceConfig {
  double normality_tol = 1e-10;
  double cluster_tol = 1e-8;
  double residual_tol = 1e-8;

  // Throws invalid_argument on negative entries or cluster_tol <= normality_tol.
  void validate() const;
};

bool all_finite(const Matrix& a);
void require_finite(const Matrix& a, const char* what);

Matrix adjoint(const Matrix& a);

// Largest singular value.
double operator_norm(const Matrix& a);

// max(1, |a|) for relative-error control.
double scale_of(const Matrix& a);
double scale_of(std::initializer_list<const Matrix*> as);

// |AA* - A*A|; throws non_square.
double normality_defect(const Matrix& a);

bool is_normal(const Matrix& a, const ToleranceConfig& cfg = {});

struct EigenSystem {
  std::vector<Complex> values;  // sorted lexicographically by (re, im)
  Matrix basis;                 // orthonormal columns, basis.col(k) <-> values[k]
};

// Spectral decomposition of a normal matrix via commuting Hermitian parts:
// diagonalize (A+A*)/2, then (A-A*)/2i restricted to each eigenvalue group.
// Deterministic: column phases fixed, values in lexicographic order.
// Throws not_normal (with the commutator defect) if is_normal fails.
EigenSystem eig_normal(const Matrix& a, const ToleranceConfig& cfg = {});

// Rotate each column so its first entry of magnitude > 1e-6 is real positive.
void fix_column_phases(Matrix& m);

// Orthonormal basis of the column span, by column-pivoted Gram-Schmidt with
// the same phase convention as eig_normal. Columns whose residual falls
// below drop_tol * scale are dropped.
Matrix orthonormalize_columns(const Matrix& a, double drop_tol = 1e-12);

}  // namespace normeq
