#include "normeq/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace normeq {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::non_square: return "non-square";
    case ErrorKind::not_normal: return "not-normal";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::not_orthonormal: return "not-orthonormal";
    case ErrorKind::not_hermitian: return "not-hermitian";
    case ErrorKind::not_unitary: return "not-unitary";
    case ErrorKind::spectrum_contains_one: return "spectrum-contains-one";
    case ErrorKind::not_intertwining: return "not-intertwining";
    case ErrorKind::not_a_substructure: return "not-a-substructure";
    case ErrorKind::cluster_ambiguity: return "cluster-ambiguity";
    case ErrorKind::guard_tripped: return "guard-tripped";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::shape_error: return "shape-error";
    case ErrorKind::non_finite: return "non-finite";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

void ToleranceConfig::validate() const {
  if (!(normality_tol >= 0.0) || !(cluster_tol >= 0.0) || !(residual_tol >= 0.0)) {
    fail(ErrorKind::invalid_argument, "tolerances must be nonnegative");
  }
  if (!(cluster_tol > normality_tol)) {
    fail(ErrorKind::invalid_argument,
         "cluster_tol must be strictly greater than normality_tol");
  }
}

bool all_finite(const Matrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex& z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

void require_finite(const Matrix& a, const char* what) {
  if (!all_finite(a)) {
    fail(ErrorKind::non_finite, std::string(what) + " contains a non-finite entry");
  }
}

Matrix adjoint(const Matrix& a) { return a.adjoint(); }

double operator_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double scale_of(const Matrix& a) { return std::max(1.0, operator_norm(a)); }

double scale_of(std::initializer_list<const Matrix*> as) {
  double s = 1.0;
  for (const Matrix* a : as) s = std::max(s, operator_norm(*a));
  return s;
}

double normality_defect(const Matrix& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << "normality is defined for square matrices only, got " << a.rows()
        << "x" << a.cols();
    fail(ErrorKind::non_square, msg.str());
  }
  return operator_norm(a * a.adjoint() - a.adjoint() * a);
}

bool is_normal(const Matrix& a, const ToleranceConfig& cfg) {
  cfg.validate();
  const double s = scale_of(a);
  return normality_defect(a) <= cfg.normality_tol * s * s;
}

void fix_column_phases(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double mag = std::abs(m(i, j));
      if (mag > 1e-6) {
        m.col(j) *= std::conj(m(i, j)) / mag;
        break;
      }
    }
  }
}

namespace {

// Consecutive grouping of ascending real values at the given radius
// (single linkage on a line). Returns [begin, end) index pairs.
std::vector<std::pair<Eigen::Index, Eigen::Index>> group_ascending(
    const Eigen::VectorXd& v, double radius) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v(i) - v(i - 1) > radius) {
      groups.emplace_back(begin, i);
      begin = i;
    }
  }
  return groups;
}

}  // namespace

EigenSystem eig_normal(const Matrix& a, const ToleranceConfig& cfg) {
  cfg.validate();
  const double s = scale_of(a);
  const double defect = normality_defect(a);
  if (defect > cfg.normality_tol * s * s) {
    std::ostringstream msg;
    msg << "matrix is not normal: commutator defect " << defect
        << " exceeds " << cfg.normality_tol * s * s;
    fail(ErrorKind::not_normal, msg.str());
  }

  const Eigen::Index n = a.rows();
  const Matrix re_part = (a + a.adjoint()) / 2.0;
  const Matrix im_part = (a - a.adjoint()) / Complex(0.0, 2.0);

  Eigen::SelfAdjointEigenSolver<Matrix> re_solver(re_part);
  Matrix basis = re_solver.eigenvectors();

  // Eigenvalues of the real part that agree within the grouping radius are
  // treated as one eigenspace; the imaginary part is diagonalized on each.
  // The radius must absorb solver roundoff on exactly degenerate spectra yet
  // stay below the reconstruction tolerance.
  const double group_radius = std::max(1e-12, cfg.normality_tol) * s;
  const auto groups = group_ascending(re_solver.eigenvalues(), group_radius);

  for (const auto& [begin, end] : groups) {
    const Eigen::Index width = end - begin;
    if (width < 2) continue;
    Matrix block = basis.middleCols(begin, width);
    Matrix compressed = block.adjoint() * im_part * block;
    compressed = (compressed + compressed.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> im_solver(compressed);
    basis.middleCols(begin, width) = block * im_solver.eigenvectors();
  }

  fix_column_phases(basis);

  std::vector<Complex> values(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    values[static_cast<std::size_t>(k)] = basis.col(k).dot(a * basis.col(k));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const Complex& vx = values[static_cast<std::size_t>(x)];
    const Complex& vy = values[static_cast<std::size_t>(y)];
    if (vx.real() != vy.real()) return vx.real() < vy.real();
    return vx.imag() < vy.imag();
  });

  EigenSystem out;
  out.values.resize(static_cast<std::size_t>(n));
  out.basis.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = values[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    out.basis.col(k) = basis.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix orthonormalize_columns(const Matrix& a, double drop_tol) {
  const Eigen::Index rows = a.rows();
  Matrix work = a;
  std::vector<Eigen::Index> kept;
  std::vector<bool> used(static_cast<std::size_t>(work.cols()), false);
  const double threshold = drop_tol * std::max(1.0, a.colwise().norm().maxCoeff());

  for (Eigen::Index step = 0; step < work.cols(); ++step) {
    // Pivot on the column with the largest remaining norm; ties take the
    // lowest index so the result is deterministic.
    Eigen::Index pivot = -1;
    double best = threshold;
    for (Eigen::Index j = 0; j < work.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double norm = work.col(j).norm();
      if (norm > best) {
        best = norm;
        pivot = j;
      }
    }
    if (pivot < 0) break;
    used[static_cast<std::size_t>(pivot)] = true;
    Vector q = work.col(pivot) / work.col(pivot).norm();
    kept.push_back(pivot);
    work.col(pivot) = q;
    for (Eigen::Index j = 0; j < work.cols(); ++j) {
      if (!used[static_cast<std::size_t>(j)]) {
        work.col(j) -= q * q.dot(work.col(j));
      }
    }
  }

  Matrix out(rows, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = work.col(kept[k]);
  }
  // Re-orthogonalize once against accumulated roundoff, preserving order.
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      out.col(j) -= out.col(i) * out.col(i).dot(out.col(j));
    }
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) /= norm;
  }
  fix_column_phases(out);
  return out;
}

}  // namespace normeq
