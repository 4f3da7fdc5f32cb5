#include "normeq/cayley.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "normeq/spectral.hpp"

namespace normeq {

namespace {

constexpr Complex kImagUnit{0.0, 1.0};

// X = A^{-1} B by column-pivoted elimination with iterative refinement to
// 1e-12 relative residual.
Matrix refined_solve(const Matrix& a, const Matrix& b) {
  Eigen::PartialPivLU<Matrix> lu(a);
  Matrix x = lu.solve(b);
  const double scale = std::max(1.0, b.norm());
  for (int pass = 0; pass < 3; ++pass) {
    const Matrix residual = b - a * x;
    if (residual.norm() <= 1e-12 * scale) break;
    x += lu.solve(residual);
  }
  return x;
}

void require_hermitian(const Matrix& t, const ToleranceConfig& cfg, const char* name) {
  if (t.rows() != t.cols()) {
    fail(ErrorKind::non_square, std::string(name) + " must be square");
  }
  const double defect = operator_norm(t - t.adjoint());
  const double gate = cfg.normality_tol * scale_of(t);
  if (defect > gate) {
    std::ostringstream msg;
    msg << name << " is not Hermitian: |T - T*| = " << defect << " exceeds " << gate;
    fail(ErrorKind::not_hermitian, msg.str());
  }
}

double mobius_match_defect(const std::vector<Complex>& mapped,
                           const std::vector<Complex>& actual) {
  // Greedy nearest pairing in the lexicographic order of the mapped values.
  std::vector<bool> taken(actual.size(), false);
  double worst = 0.0;
  for (const Complex& m : mapped) {
    long best = -1;
    double best_dist = 0.0;
    for (std::size_t j = 0; j < actual.size(); ++j) {
      if (taken[j]) continue;
      const double dist = std::abs(m - actual[j]);
      if (best < 0 || dist < best_dist) {
        best = static_cast<long>(j);
        best_dist = dist;
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

}  // namespace

CayleyPair cayley(const Matrix& t, const ToleranceConfig& cfg) {
  cfg.validate();
  require_hermitian(t, cfg, "T");

  const Matrix id = Matrix::Identity(t.rows(), t.rows());
  CayleyPair pair;
  pair.t = t;
  pair.v = refined_solve(t + kImagUnit * id, t - kImagUnit * id);
  pair.unitarity_defect = operator_norm(pair.v.adjoint() * pair.v - id);

  const EigenSystem t_eig = eig_normal(t, cfg);
  const EigenSystem v_eig = eig_normal(pair.v, cfg);
  std::vector<Complex> mapped;
  mapped.reserve(t_eig.values.size());
  for (const Complex& lambda : t_eig.values) {
    mapped.push_back((lambda - kImagUnit) / (lambda + kImagUnit));
  }
  pair.spectral_map_defect = mobius_match_defect(mapped, v_eig.values);
  return pair;
}

Matrix inverse_cayley(const Matrix& v, const ToleranceConfig& cfg) {
  cfg.validate();
  if (v.rows() != v.cols()) fail(ErrorKind::non_square, "V must be square");
  const Matrix id = Matrix::Identity(v.rows(), v.rows());
  const double unitarity = operator_norm(v.adjoint() * v - id);
  const double gate = cfg.residual_tol * scale_of(v);
  if (unitarity > gate) {
    std::ostringstream msg;
    msg << "V is not unitary: |V*V - I| = " << unitarity << " exceeds " << gate;
    fail(ErrorKind::not_unitary, msg.str());
  }

  const EigenSystem v_eig = eig_normal(v, cfg);
  for (const Complex& mu : v_eig.values) {
    if (std::abs(mu - 1.0) <= cfg.cluster_tol) {
      std::ostringstream msg;
      msg << "eigenvalue " << mu.real() << (mu.imag() < 0 ? "-" : "+")
          << std::abs(mu.imag()) << "i lies within " << cfg.cluster_tol
          << " of 1; the preimage is unbounded";
      fail(ErrorKind::spectrum_contains_one, msg.str());
    }
  }

  return kImagUnit * refined_solve(id - v, id + v);
}

TransferReport intertwining_transfer_check(const Matrix& t1, const Matrix& t2,
                                           const Matrix& u1,
                                           const ToleranceConfig& cfg) {
  cfg.validate();
  require_hermitian(t1, cfg, "T1");
  require_hermitian(t2, cfg, "T2");
  if (u1.cols() != t1.rows() || u1.rows() != t2.rows()) {
    fail(ErrorKind::shape_mismatch, "U1 does not map the space of T1 into the space of T2");
  }

  const double s = scale_of({&t1, &t2, &u1});
  TransferReport report;
  report.isometry_defect =
      operator_norm(u1.adjoint() * u1 - Matrix::Identity(u1.cols(), u1.cols()));
  report.intertwining_defect = operator_norm(u1 * t1 - t2 * u1);
  if (report.intertwining_defect > cfg.residual_tol * s) {
    std::ostringstream msg;
    msg << "U1 does not intertwine T1 and T2: defect " << report.intertwining_defect
        << " exceeds " << cfg.residual_tol * s;
    fail(ErrorKind::not_intertwining, msg.str());
  }

  const Matrix id1 = Matrix::Identity(t1.rows(), t1.rows());
  const Matrix id2 = Matrix::Identity(t2.rows(), t2.rows());
  const Matrix resolvent1 = refined_solve(t1 + kImagUnit * id1, id1);
  const Matrix resolvent2 = refined_solve(t2 + kImagUnit * id2, id2);
  const Matrix v1 = (t1 - kImagUnit * id1) * resolvent1;
  const Matrix v2 = (t2 - kImagUnit * id2) * resolvent2;

  report.resolvent_step_defect = operator_norm(u1 * resolvent1 - resolvent2 * u1);
  report.final_residual = operator_norm(u1 * v1 - v2 * u1);
  report.predicted_multiplier = operator_norm(id2 - v2) * operator_norm(resolvent1);
  return report;
}

}  // namespace normeq
