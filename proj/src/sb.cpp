#include "normeq/sb.hpp"

#include <algorithm>
#include <sstream>

namespace normeq {

namespace {

void require_square(const Matrix& t, const char* name) {
  if (t.rows() != t.cols()) {
    std::ostringstream msg;
    msg << name << " must be square, got " << t.rows() << "x" << t.cols();
    fail(ErrorKind::shape_mismatch, msg.str());
  }
}

void require_composes(const Matrix& t_src, const Matrix& t_tgt, const Matrix& u,
                      const char* name) {
  if (u.cols() != t_src.rows() || u.rows() != t_tgt.rows()) {
    std::ostringstream msg;
    msg << name << " (" << u.rows() << "x" << u.cols()
        << ") does not map the source space (dim " << t_src.rows()
        << ") into the target space (dim " << t_tgt.rows() << ")";
    fail(ErrorKind::shape_mismatch, msg.str());
  }
}

}  // namespace

IntertwinerCertificate verify_intertwiner(const Matrix& t_src, const Matrix& t_tgt,
                                          const Matrix& u) {
  require_square(t_src, "source operator");
  require_square(t_tgt, "target operator");
  require_composes(t_src, t_tgt, u, "candidate intertwiner");

  IntertwinerCertificate cert;
  cert.isometry_defect =
      operator_norm(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
  cert.intertwining_defect = operator_norm(u * t_src - t_tgt * u);
  cert.adjoint_intertwining_defect =
      operator_norm(u * t_src.adjoint() - t_tgt.adjoint() * u);
  cert.src_normality_defect = normality_defect(t_src);
  cert.tgt_normality_defect = normality_defect(t_tgt);
  return cert;
}

FugledeReport fuglede_defect(const Matrix& t1, const Matrix& t2, const Matrix& s,
                             const ToleranceConfig& cfg) {
  require_square(t1, "T1");
  require_square(t2, "T2");
  require_composes(t1, t2, s, "intertwiner S");

  FugledeReport report;
  report.defect = operator_norm(s * t1.adjoint() - t2.adjoint() * s);
  report.normal_inputs = is_normal(t1, cfg) && is_normal(t2, cfg);
  return report;
}

SubspaceDefects invariant_subspace_check(const Matrix& t, const Matrix& b) {
  require_square(t, "operator");
  if (b.rows() != t.rows()) {
    fail(ErrorKind::shape_mismatch, "subspace basis does not live in the operator's space");
  }
  const double gram_defect =
      operator_norm(b.adjoint() * b - Matrix::Identity(b.cols(), b.cols()));
  if (gram_defect > 1e-9 * static_cast<double>(t.rows())) {
    std::ostringstream msg;
    msg << "basis columns are not orthonormal: Gram defect " << gram_defect;
    fail(ErrorKind::not_orthonormal, msg.str());
  }

  const Matrix complement =
      Matrix::Identity(t.rows(), t.rows()) - b * b.adjoint();
  SubspaceDefects defects;
  defects.t_defect = operator_norm(complement * (t * b));
  defects.tstar_defect = operator_norm(complement * (t.adjoint() * b));
  return defects;
}

std::variant<SBResult, Rejection> schroeder_bernstein(const Matrix& t1, const Matrix& t2,
                                                      const Matrix& u1, const Matrix& u2,
                                                      const ToleranceConfig& cfg) {
  cfg.validate();
  require_square(t1, "T1");
  require_square(t2, "T2");
  // Two-way isometries force equal dimensions; reject before any numerics.
  if (t1.rows() != t2.rows()) {
    std::ostringstream msg;
    msg << "two-way intertwining isometries cannot exist between dimensions "
        << t1.rows() << " and " << t2.rows();
    fail(ErrorKind::shape_mismatch, msg.str());
  }
  require_composes(t1, t2, u1, "U1");
  require_composes(t2, t1, u2, "U2");

  const double s = scale_of({&t1, &t2, &u1, &u2});
  const double gate = cfg.residual_tol * s;

  const auto check_normal = [&](const Matrix& t, const char* name) {
    const double defect = normality_defect(t);
    if (defect > cfg.normality_tol * s * s) {
      std::ostringstream msg;
      msg << name << " is not normal: commutator defect " << defect;
      fail(ErrorKind::not_normal, msg.str());
    }
  };
  check_normal(t1, "T1");
  check_normal(t2, "T2");

  SBResult result;
  result.u1 = verify_intertwiner(t1, t2, u1);
  if (const double d = std::max(result.u1.isometry_defect, result.u1.intertwining_defect);
      d > gate) {
    return Rejection{"certify-U1", d,
                     result.u1.isometry_defect > result.u1.intertwining_defect
                         ? "isometry defect exceeds gate"
                         : "intertwining defect exceeds gate"};
  }
  result.u2 = verify_intertwiner(t2, t1, u2);
  if (const double d = std::max(result.u2.isometry_defect, result.u2.intertwining_defect);
      d > gate) {
    return Rejection{"certify-U2", d,
                     result.u2.isometry_defect > result.u2.intertwining_defect
                         ? "isometry defect exceeds gate"
                         : "intertwining defect exceeds gate"};
  }

  const Matrix v_basis = orthonormalize_columns(u1);
  const Matrix w_basis = orthonormalize_columns(u1 * u2);

  result.subspaces.v = invariant_subspace_check(t2, v_basis);
  if (const double d = std::max(result.subspaces.v.t_defect, result.subspaces.v.tstar_defect);
      d > gate) {
    return Rejection{"subspace-V", d, "ran U1 is not invariant under T2 within the gate"};
  }
  result.subspaces.w = invariant_subspace_check(t2, w_basis);
  if (const double d = std::max(result.subspaces.w.t_defect, result.subspaces.w.tstar_defect);
      d > gate) {
    return Rejection{"subspace-W", d, "ran U1 U2 is not invariant under T2 within the gate"};
  }

  auto outcome = witness_unitary(decompose(t1, cfg), decompose(t2, cfg), cfg);
  if (std::holds_alternative<NotEquivalent>(outcome)) {
    const auto& mismatch = std::get<NotEquivalent>(outcome);
    std::ostringstream detail;
    detail << (mismatch.kind == NotEquivalent::Kind::value_mismatch
                   ? "atom value mismatch"
                   : "atom multiplicity mismatch")
           << " despite certified intertwiners";
    return Rejection{"witness",
                     std::abs(mismatch.left_value - mismatch.right_value),
                     detail.str()};
  }
  result.witness = std::get<Matrix>(std::move(outcome));
  result.witness_unitarity_defect = operator_norm(
      result.witness.adjoint() * result.witness - Matrix::Identity(t1.rows(), t1.rows()));
  result.witness_intertwining_defect =
      operator_norm(result.witness * t1 - t2 * result.witness);
  if (result.witness_unitarity_defect > 1e-9 * static_cast<double>(t1.rows()) ||
      result.witness_intertwining_defect > gate) {
    std::ostringstream msg;
    msg << "witness failed its soundness gate: unitarity defect "
        << result.witness_unitarity_defect << ", intertwining defect "
        << result.witness_intertwining_defect;
    fail(ErrorKind::guard_tripped, msg.str());
  }
  return result;
}

}  // namespace normeq
