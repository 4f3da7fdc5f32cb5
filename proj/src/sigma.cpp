#include "normeq/sigma.hpp"

#include <algorithm>
#include <sstream>

namespace normeq {

LStructure::LStructure(Matrix t, Matrix p, Matrix q, Matrix u)
    : t_(std::move(t)), p_(std::move(p)), q_(std::move(q)), u_(std::move(u)) {}

LStructure LStructure::make(Matrix t, Matrix p, Matrix q, Matrix u) {
  const Eigen::Index n = t.rows();
  const auto check_shape = [&](const Matrix& m, const char* name) {
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream msg;
      msg << name << " must be " << n << "x" << n << ", got " << m.rows() << "x"
          << m.cols();
      fail(ErrorKind::shape_mismatch, msg.str());
    }
  };
  if (t.rows() != t.cols()) fail(ErrorKind::non_square, "T must be square");
  check_shape(p, "P");
  check_shape(q, "Q");
  check_shape(u, "U");
  require_finite(t, "T");
  require_finite(p, "P");
  require_finite(q, "Q");
  require_finite(u, "U");

  const double norm_t = operator_norm(t);
  if (norm_t > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "the language presupposes |T| <= 1, got |T| = " << norm_t
        << "; rescale the input explicitly if that is intended";
    fail(ErrorKind::invalid_argument, msg.str());
  }
  return LStructure(std::move(t), std::move(p), std::move(q), std::move(u));
}

AxiomReport axiom_defects(const LStructure& s) {
  const Matrix& t = s.T();
  const Matrix& p = s.P();
  const Matrix& q = s.Q();
  const Matrix& u = s.U();
  const Matrix id = Matrix::Identity(s.dim(), s.dim());

  AxiomReport report;
  report.defects[0] = std::max(operator_norm(p - p * p), operator_norm(q - q * q));
  report.defects[1] =
      std::max(operator_norm(p - p.adjoint()), operator_norm(q - q.adjoint()));
  report.defects[2] = operator_norm(p * q - q);
  report.defects[3] =
      std::max(operator_norm(p * t * p - t * p), operator_norm(q * t * q - t * q));
  report.defects[4] = std::max(operator_norm(p.adjoint() * (t * p - t)),
                               operator_norm(q.adjoint() * (t * q - t)));
  report.defects[5] = operator_norm(u.adjoint() * u - id);
  report.defects[6] = operator_norm(p * u - u);
  report.range_projection_reliable = report.defects[5] <= 0.5;
  const Matrix range_basis = orthonormalize_columns(u);
  const Matrix range_projection = range_basis * range_basis.adjoint();
  report.defects[7] = operator_norm((id - range_projection) * q);
  report.defects[8] = operator_norm(u * t - t * u);

  report.max_defect = *std::max_element(report.defects.begin(), report.defects.end());
  report.normality_defect = normality_defect(t);
  report.norm_T = operator_norm(t);
  report.norm_P = operator_norm(p);
  report.norm_Q = operator_norm(q);
  report.norm_U = operator_norm(u);
  report.lipschitz_ok = report.norm_T <= 1.0 + 1e-12 && report.norm_P <= 1.0 + 1e-12 &&
                        report.norm_Q <= 1.0 + 1e-12 && report.norm_U <= 1.0 + 1e-12;
  return report;
}

bool satisfies_sigma(const LStructure& s, double tol) {
  const AxiomReport report = axiom_defects(s);
  return report.max_defect <= tol && report.normality_defect <= tol;
}

namespace {

// Residual of "S1 lies within S2" for orthogonal projections onto them.
double containment_defect(const Matrix& onto_s1, const Matrix& onto_s2) {
  return operator_norm(onto_s2 * onto_s1 - onto_s1);
}

}  // namespace

DecompositionReport orthocomplement_check(const LStructure& sub, const Matrix& embedding,
                                          const LStructure& sup,
                                          const ToleranceConfig& cfg) {
  cfg.validate();
  if (embedding.rows() != sup.dim() || embedding.cols() != sub.dim()) {
    std::ostringstream msg;
    msg << "embedding must be " << sup.dim() << "x" << sub.dim() << ", got "
        << embedding.rows() << "x" << embedding.cols();
    fail(ErrorKind::shape_mismatch, msg.str());
  }
  const double gram = operator_norm(embedding.adjoint() * embedding -
                                    Matrix::Identity(sub.dim(), sub.dim()));
  if (gram > 1e-9 * static_cast<double>(sup.dim())) {
    std::ostringstream msg;
    msg << "embedding columns are not orthonormal: Gram defect " << gram;
    fail(ErrorKind::not_orthonormal, msg.str());
  }

  const double tol = cfg.residual_tol;
  if (!satisfies_sigma(sub, tol)) {
    fail(ErrorKind::not_a_substructure,
         "sub structure does not satisfy the axioms at tolerance " + std::to_string(tol));
  }
  if (!satisfies_sigma(sup, tol)) {
    fail(ErrorKind::not_a_substructure,
         "sup structure does not satisfy the axioms at tolerance " + std::to_string(tol));
  }

  // Substructure surrogate: each sup map carries the embedded subspace to
  // itself the way the sub map does.
  const struct {
    const char* name;
    const Matrix& sup_map;
    const Matrix& sub_map;
  } maps[] = {{"T", sup.T(), sub.T()},
              {"P", sup.P(), sub.P()},
              {"Q", sup.Q(), sub.Q()},
              {"U", sup.U(), sub.U()}};
  for (const auto& m : maps) {
    const double agreement = operator_norm(m.sup_map * embedding - embedding * m.sub_map);
    if (agreement > tol) {
      std::ostringstream msg;
      msg << "map " << m.name << " disagrees with the sub structure on the embedded "
          << "subspace: defect " << agreement;
      fail(ErrorKind::not_a_substructure, msg.str());
    }
  }

  const Matrix id = Matrix::Identity(sup.dim(), sup.dim());
  const Matrix embedded = embedding * embedding.adjoint();  // onto H_M inside H_N
  const Matrix onto_h_comp = id - embedded;
  const Matrix onto_w_comp = sup.Q() - embedding * sub.Q() * embedding.adjoint();
  const Matrix onto_v_comp = sup.P() - embedding * sub.P() * embedding.adjoint();

  DecompositionReport report;
  report.nest_w_in_v = containment_defect(onto_w_comp, onto_v_comp);
  report.nest_v_in_h = containment_defect(onto_v_comp, onto_h_comp);
  report.restriction_defect =
      operator_norm(sup.U() * embedding - embedding * sub.U());
  report.complement_range_defect =
      operator_norm((id - onto_w_comp) * (sup.U() * onto_h_comp));
  report.complement_intertwining_defect =
      operator_norm((sup.U() * sup.T() - sup.T() * sup.U()) * onto_h_comp);
  return report;
}

}  // namespace normeq
