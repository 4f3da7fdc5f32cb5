#pragma once

#include <array>

#include "normeq/matrix.hpp"

namespace normeq {

// A concrete finite structure (H, T, P, Q, U) in the language with four
// unary function symbols. The unit-ball normalization |T| <= 1 is an
// invariant of the type; construction rejects anything larger rather than
// rescaling silently.
class LStructure {
 public:
  static LStructure make(Matrix t, Matrix p, Matrix q, Matrix u);

  int dim() const noexcept { return static_cast<int>(t_.rows()); }
  const Matrix& T() const noexcept { return t_; }
  const Matrix& P() const noexcept { return p_; }
  const Matrix& Q() const noexcept { return q_; }
  const Matrix& U() const noexcept { return u_; }

 private:
  LStructure(Matrix t, Matrix p, Matrix q, Matrix u);
  Matrix t_, p_, q_, u_;
};

struct AxiomReport {
  std::array<double, 9> defects{};  // axioms (1)..(9), index k-1
  double max_defect = 0.0;
  double normality_defect = 0.0;    // preamble: T normal
  // Preamble 1-Lipschitz moduli: the four symbol norms, flagged (never
  // rejected) when any exceeds 1.
  double norm_T = 0.0, norm_P = 0.0, norm_Q = 0.0, norm_U = 0.0;
  bool lipschitz_ok = true;
  // Distance-to-range closed form for axiom (8) presumes U close to an
  // isometry; flagged unreliable when the axiom-(6) defect exceeds 0.5.
  bool range_projection_reliable = true;
};

// Evaluates the nine sup-sentences as exact residual operator norms:
//   (1) max(|P-P^2|, |Q-Q^2|)        (2) max(|P-P*|, |Q-Q*|)
//   (3) |PQ-Q|                       (4) max(|PTP-TP|, |QTQ-TQ|)
//   (5) max(|P*(TP-T)|, |Q*(TQ-T)|)  (6) |U*U-I|
//   (7) |PU-U|                       (8) |(I-Pi_ranU)Q|
//   (9) |UT-TU|
AxiomReport axiom_defects(const LStructure& s);

bool satisfies_sigma(const LStructure& s, double tol);

struct DecompositionReport {
  // Nesting of relative orthocomplements, as projection-composition residuals.
  double nest_w_in_v = 0.0;  // (W_N (-) W_M) within (V_N (-) V_M)
  double nest_v_in_h = 0.0;  // (V_N (-) V_M) within (H_N (-) H_M)
  // |U_N restricted to the embedded H_M minus U_M|.
  double restriction_defect = 0.0;
  // U_N restricted to H_N (-) H_M against W_N (-) W_M.
  double complement_range_defect = 0.0;
  double complement_intertwining_defect = 0.0;
};

// Verifies the orthocomplement conclusions on a nested pair of structures.
// embedding has orthonormal columns identifying sub's space inside sup's.
// Preconditions: both structures satisfy the axioms at cfg.residual_tol and
// every sup map restricted to the embedded subspace agrees with sub's map
// within cfg.residual_tol; throws not_a_substructure naming the first
// disagreeing map otherwise.
DecompositionReport orthocomplement_check(const LStructure& sub, const Matrix& embedding,
                                          const LStructure& sup,
                                          const ToleranceConfig& cfg = {});

}  // namespace normeq
