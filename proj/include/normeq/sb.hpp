#pragma once

#include <string>
#include <variant>

#include "normeq/matrix.hpp"
#include "normeq/spectral.hpp"

namespace normeq {

// Measured residuals of a candidate intertwining isometry U: src -> tgt.
// Values only; judgment against a tolerance stays with the caller.
struct IntertwinerCertificate {
  double isometry_defect = 0.0;             // |U*U - I|
  double intertwining_defect = 0.0;         // |U Tsrc - Ttgt U|
  double adjoint_intertwining_defect = 0.0; // |U Tsrc* - Ttgt* U|
  double src_normality_defect = 0.0;
  double tgt_normality_defect = 0.0;
};

IntertwinerCertificate verify_intertwiner(const Matrix& t_src, const Matrix& t_tgt,
                                          const Matrix& u);

struct FugledeReport {
  double defect = 0.0;  // |S T1* - T2* S|
  bool normal_inputs = false;
};

// Measures the adjoint-intertwining residual the Fuglede-Putnam theorem
// predicts to vanish for normal inputs. Reports, never assumes.
FugledeReport fuglede_defect(const Matrix& t1, const Matrix& t2, const Matrix& s,
                             const ToleranceConfig& cfg = {});

struct SubspaceDefects {
  double t_defect = 0.0;      // |(I - BB*) T B|
  double tstar_defect = 0.0;  // |(I - BB*) T* B|
};

// Invariance residuals of ran B under T and T*. B must have orthonormal
// columns (|B*B - I| <= 1e-9 * n); throws not_orthonormal otherwise.
SubspaceDefects invariant_subspace_check(const Matrix& t, const Matrix& b);

struct SubspaceReport {
  SubspaceDefects v;  // ran U1
  SubspaceDefects w;  // ran U1 U2
};

struct SBResult {
  Matrix witness;
  IntertwinerCertificate u1;
  IntertwinerCertificate u2;
  SubspaceReport subspaces;
  double witness_unitarity_defect = 0.0;
  double witness_intertwining_defect = 0.0;
};

struct Rejection {
  std::string stage;  // certify-U1 | certify-U2 | subspace-V | subspace-W | witness
  double defect = 0.0;
  std::string detail;
};

// The two-way-isometry pipeline: certify U1 and U2, build bases of
// V = ran U1 and W = ran U1 U2, record their invariance defects under T2,
// then produce the spectral-matching witness. Any stage defect beyond
// residual_tol * scale rejects with the stage name.
std::variant<SBResult, Rejection> schroeder_bernstein(const Matrix& t1, const Matrix& t2,
                                                      const Matrix& u1, const Matrix& u2,
                                                      const ToleranceConfig& cfg = {});

}  // namespace normeq
