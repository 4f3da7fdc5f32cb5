#pragma once

#include "normeq/matrix.hpp"

namespace normeq {

struct CayleyPair {
  Matrix t;  // Hermitian input
  Matrix v;  // (T - iI)(T + iI)^{-1}, unitary
  double unitarity_defect = 0.0;    // |V*V - I|
  double spectral_map_defect = 0.0; // worst match of (lambda-i)/(lambda+i) against eig(V)
};

// Cayley transform of a Hermitian matrix. T + iI has smallest singular
// value >= 1, so the solve is well conditioned; throws not_hermitian.
CayleyPair cayley(const Matrix& t, const ToleranceConfig& cfg = {});

// Inverse transform i(I + V)(I - V)^{-1} of a unitary V. Throws not_unitary,
// and spectrum_contains_one when an eigenvalue of V lies within cluster_tol
// of 1 (the image of the point at infinity).
Matrix inverse_cayley(const Matrix& v, const ToleranceConfig& cfg = {});

struct TransferReport {
  double isometry_defect = 0.0;        // |U1*U1 - I|
  double intertwining_defect = 0.0;    // |U1 T1 - T2 U1|, the hypothesis residual
  double resolvent_step_defect = 0.0;  // |U1 (T1+i)^{-1} - (T2+i)^{-1} U1|
  double final_residual = 0.0;         // |U1 V1 - V2 U1|
  // U1 V1 - V2 U1 = (I - V2) (U1 T1 - T2 U1) (T1 + i)^{-1}, so the final
  // residual is predicted <= multiplier * intertwining_defect.
  double predicted_multiplier = 0.0;   // |I - V2| * |(T1+i)^{-1}|
};

// Replays the identity chain moving U1 past the Cayley transform, reporting
// each step's residual. Throws not_hermitian and not_intertwining (when the
// hypothesis defect exceeds residual_tol * scale).
TransferReport intertwining_transfer_check(const Matrix& t1, const Matrix& t2,
                                           const Matrix& u1,
                                           const ToleranceConfig& cfg = {});

}  // namespace normeq
