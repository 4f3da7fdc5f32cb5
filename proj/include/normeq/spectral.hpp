#pragma once

#include <variant>
#include <vector>

#include "normeq/invariant.hpp"
#include "normeq/matrix.hpp"

namespace normeq {

// One fiber of the atomic direct-sum decomposition: a cluster representative
// with the orthonormal basis of its clustered eigenspace.
struct SpectralAtom {
  Complex value;
  int multiplicity = 0;
  Matrix basis;  // multiplicity orthonormal columns
};

struct SpectralDecomposition {
  int dim = 0;
  std::vector<SpectralAtom> atoms;  // ordered lexicographically by value
};

// Clusters the eigenvalues of a normal matrix by single linkage at radius
// cluster_tol. Throws not_normal, and cluster_ambiguity when a cluster's
// diameter exceeds 10 * cluster_tol.
SpectralDecomposition decompose(const Matrix& t, const ToleranceConfig& cfg = {});

// Sum of value * basis * basis^* over atoms.
Matrix reconstruct(const SpectralDecomposition& d);

// Projects the decomposition to its symbolic invariant: atom values rounded
// to the canonical 6-decimal label grid, multiplicities as finite ExtMult.
AtomicSpectralType abstract_invariant(const SpectralDecomposition& d);

struct NotEquivalent {
  enum class Kind { value_mismatch, multiplicity_mismatch };
  Kind kind;
  std::size_t atom_index;  // index into d1.atoms of the first mismatch
  Complex left_value;
  Complex right_value = 0.0;  // nearest candidate, when kind is value_mismatch
  int left_multiplicity = 0;
  int right_multiplicity = 0;
};

// Constructive direction at atomic measures: when atoms pair within
// cluster_tol with equal multiplicities, returns the blockwise unitary
// sum of basis2 * basis1^*. Throws shape_mismatch on unequal dimensions and
// guard_tripped if the built witness fails its own soundness gates.
std::variant<Matrix, NotEquivalent> witness_unitary(const SpectralDecomposition& d1,
                                                    const SpectralDecomposition& d2,
                                                    const ToleranceConfig& cfg = {});

}  // namespace normeq
