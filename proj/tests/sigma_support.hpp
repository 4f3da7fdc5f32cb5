#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "normeq/sigma.hpp"
#include "test_support.hpp"

namespace normeq::testing {

// Constructive sampler for models of the axiom set. In finite dimensions an
// exact model forces U unitary and P = I (a square matrix with U*U = I is
// surjective, and PU = U then pins P on the whole space), so the free data
// are T, the invariant subspace carrying Q, and a unitary commuting with T
// that fixes that subspace.
inline LStructure sample_sigma_model(Rng& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> radius(0.0, 0.9);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::bernoulli_distribution coin(0.5);

  const Matrix frame = random_unitary(n, rng);
  Matrix t = Matrix::Zero(n, n);
  Matrix u = Matrix::Zero(n, n);
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = radius(rng);
    const double phi = angle(rng);
    const Complex eigenvalue = std::polar(r, phi);
    const Complex phase = std::polar(1.0, angle(rng));
    const Matrix projector = frame.col(k) * frame.col(k).adjoint();
    t += eigenvalue * projector;
    u += phase * projector;
    if (coin(rng)) q += projector;
  }
  return LStructure::make(std::move(t), Matrix::Identity(n, n), std::move(q),
                          std::move(u));
}

struct NestedPair {
  LStructure sub;
  Matrix embedding;
  LStructure sup;
};

// Nested structures sharing an eigenframe, built so every orthocomplement
// conclusion holds exactly: the sup's inner subspace is the sub's inner
// subspace joined with the whole embedded complement.
inline NestedPair sample_nested_pair(Rng& rng, Eigen::Index n_sup, Eigen::Index n_sub) {
  std::uniform_real_distribution<double> radius(0.0, 0.9);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::bernoulli_distribution coin(0.5);

  const Matrix frame = random_unitary(n_sup, rng);
  std::vector<Complex> eigenvalues(static_cast<std::size_t>(n_sup));
  std::vector<Complex> phases(static_cast<std::size_t>(n_sup));
  std::vector<bool> inner(static_cast<std::size_t>(n_sup));
  for (Eigen::Index k = 0; k < n_sup; ++k) {
    eigenvalues[static_cast<std::size_t>(k)] = std::polar(radius(rng), angle(rng));
    phases[static_cast<std::size_t>(k)] = std::polar(1.0, angle(rng));
    // Members of the embedded subspace carry a coin flip; the complement
    // belongs to the sup's inner subspace wholesale.
    inner[static_cast<std::size_t>(k)] = k < n_sub ? coin(rng) : true;
  }

  Matrix t_sup = Matrix::Zero(n_sup, n_sup);
  Matrix u_sup = Matrix::Zero(n_sup, n_sup);
  Matrix q_sup = Matrix::Zero(n_sup, n_sup);
  for (Eigen::Index k = 0; k < n_sup; ++k) {
    const Matrix projector = frame.col(k) * frame.col(k).adjoint();
    t_sup += eigenvalues[static_cast<std::size_t>(k)] * projector;
    u_sup += phases[static_cast<std::size_t>(k)] * projector;
    if (inner[static_cast<std::size_t>(k)]) q_sup += projector;
  }

  const Matrix embedding = frame.leftCols(n_sub);
  const Matrix t_sub = embedding.adjoint() * t_sup * embedding;
  const Matrix u_sub = embedding.adjoint() * u_sup * embedding;
  const Matrix q_sub = embedding.adjoint() * q_sup * embedding;

  return NestedPair{
      LStructure::make(t_sub, Matrix::Identity(n_sub, n_sub), q_sub, u_sub),
      embedding,
      LStructure::make(std::move(t_sup), Matrix::Identity(n_sup, n_sup),
                       std::move(q_sup), std::move(u_sup))};
}

}  // namespace normeq::testing
