#include "normeq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace normeq {

namespace {

// Single-linkage clusters over complex points: union anything within radius.
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Complex>& points,
                                                     double radius) {
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(points[i] - points[j]) <= radius) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return clusters;
}

bool value_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

SpectralDecomposition decompose(const Matrix& t, const ToleranceConfig& cfg) {
  cfg.validate();
  const double s = scale_of(t);
  const double radius = cfg.cluster_tol * s;
  const EigenSystem eig = eig_normal(t, cfg);
  const std::size_t n = eig.values.size();

  const auto clusters = single_linkage(eig.values, radius);

  SpectralDecomposition d;
  d.dim = static_cast<int>(n);
  d.atoms.reserve(clusters.size());
  for (const auto& members : clusters) {
    double diameter = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        diameter = std::max(diameter,
                            std::abs(eig.values[members[a]] - eig.values[members[b]]));
      }
    }
    if (diameter > 10.0 * radius) {
      std::ostringstream msg;
      msg << "eigenvalue cluster of diameter " << diameter << " exceeds 10 x "
          << radius << "; spectrum is not separated at this cluster_tol";
      fail(ErrorKind::cluster_ambiguity, msg.str());
    }

    SpectralAtom atom;
    atom.multiplicity = static_cast<int>(members.size());
    Complex sum = 0.0;
    atom.basis.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k) {
      sum += eig.values[members[k]];
      atom.basis.col(static_cast<Eigen::Index>(k)) =
          eig.basis.col(static_cast<Eigen::Index>(members[k]));
    }
    atom.value = sum / static_cast<double>(members.size());
    d.atoms.push_back(std::move(atom));
  }

  std::sort(d.atoms.begin(), d.atoms.end(),
            [](const SpectralAtom& a, const SpectralAtom& b) {
              return value_less(a.value, b.value);
            });
  return d;
}

Matrix reconstruct(const SpectralDecomposition& d) {
  Matrix out = Matrix::Zero(d.dim, d.dim);
  for (const SpectralAtom& atom : d.atoms) {
    out += atom.value * (atom.basis * atom.basis.adjoint());
  }
  return out;
}

AtomicSpectralType abstract_invariant(const SpectralDecomposition& d) {
  AtomicSpectralType invariant;
  for (const SpectralAtom& atom : d.atoms) {
    const AtomLabel label = AtomLabel::from_rounded(atom.value);
    const auto existing = invariant.multiplicity(label);
    const ExtMult mult = ExtMult::finite(static_cast<std::uint64_t>(atom.multiplicity));
    invariant.set(label, existing ? *existing + mult : mult);
  }
  return invariant;
}

std::variant<Matrix, NotEquivalent> witness_unitary(const SpectralDecomposition& d1,
                                                    const SpectralDecomposition& d2,
                                                    const ToleranceConfig& cfg) {
  cfg.validate();
  if (d1.dim != d2.dim) {
    std::ostringstream msg;
    msg << "decompositions act on different dimensions: " << d1.dim << " vs " << d2.dim;
    fail(ErrorKind::shape_mismatch, msg.str());
  }

  // Atom values live at the scale of the operators they came from.
  double value_scale = 1.0;
  for (const auto& a : d1.atoms) value_scale = std::max(value_scale, std::abs(a.value));
  for (const auto& a : d2.atoms) value_scale = std::max(value_scale, std::abs(a.value));
  const double radius = cfg.cluster_tol * value_scale;

  // Greedy nearest-value matching over the lexicographically sorted atoms;
  // ambiguity shows up as a failed pairing, never a silent wrong one.
  std::vector<bool> taken(d2.atoms.size(), false);
  std::vector<std::size_t> match(d1.atoms.size());
  for (std::size_t i = 0; i < d1.atoms.size(); ++i) {
    long best = -1;
    double best_dist = 0.0;
    for (std::size_t j = 0; j < d2.atoms.size(); ++j) {
      if (taken[j]) continue;
      const double dist = std::abs(d1.atoms[i].value - d2.atoms[j].value);
      if (best < 0 || dist < best_dist) {
        best = static_cast<long>(j);
        best_dist = dist;
      }
    }
    if (best < 0 || best_dist > radius) {
      NotEquivalent mismatch;
      mismatch.kind = NotEquivalent::Kind::value_mismatch;
      mismatch.atom_index = i;
      mismatch.left_value = d1.atoms[i].value;
      if (best >= 0) mismatch.right_value = d2.atoms[static_cast<std::size_t>(best)].value;
      mismatch.left_multiplicity = d1.atoms[i].multiplicity;
      return mismatch;
    }
    const std::size_t j = static_cast<std::size_t>(best);
    if (d1.atoms[i].multiplicity != d2.atoms[j].multiplicity) {
      NotEquivalent mismatch;
      mismatch.kind = NotEquivalent::Kind::multiplicity_mismatch;
      mismatch.atom_index = i;
      mismatch.left_value = d1.atoms[i].value;
      mismatch.right_value = d2.atoms[j].value;
      mismatch.left_multiplicity = d1.atoms[i].multiplicity;
      mismatch.right_multiplicity = d2.atoms[j].multiplicity;
      return mismatch;
    }
    taken[j] = true;
    match[i] = j;
  }
  if (d1.atoms.size() != d2.atoms.size()) {
    // Every d1 atom paired but d2 has atoms left over; dimensions being
    // equal this implies a multiplicity imbalance reported at the last atom.
    NotEquivalent mismatch;
    mismatch.kind = NotEquivalent::Kind::value_mismatch;
    mismatch.atom_index = d1.atoms.empty() ? 0 : d1.atoms.size() - 1;
    for (std::size_t j = 0; j < d2.atoms.size(); ++j) {
      if (!taken[j]) {
        mismatch.right_value = d2.atoms[j].value;
        mismatch.right_multiplicity = d2.atoms[j].multiplicity;
        break;
      }
    }
    if (!d1.atoms.empty()) mismatch.left_value = d1.atoms.back().value;
    return mismatch;
  }

  Matrix witness = Matrix::Zero(d1.dim, d1.dim);
  for (std::size_t i = 0; i < d1.atoms.size(); ++i) {
    witness += d2.atoms[match[i]].basis * d1.atoms[i].basis.adjoint();
  }

  // Soundness gates on every return.
  const double n = static_cast<double>(d1.dim);
  const double unitarity =
      operator_norm(witness.adjoint() * witness - Matrix::Identity(d1.dim, d1.dim));
  const Matrix t1 = reconstruct(d1);
  const Matrix t2 = reconstruct(d2);
  const double s = std::max(scale_of(t1), scale_of(t2));
  const double intertwining = operator_norm(witness * t1 - t2 * witness);
  if (unitarity > 1e-9 * n || intertwining > cfg.residual_tol * s) {
    std::ostringstream msg;
    msg << "constructed witness failed its soundness gate: unitarity defect "
        << unitarity << ", intertwining defect " << intertwining;
    fail(ErrorKind::guard_tripped, msg.str());
  }
  return witness;
}

}  // namespace normeq
