#include <doctest.h>

#include <variant>

#include "normeq/sb.hpp"
#include "test_support.hpp"

using namespace normeq;
using testing::Rng;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

TEST_CASE("verify_intertwiner measures exact zero defects on the identity") {
  const Matrix t = testing::diag_of({1.0, 2.0});
  const auto cert = verify_intertwiner(t, t, Matrix::Identity(2, 2));
  CHECK(cert.isometry_defect == 0.0);
  CHECK(cert.intertwining_defect == 0.0);
  CHECK(cert.adjoint_intertwining_defect == 0.0);
  CHECK(cert.src_normality_defect == 0.0);
  CHECK(cert.tgt_normality_defect == 0.0);
}

TEST_CASE("verify_intertwiner certifies a conjugating unitary") {
  Rng rng(71);
  const Matrix t1 = testing::diag_of({1.0, 2.0, -1.0, 0.5});
  const Matrix q = testing::random_unitary(4, rng);
  const Matrix t2 = q * t1 * q.adjoint();
  const double s = std::max(scale_of(t1), scale_of(t2));
  const auto cert = verify_intertwiner(t1, t2, q);
  CHECK(cert.isometry_defect <= 1e-12 * s);
  CHECK(cert.intertwining_defect <= 1e-12 * s);
  CHECK(cert.adjoint_intertwining_defect <= 1e-12 * s);
}

TEST_CASE("verify_intertwiner reports the non-isometry of I/2 exactly") {
  const Matrix t = testing::diag_of({1.0, 2.0});
  const auto cert = verify_intertwiner(t, t, Matrix::Identity(2, 2) * 0.5);
  CHECK(cert.isometry_defect == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("verify_intertwiner rejects non-composing shapes") {
  CHECK_THROWS_AS((void)verify_intertwiner(Matrix::Identity(2, 2), Matrix::Identity(3, 3),
                                           Matrix::Identity(2, 2)),
                  Error);
}

TEST_CASE("fuglede defect vanishes for a commuting normal pair") {
  const Matrix rotation = mat2(0.0, 1.0, -1.0, 0.0);
  const auto report = fuglede_defect(rotation, rotation, rotation);
  CHECK(report.defect <= 1e-15);
  CHECK(report.normal_inputs);
}

TEST_CASE("fuglede defect detects the nilpotent counterexample") {
  const Matrix nilpotent = mat2(0.0, 1.0, 0.0, 0.0);
  const auto report = fuglede_defect(nilpotent, nilpotent, nilpotent);
  CHECK(report.defect == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(report.normal_inputs);
}

TEST_CASE("fuglede defect stays tiny for polynomials in a normal operator") {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix t = testing::random_normal(6, rng);
    const Matrix s = 0.3 * Matrix::Identity(6, 6) + 0.5 * t + 0.25 * t * t + 0.1 * t * t * t;
    const auto report = fuglede_defect(t, t, s);
    const double scale = std::max(scale_of(t), 1.0);
    CHECK(report.defect <= 1e-9 * scale * scale * scale);
    CHECK(report.normal_inputs);
  }
}

TEST_CASE("invariant_subspace_check on coordinate subspaces") {
  const Matrix t = testing::diag_of({1.0, 2.0, 3.0});
  const Matrix b = Matrix::Identity(3, 3).leftCols(2);
  const auto defects = invariant_subspace_check(t, b);
  CHECK(defects.t_defect == 0.0);
  CHECK(defects.tstar_defect == 0.0);

  const Matrix swap = mat2(0.0, 1.0, 1.0, 0.0);
  const Matrix e1 = Matrix::Identity(2, 2).leftCols(1);
  CHECK(invariant_subspace_check(swap, e1).t_defect == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("invariant_subspace_check accepts eigenvector spans of normal operators") {
  Rng rng(79);
  const Matrix t = testing::random_normal(7, rng);
  const auto eig = eig_normal(t);
  const auto defects = invariant_subspace_check(t, eig.basis.leftCols(3));
  const double s = scale_of(t);
  CHECK(defects.t_defect <= 1e-10 * s);
  CHECK(defects.tstar_defect <= 1e-10 * s);
}

TEST_CASE("invariant_subspace_check demands orthonormal columns") {
  const Matrix t = testing::diag_of({1.0, 2.0});
  Matrix skew(2, 1);
  skew << 1.0, 1.0;
  try {
    (void)invariant_subspace_check(t, skew);
    FAIL("expected not_orthonormal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_orthonormal);
  }
}

TEST_CASE("schroeder_bernstein accepts the conjugation pipeline") {
  Rng rng(83);
  const Matrix t1 = testing::random_normal(6, rng);
  const Matrix q = testing::random_unitary(6, rng);
  const Matrix t2 = q * t1 * q.adjoint();
  const double s = std::max(scale_of(t1), scale_of(t2));

  const auto outcome = schroeder_bernstein(t1, t2, q, q.adjoint());
  REQUIRE(std::holds_alternative<SBResult>(outcome));
  const auto& result = std::get<SBResult>(outcome);
  CHECK(result.witness_unitarity_defect <= 1e-9 * 6);
  CHECK(result.witness_intertwining_defect <= 1e-8 * s);
  CHECK(result.subspaces.v.t_defect <= 1e-9 * s);
  CHECK(result.subspaces.v.tstar_defect <= 1e-9 * s);
  CHECK(result.subspaces.w.t_defect <= 1e-9 * s);
  CHECK(result.subspaces.w.tstar_defect <= 1e-9 * s);
  CHECK(operator_norm(result.witness * t1 - t2 * result.witness) <= 1e-8 * s);
}

TEST_CASE("schroeder_bernstein returns the identity witness for identical diagonals") {
  const Matrix t = testing::diag_of({1.0, 2.0});
  const auto outcome =
      schroeder_bernstein(t, t, Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  REQUIRE(std::holds_alternative<SBResult>(outcome));
  CHECK(operator_norm(std::get<SBResult>(outcome).witness - Matrix::Identity(2, 2)) <=
        1e-12);
}

TEST_CASE("schroeder_bernstein rejects a swap that fails to intertwine") {
  const Matrix t = testing::diag_of({1.0, 2.0});
  const Matrix swap = mat2(0.0, 1.0, 1.0, 0.0);
  const auto outcome = schroeder_bernstein(t, t, swap, swap);
  REQUIRE(std::holds_alternative<Rejection>(outcome));
  const auto& rejection = std::get<Rejection>(outcome);
  CHECK(rejection.stage == "certify-U1");
  CHECK(rejection.defect == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schroeder_bernstein fails fast on mismatched dimensions") {
  const Matrix t1 = testing::diag_of({1.0, 2.0});
  const Matrix t2 = testing::diag_of({1.0, 2.0, 3.0});
  const Matrix u1 = Matrix::Identity(3, 3).leftCols(2);
  const Matrix u2 = u1.adjoint();
  try {
    (void)schroeder_bernstein(t1, t2, u1, u2);
    FAIL("expected shape_mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape_mismatch);
  }
}

TEST_CASE("schroeder_bernstein demands normal inputs") {
  const Matrix nilpotent = mat2(0.0, 1.0, 0.0, 0.0);
  try {
    (void)schroeder_bernstein(nilpotent, nilpotent, Matrix::Identity(2, 2),
                              Matrix::Identity(2, 2));
    FAIL("expected not_normal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_normal);
  }
}

TEST_CASE("fuglede counterexample family keeps defect at least one half") {
  Rng rng(89);
  std::uniform_real_distribution<double> uniform(1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = uniform(rng);
    const double b = uniform(rng);
    const Matrix t = mat2(0.0, a, 0.0, 0.0);
    const Matrix s = mat2(0.0, b, 0.0, 0.0);
    const auto report = fuglede_defect(t, t, s);
    CHECK(operator_norm(s * t - t * s) <= 1e-15);  // forward intertwining is exact
    CHECK(report.defect >= 0.5);
    CHECK_FALSE(report.normal_inputs);
  }
}

TEST_CASE("exact eigenspace block maps intertwine and transfer to adjoints") {
  Rng rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    // Shared eigenvalues with repetition so the commutant has real blocks.
    const std::vector<Complex> values = {{1.0, 0.5}, {1.0, 0.5}, {-2.0, 0.0}, {0.0, 1.0}};
    const Matrix q1 = testing::random_unitary(4, rng);
    const Matrix q2 = testing::random_unitary(4, rng);
    const Matrix t1 = q1 * testing::diag_of(values) * q1.adjoint();
    const Matrix t2 = q2 * testing::diag_of(values) * q2.adjoint();

    // Block map: mixes only the repeated eigenvalue pair, scales the rest.
    Matrix block = Matrix::Zero(4, 4);
    block(0, 0) = Complex(0.3, 0.1);
    block(0, 1) = Complex(-0.7, 0.2);
    block(1, 0) = Complex(0.5, 0.0);
    block(1, 1) = Complex(0.1, -0.4);
    block(2, 2) = Complex(1.2, 0.0);
    block(3, 3) = Complex(0.0, -0.8);
    const Matrix s = q2 * block * q1.adjoint();

    const double scale = std::max({scale_of(t1), scale_of(t2), scale_of(s)});
    CHECK(operator_norm(s * t1 - t2 * s) <= 1e-13 * scale);
    const auto report = fuglede_defect(t1, t2, s);
    CHECK(report.normal_inputs);
    CHECK(report.defect <= 1e-8 * scale);
  }
}
