#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cohspin/rng.hpp"
#include "cohspin/spin_algebra.hpp"

using namespace cohspin;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("spin one-half operators are the Pauli matrices over two") {
  const OperatorTriple ops = build_spin_operators(spin(1));
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  CHECK(max_abs(ops.sx - sx) == 0.0);
  CHECK(max_abs(ops.sy - sy) == 0.0);
  CHECK(max_abs(ops.sz - sz) == 0.0);
}

TEST_CASE("spin one operators match the closed form") {
  const OperatorTriple ops = build_spin_operators(spin(2));
  const double r = 1.0 / std::sqrt(2.0);
  Matrix sx(3, 3), sy(3, 3), sz(3, 3);
  sx << 0, r, 0, r, 0, r, 0, r, 0;
  sy << 0.0, -r * kI, 0.0, r * kI, 0.0, -r * kI, 0.0, r * kI, 0.0;
  sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  CHECK(max_abs(ops.sx - sx) <= 1e-15);
  CHECK(max_abs(ops.sy - sy) <= 1e-15);
  CHECK(max_abs(ops.sz - sz) <= 1e-15);
}

TEST_CASE("operators are Hermitian with the right dimension") {
  for (int twice_s = 0; twice_s <= 12; ++twice_s) {
    const OperatorTriple ops = build_spin_operators(spin(twice_s));
    REQUIRE(ops.dimension() == twice_s + 1);
    CHECK(max_abs(ops.sx - ops.sx.adjoint()) <= 1e-14);
    CHECK(max_abs(ops.sy - ops.sy.adjoint()) <= 1e-14);
    CHECK(max_abs(ops.sz - ops.sz.adjoint()) <= 1e-14);
  }
  CHECK_THROWS_AS(spin(-1), std::invalid_argument);
}

TEST_CASE("cyclic commutators and the quadratic invariant hold to 1e-12") {
  for (int twice_s = 1; twice_s <= 12; ++twice_s) {
    const SpinLabel label = spin(twice_s);
    const OperatorTriple ops = build_spin_operators(label);
    CHECK(max_abs(commutator(ops.sx, ops.sy) - kI * ops.sz) <= 1e-12);
    CHECK(max_abs(commutator(ops.sy, ops.sz) - kI * ops.sx) <= 1e-12);
    CHECK(max_abs(commutator(ops.sz, ops.sx) - kI * ops.sy) <= 1e-12);
    const Matrix casimir =
        ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    const double c = label.s() * (label.s() + 1.0);
    CHECK(max_abs(casimir - c * Matrix::Identity(label.dimension(),
                                                 label.dimension())) <= 1e-12);
  }
}

TEST_CASE("commutator rejects mismatched dimensions") {
  const OperatorTriple a = build_spin_operators(spin(1));
  const OperatorTriple b = build_spin_operators(spin(2));
  CHECK_THROWS_AS(commutator(a.sx, b.sx), std::invalid_argument);
}

TEST_CASE("dot operator has spectrum -s..s for unit directions") {
  Rng rng(7);
  for (int twice_s : {1, 3, 6}) {
    const SpinLabel label = spin(twice_s);
    const OperatorTriple ops = build_spin_operators(label);
    const Matrix x = dot_operator(rng.unit_vector(), ops);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
    for (int i = 0; i <= twice_s; ++i)
      CHECK(std::abs(solver.eigenvalues()(i) - (-label.s() + i)) <= 1e-12);
  }
}

TEST_CASE("commutator of two projections equals the cross-product projection") {
  const OperatorTriple half = build_spin_operators(spin(1));
  SUBCASE("parallel arguments give zero") {
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
      const Vector3 a = rng.unit_vector();
      CHECK(cross_identity_residual(a, a, half) <= 1e-13);
    }
  }
  SUBCASE("x and y reduce to the basic commutator") {
    CHECK(cross_identity_residual(Vector3::UnitX(), Vector3::UnitY(), half) <=
          1e-13);
  }
  SUBCASE("random unit pairs at spin 3/2") {
    const OperatorTriple ops = build_spin_operators(spin(3));
    Rng rng(13);
    for (int i = 0; i < 100; ++i)
      CHECK(cross_identity_residual(rng.unit_vector(), rng.unit_vector(),
                                    ops) <= 1e-12);
  }
}

TEST_CASE("componentwise commutator with a field projection") {
  SUBCASE("field along z at spin one-half") {
    const OperatorTriple ops = build_spin_operators(spin(1));
    CHECK(spin_cross_field_residual(Vector3::UnitZ(), ops) <= 1e-13);
  }
  SUBCASE("zero field gives zero residual") {
    const OperatorTriple ops = build_spin_operators(spin(2));
    CHECK(spin_cross_field_residual(Vector3::Zero(), ops) <= 1e-16);
  }
  SUBCASE("random fields up to spin 5/2") {
    Rng rng(17);
    for (int twice_s = 1; twice_s <= 5; ++twice_s) {
      const OperatorTriple ops = build_spin_operators(spin(twice_s));
      for (int i = 0; i < 20; ++i)
        CHECK(spin_cross_field_residual(rng.vector_in_cube(2.0), ops) <=
              1e-12);
    }
  }
}

TEST_CASE("telescoping power commutator") {
  SUBCASE("k = 1 is the plain commutator") {
    Rng rng(19);
    const Matrix x = rng.matrix_unit_disc(4);
    const Matrix h = rng.matrix_unit_disc(4);
    CHECK(telescoping_residual(x, h, 1) <= 1e-16);
  }
  SUBCASE("commuting diagonal pairs vanish for every k") {
    Rng rng(23);
    Matrix x = Matrix::Zero(5, 5), h = Matrix::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
      x(i, i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      h(i, i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    for (int k = 1; k <= 6; ++k) CHECK(telescoping_residual(x, h, k) <= 1e-13);
  }
  SUBCASE("random dense pairs") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix x = rng.matrix_unit_disc(5);
      const Matrix h = rng.matrix_unit_disc(5);
      CHECK(telescoping_residual(x, h, 4) <= 1e-10);
    }
  }
  SUBCASE("k below 1 is rejected") {
    const Matrix x = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(telescoping_residual(x, x, 0), std::invalid_argument);
  }
}

TEST_CASE("local frame is right-handed and orthonormal") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const Vector3 n = rng.unit_vector();
    const LocalFrame frame = local_frame(n);
    CHECK(std::abs(frame.e1.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(frame.e2.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(frame.e1.dot(frame.e2)) <= 1e-14);
    CHECK(std::abs(frame.e1.dot(n)) <= 1e-14);
    CHECK((frame.e1.cross(frame.e2) - n).norm() <= 1e-13);
  }
  SUBCASE("gauge at the poles") {
    CHECK((local_frame(Vector3::UnitZ()).e1 - Vector3::UnitX()).norm() <=
          1e-15);
    CHECK((local_frame(-Vector3::UnitZ()).e1 - Vector3::UnitX()).norm() <=
          1e-15);
  }
}

TEST_CASE("local ladder operators obey the frame-independent algebra") {
  Rng rng(37);
  for (int twice_s : {1, 2, 5}) {
    const OperatorTriple ops = build_spin_operators(spin(twice_s));
    for (int i = 0; i < 10; ++i) {
      const Vector3 n = rng.unit_vector();
      const Matrix x = dot_operator(n, ops);
      const auto [raise, lower] = local_ladder_operators(n, ops);
      CHECK(max_abs(commutator(x, raise) - raise) <= 1e-12);
      CHECK(max_abs(commutator(x, lower) + lower) <= 1e-12);
      CHECK(max_abs(raise - lower.adjoint()) <= 1e-14);
    }
  }
  CHECK_THROWS_AS(
      local_ladder_operators(Vector3(1.0, 1.0, 0.0),
                             build_spin_operators(spin(1))),
      std::invalid_argument);
}
