#pragma once

#include <utility>

#include "cohspin/types.hpp"

namespace cohspin {

/// The three spin-s angular momentum matrices in the |s,m> basis ordered
/// m = +s, s-1, ..., -s. Entries are stored in units of hbar.
struct OperatorTriple {
  Matrix sx, sy, sz;

  int dimension() const { return static_cast<int>(sz.rows()); }
};

/// Right-handed orthonormal frame (e1, e2, n) attached to a direction n.
/// Gauge: e1 = normalize(z x n) unless n is within 1e-8 of +/-z, then e1 = x.
struct LocalFrame {
  Vector3 e1, e2, n;
};

/// Standard ladder construction: S_z diagonal with entries m, S+- from
/// sqrt(s(s+1) - m(m+-1)), S_x = (S+ + S-)/2, S_y = (S+ - S-)/(2i).
OperatorTriple build_spin_operators(SpinLabel label);

/// v_x S_x + v_y S_y + v_z S_z. For unit v this is the dimensionless
/// projection X_n with spectrum {-s, ..., +s}.
Matrix dot_operator(const Vector3& v, const OperatorTriple& ops);

Matrix commutator(const Matrix& a, const Matrix& b);

/// Max-norm residual of [a.S, b.S] = i (a x b).S.
double cross_identity_residual(const Vector3& a, const Vector3& b,
                               const OperatorTriple& ops);

/// Max-norm residual of the componentwise identity [S, B.S] = -i S x B.
double spin_cross_field_residual(const Vector3& field,
                                 const OperatorTriple& ops);

/// Max-norm residual of sum_{j=0}^{k-1} X^j [X,H] X^{k-1-j} = [X^k, H],
/// both sides evaluated literally.
double telescoping_residual(const Matrix& x, const Matrix& h, int k);

LocalFrame local_frame(const Vector3& n);

/// Ladder operators S_{n,+-} = S_{n,x} +- i S_{n,y} in the local frame of n.
/// Requires |n| = 1 within 1e-12.
std::pair<Matrix, Matrix> local_ladder_operators(const Vector3& n,
                                                 const OperatorTriple& ops);

}  // namespace cohspin
