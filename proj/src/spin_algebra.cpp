#include "cohspin/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace cohspin {

namespace {

void check_same_dimension(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix dimensions disagree");
}

}  // namespace

OperatorTriple build_spin_operators(SpinLabel label) {
  const int dim = label.dimension();
  const double s = label.s();

  Matrix sp = Matrix::Zero(dim, dim);
  Matrix sz = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    // basis ordered m = +s, s-1, ..., -s
    const double m = s - i;
    sz(i, i) = m;
    if (i > 0) sp(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const Matrix sm = sp.adjoint();

  OperatorTriple ops;
  ops.sx = 0.5 * (sp + sm);
  ops.sy = Complex(0.0, -0.5) * (sp - sm);
  ops.sz = std::move(sz);
  return ops;
}

Matrix dot_operator(const Vector3& v, const OperatorTriple& ops) {
  check_same_dimension(ops.sx, ops.sz);
  return v.x() * ops.sx + v.y() * ops.sy + v.z() * ops.sz;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  check_same_dimension(a, b);
  return a * b - b * a;
}

double cross_identity_residual(const Vector3& a, const Vector3& b,
                               const OperatorTriple& ops) {
  const Matrix lhs = commutator(dot_operator(a, ops), dot_operator(b, ops));
  const Matrix rhs = Complex(0.0, 1.0) * dot_operator(a.cross(b), ops);
  return max_abs(lhs - rhs);
}

double spin_cross_field_residual(const Vector3& field,
                                 const OperatorTriple& ops) {
  const Matrix b_dot_s = dot_operator(field, ops);
  // componentwise: (S x B)_i = eps_ijk S_j B_k
  const Matrix cross_x = ops.sy * field.z() - ops.sz * field.y();
  const Matrix cross_y = ops.sz * field.x() - ops.sx * field.z();
  const Matrix cross_z = ops.sx * field.y() - ops.sy * field.x();

  const Complex mi(0.0, -1.0);
  double r = max_abs(commutator(ops.sx, b_dot_s) - mi * cross_x);
  r = std::max(r, max_abs(commutator(ops.sy, b_dot_s) - mi * cross_y));
  r = std::max(r, max_abs(commutator(ops.sz, b_dot_s) - mi * cross_z));
  return r;
}

double telescoping_residual(const Matrix& x, const Matrix& h, int k) {
  check_same_dimension(x, h);
  if (k < 1) throw std::invalid_argument("telescoping_residual requires k >= 1");

  const Matrix inner = commutator(x, h);
  const int dim = static_cast<int>(x.rows());

  // powers X^0 .. X^{k-1}
  std::vector<Matrix> pow(k);
  pow[0] = Matrix::Identity(dim, dim);
  for (int j = 1; j < k; ++j) pow[j] = pow[j - 1] * x;

  Matrix lhs = Matrix::Zero(dim, dim);
  for (int j = 0; j < k; ++j) lhs += pow[j] * inner * pow[k - 1 - j];

  const Matrix xk = pow[k - 1] * x;
  return max_abs(lhs - commutator(xk, h));
}

LocalFrame local_frame(const Vector3& n) {
  LocalFrame frame;
  frame.n = n;
  const Vector3 z_cross_n = Vector3::UnitZ().cross(n);
  if (z_cross_n.norm() > 1e-8) {
    frame.e1 = z_cross_n.normalized();
  } else {
    frame.e1 = Vector3::UnitX();
  }
  frame.e2 = n.cross(frame.e1);
  return frame;
}

std::pair<Matrix, Matrix> local_ladder_operators(const Vector3& n,
                                                 const OperatorTriple& ops) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("local_ladder_operators requires a unit vector");

  const LocalFrame frame = local_frame(n);
  const Matrix sx_local = dot_operator(frame.e1, ops);
  const Matrix sy_local = dot_operator(frame.e2, ops);
  const Complex i(0.0, 1.0);
  return {sx_local + i * sy_local, sx_local - i * sy_local};
}

}  // namespace cohspin
