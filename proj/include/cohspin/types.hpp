#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace cohspin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using Vector3 = Eigen::Vector3d;

/// Spin quantum number stored exactly as the integer 2s, so half-integer
/// spins never touch floating point.
struct SpinLabel {
  int twice_s = 1;

  constexpr double s() const { return 0.5 * twice_s; }
  constexpr int dimension() const { return twice_s + 1; }
};

inline SpinLabel spin(int twice_s) {
  if (twice_s < 0) throw std::invalid_argument("twice_s must be non-negative");
  return SpinLabel{twice_s};
}

/// Entrywise max-abs norm, the residual metric used throughout.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace cohspin
