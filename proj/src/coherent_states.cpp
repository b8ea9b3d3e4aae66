#include "cohspin/coherent_states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cohspin {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  // exact in double for n <= 28 (values stay below 2^53)
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

void check_angles(const DirectionAngles& angles) {
  if (!(angles.theta >= 0.0 && angles.theta <= kPi))
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (!(angles.phi >= 0.0 && angles.phi < 2.0 * kPi))
    throw std::invalid_argument("phi must lie in [0, 2pi)");
}

using Int128 = __int128;

Int128 gcd128(Int128 a, Int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long to_long_long(Int128 v) {
  constexpr Int128 lo = std::numeric_limits<long long>::min();
  constexpr Int128 hi = std::numeric_limits<long long>::max();
  if (v < lo || v > hi)
    throw std::overflow_error(
        "exact projector coefficients overflow 64-bit rationals; "
        "supported up to twice_s = 20");
  return static_cast<long long>(v);
}

}  // namespace

DirectionAngles angles_from_unit(const Vector3& n) {
  DirectionAngles angles;
  angles.theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  angles.phi = std::atan2(n.y(), n.x());
  if (angles.phi < 0.0) angles.phi += 2.0 * kPi;
  if (angles.phi >= 2.0 * kPi) angles.phi = 0.0;
  return angles;
}

CoherentKet ket_from_angles(SpinLabel label, DirectionAngles angles) {
  check_angles(angles);
  const int dim = label.dimension();
  const double half = 0.5 * angles.theta;
  const double c = std::cos(half);
  const double sn = std::sin(half);

  CoherentKet ket;
  ket.label = label;
  ket.source_angles = angles;
  ket.amplitudes = Ket(dim);
  for (int i = 0; i < dim; ++i) {
    // index i holds m = s - i, so s+m = 2s-i and s-m = i
    const int s_plus_m = label.twice_s - i;
    const int s_minus_m = i;
    const double mag = std::sqrt(binomial(label.twice_s, s_plus_m)) *
                       ipow(c, s_plus_m) * ipow(sn, s_minus_m);
    ket.amplitudes(i) = std::polar(mag, s_minus_m * angles.phi);
  }
  return ket;
}

DensityMatrix projector_outer(const CoherentKet& ket) {
  DensityMatrix rho;
  rho.label = ket.label;
  rho.entries = ket.amplitudes * ket.amplitudes.adjoint();
  return rho;
}

DensityMatrix projector_polynomial(SpinLabel label, const Vector3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("projector_polynomial requires a unit vector");

  const OperatorTriple ops = build_spin_operators(label);
  const Matrix x = dot_operator(n, ops);
  const int dim = label.dimension();
  const double s = label.s();

  Matrix rho = Matrix::Identity(dim, dim);
  for (int j = 0; j < label.twice_s; ++j) {
    const double m_prime = -s + j;
    rho = rho * ((x - m_prime * Matrix::Identity(dim, dim)) / (s - m_prime));
  }
  return DensityMatrix{std::move(rho), label};
}

std::vector<Rational> polynomial_coefficients_exact(SpinLabel label) {
  const int n = label.twice_s;
  // The reduced denominators first exceed 64 bits at twice_s = 21 (the worst
  // one at 20 is 20! ~ 2.4e18), and past 28 even the 128-bit intermediates
  // (2^n n! and the scaled numerators) would wrap, so refuse early instead of
  // relying on signed overflow.
  if (n > 20)
    throw std::overflow_error(
        "exact projector coefficients overflow 64-bit rationals; "
        "supported up to twice_s = 20");

  // Work in u = 2x so every root 2m' is an integer:
  //   prod_j (x - m'_j) = 2^{-2s} prod_j (u - mu_j),  mu_j = -2s + 2j.
  std::vector<Int128> num(n + 1, 0);
  num[0] = 1;
  int degree = 0;
  for (int j = 0; j < n; ++j) {
    const Int128 mu = -n + 2 * j;
    ++degree;
    for (int k = degree; k >= 1; --k) num[k] = num[k - 1] - mu * num[k];
    num[0] = -mu * num[0];
  }

  // denominator prod_j (s - m'_j) = 2^{-2s} prod_j (2s - mu_j)
  Int128 den = 1;
  for (int j = 0; j < n; ++j) den *= Int128(n) - (-n + 2 * j);

  // a_k = num_k 2^k / den, the 2^{-2s} factors cancel
  std::vector<Rational> out(n + 1);
  Int128 two_k = 1;
  for (int k = 0; k <= n; ++k) {
    Int128 a = num[k] * two_k;
    Int128 b = den;
    const Int128 g = gcd128(a, b);
    if (g != 0) {
      a /= g;
      b /= g;
    }
    if (b < 0) {
      a = -a;
      b = -b;
    }
    if (a == 0) b = 1;
    out[k] = Rational{to_long_long(a), to_long_long(b)};
    two_k *= 2;
  }
  return out;
}

ProjectorPolynomial polynomial_coefficients(SpinLabel label) {
  const std::vector<Rational> exact = polynomial_coefficients_exact(label);
  ProjectorPolynomial poly;
  poly.coefficients.reserve(exact.size());
  for (const Rational& r : exact)
    poly.coefficients.push_back(static_cast<double>(r.num) /
                                static_cast<double>(r.den));
  return poly;
}

std::pair<double, double> highest_weight_residuals(const CoherentKet& ket,
                                                   const OperatorTriple& ops) {
  if (ops.dimension() != ket.amplitudes.size())
    throw std::invalid_argument("operator and ket dimensions disagree");

  const Vector3 n = ket.source_angles.unit();
  const Matrix x = dot_operator(n, ops);
  const double eigen_residual =
      (x * ket.amplitudes - ket.label.s() * ket.amplitudes).norm();
  const auto [raise, lower] = local_ladder_operators(n, ops);
  (void)lower;
  return {eigen_residual, (raise * ket.amplitudes).norm()};
}

// --- Majorana constellation ------------------------------------------------

namespace {

Vector3 star_from_zeta(Complex zeta) {
  const double theta = 2.0 * std::atan(std::abs(zeta));
  const double phi = std::arg(zeta);
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Parlett-Reinsch balancing, power-of-two scaling only so roots are
// reproducible bit for bit.
void balance_companion(Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Matrix off = m;
  off.diagonal().setZero();

  const double gamma = 0.9;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double row_norm = off.row(i).cwiseAbs().sum();
      const double col_norm = off.col(i).cwiseAbs().sum();
      if (row_norm == 0.0 || col_norm == 0.0) continue;

      int exponent = 0;
      std::frexp(row_norm / col_norm, &exponent);
      exponent /= 2;
      if (exponent != 0) {
        const double scaled_col = std::ldexp(col_norm, exponent);
        const double scaled_row = std::ldexp(row_norm, -exponent);
        if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
          changed = true;
          off.row(i) *= std::ldexp(1.0, -exponent);
          off.col(i) *= std::ldexp(1.0, exponent);
        }
      }
    }
  }
  off.diagonal() = m.diagonal();
  m = off;
}

std::vector<Complex> companion_roots(const std::vector<Complex>& coeffs) {
  // coeffs ascending, leading coefficient nonzero
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-coeffs[0] / coeffs[1]};

  Matrix companion = Matrix::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i)
    companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  balance_companion(companion);

  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("companion eigenvalue iteration failed");

  std::vector<Complex> roots(degree);
  for (int i = 0; i < degree; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots,
                                     Complex lead) {
  std::vector<Complex> p{lead};  // ascending coefficients
  for (const Complex& r : roots) {
    p.push_back(Complex(0.0));
    for (int k = static_cast<int>(p.size()) - 1; k >= 1; --k)
      p[k] = p[k - 1] - r * p[k];
    p[0] *= -r;
  }
  return p;
}

// A QR eigensolver splits an m-fold root into a ring of radius
// O(eps^(1/m)), far wider than the roots' true uncertainty, while the ring's
// chart mean recovers the multiple root to O(eps). Collapse root clusters
// to their chart mean whenever the collapsed configuration reproduces the
// original coefficients, i.e. whenever the collapse is backward-consistent.
std::vector<Complex> collapse_root_clusters(const std::vector<Complex>& coeffs,
                                            std::vector<Complex> roots) {
  const int n = static_cast<int>(roots.size());
  if (n < 2) return roots;

  std::vector<Vector3> stars(n);
  for (int i = 0; i < n; ++i) stars[i] = star_from_zeta(roots[i]);

  double coeff_scale = 0.0;
  for (const Complex& c : coeffs) coeff_scale = std::max(coeff_scale, std::abs(c));

  const double thresholds[] = {3e-1, 1e-1, 3e-2, 1e-2, 3e-3,
                               1e-3, 3e-4, 1e-4, 1e-5, 1e-6};
  for (const double tau : thresholds) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double ang =
            std::acos(std::clamp(stars[i].dot(stars[j]), -1.0, 1.0));
        if (ang <= tau) parent[find(i)] = find(j);
      }

    std::vector<Complex> candidate = roots;
    bool changed = false;
    for (int rep = 0; rep < n; ++rep) {
      if (find(rep) != rep) continue;
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (find(i) == rep) members.push_back(i);
      if (members.size() < 2) continue;

      // The splitting ring is symmetric in the chart, so the chart mean
      // cancels it; use the inverted chart w = -1/zeta near the south pole
      // where zeta blows up.
      Vector3 rough = Vector3::Zero();
      for (int i : members) rough += stars[i];
      Complex center;
      if (rough.z() >= 0.0) {
        Complex sum = 0.0;
        for (int i : members) sum += roots[i];
        center = sum / static_cast<double>(members.size());
      } else {
        Complex sum = 0.0;
        bool usable = true;
        for (int i : members) {
          if (std::abs(roots[i]) < 1e-280) {
            usable = false;
            break;
          }
          sum += -1.0 / roots[i];
        }
        const Complex w = sum / static_cast<double>(members.size());
        if (!usable || std::abs(w) < 1e-280) continue;
        center = -1.0 / w;
      }
      for (int i : members) candidate[i] = center;
      changed = true;
    }
    if (!changed) continue;

    const std::vector<Complex> rebuilt =
        poly_from_roots(candidate, coeffs.back());
    double err = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      err = std::max(err, std::abs(rebuilt[k] - coeffs[k]));
    if (err <= 1e-9 * coeff_scale) return candidate;
  }
  return roots;
}

}  // namespace

MajoranaConstellation majorana_constellation(const Ket& amplitudes,
                                             SpinLabel label) {
  if (amplitudes.size() != label.dimension())
    throw std::invalid_argument("amplitude count does not match 2s+1");
  if (amplitudes.norm() < 1e-12)
    throw std::invalid_argument("zero vector has no constellation");

  const int n = label.twice_s;
  // coefficient of zeta^{s+m} is (-1)^{s-m} sqrt(C(2s,s+m)) c_m;
  // amplitude index i holds m = s-i, so the power is 2s-i
  std::vector<Complex> coeffs(n + 1, Complex(0.0));
  for (int i = 0; i <= n; ++i) {
    const int power = n - i;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    coeffs[power] = sign * std::sqrt(binomial(n, power)) * amplitudes(i);
  }

  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));

  // degree deficiency: each missing leading power is a star at the south pole
  int degree = n;
  while (degree > 0 && std::abs(coeffs[degree]) <= 1e-14 * scale) --degree;
  const int deficiency = n - degree;

  std::vector<Complex> trimmed(coeffs.begin(), coeffs.begin() + degree + 1);
  std::vector<Complex> roots = companion_roots(trimmed);
  roots = collapse_root_clusters(trimmed, std::move(roots));

  MajoranaConstellation constellation;
  constellation.stars.reserve(n);
  for (const Complex& zeta : roots)
    constellation.stars.push_back(star_from_zeta(zeta));
  for (int i = 0; i < deficiency; ++i)
    constellation.stars.push_back(Vector3(0.0, 0.0, -1.0));

  std::sort(constellation.stars.begin(), constellation.stars.end(),
            [](const Vector3& a, const Vector3& b) {
              const DirectionAngles aa = angles_from_unit(a);
              const DirectionAngles bb = angles_from_unit(b);
              if (aa.theta != bb.theta) return aa.theta < bb.theta;
              return aa.phi < bb.phi;
            });
  return constellation;
}

std::optional<DirectionAngles> coherent_fit(const Ket& amplitudes,
                                            SpinLabel label, double tol) {
  if (std::abs(amplitudes.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("coherent_fit requires a normalized ket");
  if (label.twice_s == 0) return DirectionAngles{0.0, 0.0};

  const MajoranaConstellation constellation =
      majorana_constellation(amplitudes, label);
  Vector3 centroid = Vector3::Zero();
  for (const Vector3& star : constellation.stars) centroid += star;
  centroid /= static_cast<double>(constellation.stars.size());
  if (centroid.norm() < 1e-12) return std::nullopt;

  const DirectionAngles angles = angles_from_unit(centroid.normalized());
  const CoherentKet candidate = ket_from_angles(label, angles);
  const double overlap = std::abs(candidate.amplitudes.dot(amplitudes));
  if (overlap >= 1.0 - tol) return angles;
  return std::nullopt;
}

}  // namespace cohspin
