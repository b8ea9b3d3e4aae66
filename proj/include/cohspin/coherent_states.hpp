#pragma once

#include <optional>
#include <vector>

#include "cohspin/spin_algebra.hpp"
#include "cohspin/types.hpp"

namespace cohspin {

/// Polar/azimuthal angles, theta in [0, pi], phi in [0, 2pi).
struct DirectionAngles {
  double theta = 0.0;
  double phi = 0.0;

  Vector3 unit() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
  }
};

DirectionAngles angles_from_unit(const Vector3& n);

/// Spin coherent state |n(theta,phi)> in the |s,m> basis, m descending.
struct CoherentKet {
  Ket amplitudes;
  SpinLabel label;
  DirectionAngles source_angles;
};

struct DensityMatrix {
  Matrix entries;
  SpinLabel label;

  double trace_real() const { return entries.trace().real(); }
};

/// Coefficients a_0..a_{2s} of the projector written as sum_k a_k X_n^k.
/// They depend only on s, never on the direction.
struct ProjectorPolynomial {
  std::vector<double> coefficients;
};

/// Reduced fraction; the exact form of a projector-polynomial coefficient.
struct Rational {
  long long num = 0;
  long long den = 1;

  bool operator==(const Rational&) const = default;
};

/// Multiset of 2s unit vectors (stars) representing a pure state up to
/// global phase.
struct MajoranaConstellation {
  std::vector<Vector3> stars;
};

/// Amplitudes c_m = sqrt(C(2s, s+m)) e^{i(s-m)phi} cos^{s+m}(theta/2)
/// sin^{s-m}(theta/2), evaluated exactly as written.
CoherentKet ket_from_angles(SpinLabel label, DirectionAngles angles);

/// Rank-one projector |ket><ket|.
DensityMatrix projector_outer(const CoherentKet& ket);

/// The product form prod_{m'=-s}^{s-1} (X_n - m' I)/(s - m'), evaluated
/// literally as 2s matrix factors. Requires |n| = 1 within 1e-12.
DensityMatrix projector_polynomial(SpinLabel label, const Vector3& n);

/// Expands the product over exact rationals, then converts to double.
ProjectorPolynomial polynomial_coefficients(SpinLabel label);

/// Exact-rational coefficients, reduced to lowest terms.
std::vector<Rational> polynomial_coefficients_exact(SpinLabel label);

/// (||X_n ket - s ket||_2, ||S_{n,+} ket||_2) for the ket's own direction.
std::pair<double, double> highest_weight_residuals(const CoherentKet& ket,
                                                   const OperatorTriple& ops);

/// Stars of the characteristic polynomial
/// P(zeta) = sum_m (-1)^{s-m} sqrt(C(2s, s+m)) c_m zeta^{s+m}; roots via a
/// balanced companion matrix, degree deficiency mapping to the south pole.
MajoranaConstellation majorana_constellation(const Ket& amplitudes,
                                             SpinLabel label);

/// Angles (theta, phi) with |<n|ket>| >= 1 - tol if the ray is coherent,
/// std::nullopt otherwise. The candidate direction is the star centroid.
std::optional<DirectionAngles> coherent_fit(const Ket& amplitudes,
                                            SpinLabel label,
                                            double tol = 1e-9);

}  // namespace cohspin
