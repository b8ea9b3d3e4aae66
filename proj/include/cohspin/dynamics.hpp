#pragma once

#include <optional>
#include <vector>

#include "cohspin/coherent_states.hpp"
#include "cohspin/spin_algebra.hpp"
#include "cohspin/types.hpp"

namespace cohspin {

/// One piecewise-constant field segment: B held fixed for `duration` seconds.
struct FieldSegment {
  double duration = 0.0;  // seconds, strictly positive
  Vector3 field = Vector3::Zero();  // tesla
};

struct FieldSchedule {
  std::vector<FieldSegment> segments;
  double gamma = 0.0;  // rad/(s T), sign free

  double total_duration() const;
  /// Field at time t (segment boundaries belong to the later segment).
  Vector3 field_at(double t) const;
};

void validate_schedule(const FieldSchedule& schedule);

struct ClassicalState {
  Vector3 n = Vector3::UnitZ();
};

struct QuantumState {
  DensityMatrix rho;
};

struct TrajectorySample {
  double t = 0.0;
  std::optional<ClassicalState> classical;
  std::optional<QuantumState> quantum;
  bool segment_boundary = false;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

/// Zeeman generator -gamma B.S in angular-frequency units (operators are
/// stored in units of hbar, so exp(-i H t) propagates directly).
Matrix zeeman_hamiltonian(const Vector3& field, double gamma,
                          const OperatorTriple& ops);

/// Right side of dn/dt = gamma n x B.
Vector3 classical_rhs(const ClassicalState& state, const Vector3& field,
                      double gamma);

/// Closed-form solution for constant B: Rodrigues rotation of n0 about the
/// field axis by angle -gamma |B| t. Exactly norm-preserving.
ClassicalState exact_classical_rotation(const ClassicalState& n0,
                                        const Vector3& field, double gamma,
                                        double t);

/// Classic RK4 with post-step renormalization. Segment boundaries are hit
/// exactly (the final step of each segment is shortened); samples are
/// recorded every sample_every steps plus all segment boundaries.
Trajectory integrate_classical(const ClassicalState& n0,
                               const FieldSchedule& schedule, double dt,
                               int sample_every);

/// Same time grid as integrate_classical but each sample comes from the
/// Rodrigues closed form, so the only error is roundoff.
Trajectory exact_classical_trajectory(const ClassicalState& n0,
                                      const FieldSchedule& schedule, double dt,
                                      int sample_every);

/// U = exp(-i H dt) via Hermitian eigendecomposition. Rejects inputs that
/// are not Hermitian within 1e-12.
Matrix propagator(const Matrix& h, double dt);

/// Steps rho <- U rho U^dagger with one fixed propagator per segment.
/// Shares the time grid of integrate_classical.
Trajectory evolve_density(const QuantumState& rho0,
                          const FieldSchedule& schedule, double dt,
                          int sample_every, const OperatorTriple& ops);

/// 3x3 Rodrigues rotation about a unit axis.
Eigen::Matrix3d rotation_matrix(const Vector3& axis, double angle);

/// Spin-s representation exp(-i angle axis.S) of the same rotation.
Matrix spin_rotation_unitary(const Vector3& axis, double angle,
                             const OperatorTriple& ops);

}  // namespace cohspin
