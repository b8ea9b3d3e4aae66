#pragma once

#include <vector>

#include "cohspin/dynamics.hpp"

namespace cohspin {

struct CorrespondenceReport {
  double max_direction_deviation = 0.0;
  double max_ehrenfest_residual = 0.0;
  bool ehrenfest_evaluated = false;
  double round_trip_residual = 0.0;
  std::vector<double> per_sample_deviation;
};

/// (Tr(rho S_x), Tr(rho S_y), Tr(rho S_z)) scaled by hbar. Rejects rho whose
/// expectation has imaginary part above 1e-12.
Vector3 expectation_spin(const DensityMatrix& rho, const OperatorTriple& ops,
                         double hbar = 1.0);

/// n = Tr(rho S)/s for a coherent projector. Rejects rho that is not
/// idempotent within 1e-9 or whose expectation is shorter than 1 - 1e-6.
ClassicalState direction_from_density(const DensityMatrix& rho, SpinLabel label,
                                      const OperatorTriple& ops);

/// Per-sample distance between the classical direction and Tr(rho S)/s on a
/// shared time grid.
CorrespondenceReport verify_trajectory_correspondence(
    const Trajectory& classical, const Trajectory& quantum, SpinLabel label,
    const OperatorTriple& ops);

/// Max-norm central-difference residual of d<S>/dt = gamma <S> x B at
/// interior samples; segment-boundary samples are excluded because the field
/// jumps there. Requires at least 3 samples per segment.
double ehrenfest_residual(const Trajectory& quantum,
                          const FieldSchedule& schedule,
                          const OperatorTriple& ops);

}  // namespace cohspin
