#pragma once

#include <utility>
#include <vector>

#include "cohspin/correspondence.hpp"
#include "cohspin/dynamics.hpp"

namespace cohspin {

struct WeightedDirection {
  double weight = 1.0;
  DirectionAngles angles;
};

/// Convex combination of coherent projectors, stored as the decomposition
/// it was built from (the decomposition is an input artifact, not unique).
struct CoherentEnsemble {
  std::vector<WeightedDirection> components;
  SpinLabel label;
};

void validate_ensemble(const CoherentEnsemble& ensemble);

/// sum_i p_i |n_i><n_i|. Rejects negative weights or sum != 1 within 1e-12.
DensityMatrix mix(const CoherentEnsemble& ensemble, const OperatorTriple& ops);

/// Evolves (a) the mixed density matrix directly and (b) each component
/// projector separately, recombining per sample. Linearity of the evolution
/// makes the two trajectories agree.
std::pair<Trajectory, Trajectory> evolve_mixture(const CoherentEnsemble& ensemble,
                                                 const FieldSchedule& schedule,
                                                 double dt, int sample_every,
                                                 const OperatorTriple& ops);

}  // namespace cohspin
