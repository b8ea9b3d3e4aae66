#include "cohspin/mixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace cohspin {

void validate_ensemble(const CoherentEnsemble& ensemble) {
  if (ensemble.components.empty())
    throw std::invalid_argument("ensemble needs at least one component");
  double total = 0.0;
  for (const WeightedDirection& wd : ensemble.components) {
    if (!(wd.weight >= 0.0) || !std::isfinite(wd.weight))
      throw std::invalid_argument("ensemble weights must be non-negative");
    total += wd.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble weights must sum to 1");
}

DensityMatrix mix(const CoherentEnsemble& ensemble, const OperatorTriple& ops) {
  validate_ensemble(ensemble);
  if (ops.dimension() != ensemble.label.dimension())
    throw std::invalid_argument("ensemble and operators disagree");

  const int dim = ensemble.label.dimension();
  Matrix rho = Matrix::Zero(dim, dim);
  for (const WeightedDirection& wd : ensemble.components) {
    const CoherentKet ket = ket_from_angles(ensemble.label, wd.angles);
    rho += wd.weight * projector_outer(ket).entries;
  }
  return DensityMatrix{std::move(rho), ensemble.label};
}

std::pair<Trajectory, Trajectory> evolve_mixture(
    const CoherentEnsemble& ensemble, const FieldSchedule& schedule, double dt,
    int sample_every, const OperatorTriple& ops) {
  validate_ensemble(ensemble);

  // route (a): evolve the mixed density matrix in one go
  Trajectory mixed = evolve_density(QuantumState{mix(ensemble, ops)}, schedule,
                                    dt, sample_every, ops);

  // route (b): evolve every component projector separately, recombine
  std::vector<Trajectory> parts;
  parts.reserve(ensemble.components.size());
  for (const WeightedDirection& wd : ensemble.components) {
    const CoherentKet ket = ket_from_angles(ensemble.label, wd.angles);
    parts.push_back(evolve_density(QuantumState{projector_outer(ket)}, schedule,
                                   dt, sample_every, ops));
  }

  Trajectory recombined;
  recombined.samples.reserve(mixed.samples.size());
  for (std::size_t i = 0; i < mixed.samples.size(); ++i) {
    const int dim = ensemble.label.dimension();
    Matrix rho = Matrix::Zero(dim, dim);
    for (std::size_t c = 0; c < parts.size(); ++c)
      rho += ensemble.components[c].weight *
             parts[c].samples[i].quantum->rho.entries;
    recombined.samples.push_back({mixed.samples[i].t, std::nullopt,
                                  QuantumState{DensityMatrix{
                                      std::move(rho), ensemble.label}},
                                  mixed.samples[i].segment_boundary});
  }
  return {std::move(mixed), std::move(recombined)};
}

}  // namespace cohspin
