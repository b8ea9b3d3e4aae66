#include "cohspin/correspondence.hpp"

#include <cmath>
#include <stdexcept>

namespace cohspin {

Vector3 expectation_spin(const DensityMatrix& rho, const OperatorTriple& ops,
                         double hbar) {
  if (rho.entries.rows() != ops.dimension())
    throw std::invalid_argument("density matrix and operators disagree");

  Vector3 e;
  const Matrix* components[3] = {&ops.sx, &ops.sy, &ops.sz};
  for (int i = 0; i < 3; ++i) {
    const Complex trace = (rho.entries * *components[i]).trace();
    if (std::abs(trace.imag()) > 1e-12 * std::max(1.0, std::abs(trace)))
      throw std::invalid_argument("spin expectation came out non-real");
    e(i) = hbar * trace.real();
  }
  return e;
}

ClassicalState direction_from_density(const DensityMatrix& rho,
                                      SpinLabel label,
                                      const OperatorTriple& ops) {
  if (max_abs(rho.entries * rho.entries - rho.entries) > 1e-9)
    throw std::invalid_argument("density matrix is not a rank-one projector");
  if (std::abs(rho.trace_real() - 1.0) > 1e-9)
    throw std::invalid_argument("density matrix trace is not 1");

  const Vector3 e = expectation_spin(rho, ops) / label.s();
  if (e.norm() < 1.0 - 1e-6)
    throw std::invalid_argument(
        "spin expectation is shorter than a coherent direction");
  return {e / e.norm()};
}

CorrespondenceReport verify_trajectory_correspondence(
    const Trajectory& classical, const Trajectory& quantum, SpinLabel label,
    const OperatorTriple& ops) {
  if (classical.samples.size() != quantum.samples.size())
    throw std::invalid_argument("trajectories have different sample counts");

  CorrespondenceReport report;
  report.per_sample_deviation.reserve(classical.samples.size());
  for (std::size_t i = 0; i < classical.samples.size(); ++i) {
    const TrajectorySample& c = classical.samples[i];
    const TrajectorySample& q = quantum.samples[i];
    if (c.t != q.t)
      throw std::invalid_argument("trajectories are on different time grids");
    if (!c.classical || !q.quantum)
      throw std::invalid_argument("sample is missing its state");

    const Vector3 from_rho =
        expectation_spin(q.quantum->rho, ops) / label.s();
    const double deviation = (c.classical->n - from_rho).norm();
    report.per_sample_deviation.push_back(deviation);
    report.max_direction_deviation =
        std::max(report.max_direction_deviation, deviation);
  }

  // Round-trip check on the initial state: read the direction back off rho
  // and rebuild the projector from it. Only meaningful for pure states, so
  // mixtures leave the field at zero.
  const DensityMatrix& rho0 = quantum.samples.front().quantum->rho;
  if (max_abs(rho0.entries * rho0.entries - rho0.entries) <= 1e-9) {
    const ClassicalState n = direction_from_density(rho0, label, ops);
    const CoherentKet ket = ket_from_angles(label, angles_from_unit(n.n));
    report.round_trip_residual =
        max_abs(projector_outer(ket).entries - rho0.entries);
  }
  return report;
}

double ehrenfest_residual(const Trajectory& quantum,
                          const FieldSchedule& schedule,
                          const OperatorTriple& ops) {
  double worst = -1.0;
  const auto& samples = quantum.samples;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    if (samples[i].segment_boundary) continue;  // field jumps there

    const double h_l = samples[i].t - samples[i - 1].t;
    const double h_r = samples[i + 1].t - samples[i].t;
    const Vector3 prev = expectation_spin(samples[i - 1].quantum->rho, ops);
    const Vector3 here = expectation_spin(samples[i].quantum->rho, ops);
    const Vector3 next = expectation_spin(samples[i + 1].quantum->rho, ops);

    // three-point central difference on a possibly non-uniform grid
    const Vector3 derivative = (h_l * h_l * next - h_r * h_r * prev -
                                (h_l * h_l - h_r * h_r) * here) /
                               (h_l * h_r * (h_l + h_r));
    const Vector3 rhs =
        schedule.gamma * here.cross(schedule.field_at(samples[i].t));
    worst = std::max(worst, (derivative - rhs).cwiseAbs().maxCoeff());
  }
  if (worst < 0.0)
    throw std::invalid_argument(
        "ehrenfest check needs at least three samples inside a segment");
  return worst;
}

}  // namespace cohspin
