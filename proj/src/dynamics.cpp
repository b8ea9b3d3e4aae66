#include "cohspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

namespace cohspin {

namespace {

// One shared grid walker so classical, quantum and closed-form trajectories
// land on bit-identical time stamps. Within a segment the interior stamps
// are seg_start + j*dt and the last step is shortened to end exactly on the
// boundary. advance(segment_index, h, tau_after, final_step) moves the
// caller's state; sample(t, boundary) fires at t=0, every sample_every-th
// step and every segment end.
template <typename AdvanceFn, typename SampleFn>
void walk_schedule(const FieldSchedule& schedule, double dt, int sample_every,
                   AdvanceFn&& advance, SampleFn&& sample) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (sample_every < 1)
    throw std::invalid_argument("sample_every must be at least 1");

  sample(0.0, true);
  double seg_start = 0.0;
  for (std::size_t si = 0; si < schedule.segments.size(); ++si) {
    const FieldSegment& seg = schedule.segments[si];
    const int n_steps = std::max(
        1, static_cast<int>(std::ceil(seg.duration / dt - 1e-9)));
    for (int j = 1; j <= n_steps; ++j) {
      const bool final_step = (j == n_steps);
      const double h =
          final_step ? seg.duration - (n_steps - 1) * dt : dt;
      const double tau_after = final_step ? seg.duration : j * dt;
      const double t_after =
          final_step ? seg_start + seg.duration : seg_start + j * dt;
      advance(si, h, tau_after, final_step);
      if (final_step || j % sample_every == 0) sample(t_after, final_step);
    }
    seg_start += seg.duration;
  }
}

}  // namespace

double FieldSchedule::total_duration() const {
  double total = 0.0;
  for (const FieldSegment& seg : segments) total += seg.duration;
  return total;
}

Vector3 FieldSchedule::field_at(double t) const {
  if (segments.empty()) throw std::logic_error("empty schedule");
  double end = 0.0;
  for (const FieldSegment& seg : segments) {
    end += seg.duration;
    if (t < end) return seg.field;
  }
  return segments.back().field;
}

void validate_schedule(const FieldSchedule& schedule) {
  if (schedule.segments.empty())
    throw std::invalid_argument("schedule needs at least one segment");
  if (!std::isfinite(schedule.gamma))
    throw std::invalid_argument("gamma must be finite");
  for (const FieldSegment& seg : schedule.segments) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration))
      throw std::invalid_argument("segment durations must be positive");
    if (!seg.field.allFinite())
      throw std::invalid_argument("segment fields must be finite");
  }
}

Matrix zeeman_hamiltonian(const Vector3& field, double gamma,
                          const OperatorTriple& ops) {
  return -gamma * dot_operator(field, ops);
}

Vector3 classical_rhs(const ClassicalState& state, const Vector3& field,
                      double gamma) {
  return gamma * state.n.cross(field);
}

Eigen::Matrix3d rotation_matrix(const Vector3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

ClassicalState exact_classical_rotation(const ClassicalState& n0,
                                        const Vector3& field, double gamma,
                                        double t) {
  const double b = field.norm();
  if (b == 0.0) return n0;
  return {rotation_matrix(field / b, -gamma * b * t) * n0.n};
}

Trajectory integrate_classical(const ClassicalState& n0,
                               const FieldSchedule& schedule, double dt,
                               int sample_every) {
  validate_schedule(schedule);
  Vector3 n = n0.n;
  Trajectory out;
  walk_schedule(
      schedule, dt, sample_every,
      [&](std::size_t si, double h, double, bool) {
        const Vector3& field = schedule.segments[si].field;
        const double gamma = schedule.gamma;
        // explicit Vector3 return: an expression template here would dangle
        auto rhs = [&](const Vector3& y) -> Vector3 {
          return gamma * y.cross(field);
        };
        const Vector3 k1 = rhs(n);
        const Vector3 k2 = rhs(n + 0.5 * h * k1);
        const Vector3 k3 = rhs(n + 0.5 * h * k2);
        const Vector3 k4 = rhs(n + h * k3);
        n += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        n /= n.norm();
      },
      [&](double t, bool boundary) {
        out.samples.push_back(
            {t, ClassicalState{n}, std::nullopt, boundary});
      });
  return out;
}

Trajectory exact_classical_trajectory(const ClassicalState& n0,
                                      const FieldSchedule& schedule, double dt,
                                      int sample_every) {
  validate_schedule(schedule);
  Vector3 seg_anchor = n0.n;  // state at the start of the current segment
  Vector3 n = n0.n;
  Trajectory out;
  walk_schedule(
      schedule, dt, sample_every,
      [&](std::size_t si, double, double tau_after, bool final_step) {
        const FieldSegment& seg = schedule.segments[si];
        n = exact_classical_rotation({seg_anchor}, seg.field, schedule.gamma,
                                     tau_after)
                .n;
        if (final_step) seg_anchor = n;
      },
      [&](double t, bool boundary) {
        out.samples.push_back(
            {t, ClassicalState{n}, std::nullopt, boundary});
      });
  return out;
}

Matrix propagator(const Matrix& h, double dt) {
  const double scale = std::max(1.0, max_abs(h));
  if (max_abs(h - h.adjoint()) > 1e-12 * scale)
    throw std::invalid_argument("propagator requires a Hermitian generator");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  const auto& evals = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  Ket phases(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    phases(i) = std::polar(1.0, -evals(i) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix spin_rotation_unitary(const Vector3& axis, double angle,
                             const OperatorTriple& ops) {
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("rotation axis must be a unit vector");
  return propagator(dot_operator(axis, ops), angle);
}

Trajectory evolve_density(const QuantumState& rho0,
                          const FieldSchedule& schedule, double dt,
                          int sample_every, const OperatorTriple& ops) {
  validate_schedule(schedule);
  if (rho0.rho.entries.rows() != ops.dimension())
    throw std::invalid_argument("density matrix and operators disagree");

  Matrix rho = rho0.rho.entries;
  const SpinLabel label = rho0.rho.label;

  std::size_t cached_segment = static_cast<std::size_t>(-1);
  Matrix u_full;  // exp(-i H dt) for the current segment

  Trajectory out;
  walk_schedule(
      schedule, dt, sample_every,
      [&](std::size_t si, double h, double, bool final_step) {
        const Matrix ham =
            zeeman_hamiltonian(schedule.segments[si].field, schedule.gamma, ops);
        if (si != cached_segment) {
          u_full = propagator(ham, dt);
          cached_segment = si;
        }
        if (final_step && h != dt) {
          const Matrix u_last = propagator(ham, h);
          rho = u_last * rho * u_last.adjoint();
        } else {
          rho = u_full * rho * u_full.adjoint();
        }
      },
      [&](double t, bool boundary) {
        out.samples.push_back(
            {t, std::nullopt, QuantumState{DensityMatrix{rho, label}},
             boundary});
      });
  return out;
}

}  // namespace cohspin
