#include "cohspin/verification.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cohspin/correspondence.hpp"
#include "cohspin/csv.hpp"
#include "cohspin/dynamics.hpp"
#include "cohspin/mixtures.hpp"
#include "cohspin/rng.hpp"

namespace cohspin {

namespace {

constexpr double kPi = std::numbers::pi;

// The per-identity tolerances are stated for s <= 6; operator entries grow
// like s, so identities evaluated at larger spins get a documented
// quadratic allowance.
double spin_scale(SpinLabel label) {
  return std::max(1.0, (label.s() / 6.0) * (label.s() / 6.0));
}

std::string describe_spin(SpinLabel label) {
  return "twice_s=" + std::to_string(label.twice_s);
}

std::string describe_angles(SpinLabel label, DirectionAngles a) {
  return describe_spin(label) + " theta=" + format_double(a.theta) +
         " phi=" + format_double(a.phi);
}

std::string describe_vector(const char* name, const Vector3& v) {
  return std::string(name) + "=(" + format_double(v.x()) + "," +
         format_double(v.y()) + "," + format_double(v.z()) + ")";
}

struct Worst {
  double residual = 0.0;
  std::string input;

  void offer(double r, const std::string& description) {
    if (r >= residual) {
      residual = r;
      input = description;
    }
  }
};

IdentityResult finish(const std::string& name, const Worst& worst,
                      double tolerance) {
  return {name, worst.residual, tolerance, worst.residual <= tolerance,
          worst.input};
}

}  // namespace

VerificationReport run_verification(int max_twice_s, std::uint64_t seed,
                                    const OperatorFactory& factory) {
  if (max_twice_s < 1)
    throw std::invalid_argument("max_twice_s must be at least 1");

  const OperatorFactory build =
      factory ? factory : [](SpinLabel label) { return build_spin_operators(label); };

  std::vector<SpinLabel> labels;
  std::vector<OperatorTriple> triples;
  for (int twice_s = 1; twice_s <= max_twice_s; ++twice_s) {
    labels.push_back(spin(twice_s));
    triples.push_back(build(labels.back()));
  }

  Rng rng(seed);
  VerificationReport report;
  report.max_twice_s = max_twice_s;
  report.seed = seed;

  // cyclic commutation relations plus the quadratic invariant
  {
    Worst worst;
    double tol = 1e-12;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const OperatorTriple& ops = triples[i];
      const Complex im(0.0, 1.0);
      const double s = labels[i].s();
      const Matrix casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
      const double r = std::max(
          {max_abs(commutator(ops.sx, ops.sy) - im * ops.sz),
           max_abs(commutator(ops.sy, ops.sz) - im * ops.sx),
           max_abs(commutator(ops.sz, ops.sx) - im * ops.sy),
           max_abs(casimir - s * (s + 1.0) *
                                 Matrix::Identity(ops.dimension(),
                                                  ops.dimension()))});
      worst.offer(r / spin_scale(labels[i]), describe_spin(labels[i]));
    }
    report.identities.push_back(finish("su2_commutators", worst, tol));
  }

  // [a.S, b.S] = i (a x b).S
  {
    Worst worst;
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (int trial = 0; trial < 20; ++trial) {
        const Vector3 a = rng.unit_vector();
        const Vector3 b = rng.unit_vector();
        const double r = cross_identity_residual(a, b, triples[i]);
        worst.offer(r / spin_scale(labels[i]),
                    describe_spin(labels[i]) + " " + describe_vector("a", a) +
                        " " + describe_vector("b", b));
      }
    report.identities.push_back(
        finish("cross_product_commutator", worst, 1e-12));
  }

  // [S, B.S] = -i S x B, componentwise
  {
    Worst worst;
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (int trial = 0; trial < 20; ++trial) {
        const Vector3 field = rng.vector_in_cube(2.0);
        const double r = spin_cross_field_residual(field, triples[i]);
        worst.offer(r / spin_scale(labels[i]),
                    describe_spin(labels[i]) + " " +
                        describe_vector("B", field));
      }
    report.identities.push_back(finish("spin_cross_field", worst, 1e-12));
  }

  // sum_j X^j [X,H] X^{k-1-j} = [X^k, H] for generic complex matrices
  {
    Worst worst;
    for (int trial = 0; trial < 50; ++trial) {
      const int dim = rng.uniform_int(2, 8);
      const int k = rng.uniform_int(1, 6);
      const Matrix x = rng.matrix_unit_disc(dim);
      const Matrix h = rng.matrix_unit_disc(dim);
      const double r = telescoping_residual(x, h, k);
      worst.offer(r, "dim=" + std::to_string(dim) + " k=" + std::to_string(k) +
                         " trial=" + std::to_string(trial));
    }
    report.identities.push_back(
        finish("power_commutator_telescoping", worst, 1e-10));
  }

  // product form of the projector vs the explicit outer product
  {
    Worst worst;
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (int trial = 0; trial < 30; ++trial) {
        const DirectionAngles angles = rng.angles();
        const CoherentKet ket = ket_from_angles(labels[i], angles);
        const DensityMatrix poly =
            projector_polynomial(labels[i], angles.unit());
        const double r = max_abs(poly.entries - projector_outer(ket).entries);
        worst.offer(r / spin_scale(labels[i]),
                    describe_angles(labels[i], angles));
      }
    report.identities.push_back(
        finish("projector_product_vs_outer", worst, 1e-10));
  }

  // X_n ket = s ket and S_{n,+} ket = 0
  {
    Worst worst;
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (int trial = 0; trial < 30; ++trial) {
        const DirectionAngles angles = rng.angles();
        const CoherentKet ket = ket_from_angles(labels[i], angles);
        const auto [eigen_res, raise_res] =
            highest_weight_residuals(ket, triples[i]);
        worst.offer(std::max(eigen_res, raise_res) / spin_scale(labels[i]),
                    describe_angles(labels[i], angles));
      }
    report.identities.push_back(finish("highest_weight_state", worst, 1e-11));
  }

  // n -> projector -> expectation -> n round trip
  {
    Worst worst;
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (int trial = 0; trial < 30; ++trial) {
        const Vector3 n = rng.unit_vector();
        const std::string input =
            describe_spin(labels[i]) + " " + describe_vector("n", n);
        try {
          const DensityMatrix rho = projector_polynomial(labels[i], n);
          const ClassicalState back =
              direction_from_density(rho, labels[i], triples[i]);
          worst.offer((back.n - n).norm() / spin_scale(labels[i]), input);
        } catch (const std::exception& e) {
          worst.offer(std::numeric_limits<double>::max(),
                      input + " (" + e.what() + ")");
        }
      }
    report.identities.push_back(finish("direction_round_trip", worst, 1e-10));
  }

  // d<S>/dt = gamma <S> x B on a precession trajectory, central differences
  {
    const SpinLabel label = labels.front();
    const OperatorTriple& ops = triples.front();
    const double gamma = 2.0 * kPi;
    FieldSchedule schedule{{{1.0, Vector3(0.0, 0.0, 1.0)}}, gamma};
    const CoherentKet ket =
        ket_from_angles(label, DirectionAngles{0.5 * kPi, 0.0});
    Worst worst;
    const char* input = "twice_s=1 n0=x B=z gamma=2pi h=T/2000";
    try {
      const Trajectory quantum =
          evolve_density(QuantumState{projector_outer(ket)}, schedule,
                         1.0 / 2000.0, 1, ops);
      worst.offer(ehrenfest_residual(quantum, schedule, ops), input);
    } catch (const std::exception& e) {
      worst.offer(std::numeric_limits<double>::max(),
                  std::string(input) + " (" + e.what() + ")");
    }
    report.identities.push_back(
        finish("ehrenfest_derivative", worst, 1e-6 * gamma));
  }

  for (const IdentityResult& identity : report.identities)
    report.pass = report.pass && identity.pass;
  return report;
}

nlohmann::json verification_json(const VerificationReport& report) {
  nlohmann::json identities = nlohmann::json::array();
  for (const IdentityResult& identity : report.identities) {
    nlohmann::json j;
    j["name"] = identity.name;
    j["worst_residual"] = identity.worst_residual;
    j["tolerance"] = identity.tolerance;
    j["pass"] = identity.pass;
    j["worst_input"] = identity.worst_input;
    identities.push_back(j);
  }
  nlohmann::json j;
  j["schema_version"] = 1;
  j["max_twice_s"] = report.max_twice_s;
  j["seed"] = report.seed;
  j["identities"] = identities;
  j["pass"] = report.pass;
  return j;
}

}  // namespace cohspin
