#pragma once

#include <cstdint>
#include <random>

#include "cohspin/coherent_states.hpp"
#include "cohspin/types.hpp"

namespace cohspin {

/// Deterministic random source. Distributions are hand-rolled on top of
/// mt19937_64 because the standard distribution objects are free to differ
/// between library implementations, and reproducibility of reports is a
/// contract here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
  double normal();

  Vector3 unit_vector();
  Vector3 vector_in_cube(double half_width);
  DirectionAngles angles();
  Ket ket(int dim);                    // normalized, Gaussian entries
  Matrix matrix_unit_disc(int dim);    // entries uniform in the unit disc

 private:
  std::mt19937_64 eng_;
};

}  // namespace cohspin
