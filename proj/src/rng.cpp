#include "cohspin/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cohspin {

double Rng::uniform() {
  // top 53 bits -> [0, 1)
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const std::uint64_t range =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / range * range;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return static_cast<int>(lo + static_cast<long long>(v % range));
}

double Rng::normal() {
  // Box-Muller, one variate per call so the stream layout stays obvious
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Vector3 Rng::unit_vector() {
  const double z = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Vector3 Rng::vector_in_cube(double half_width) {
  return {uniform(-half_width, half_width), uniform(-half_width, half_width),
          uniform(-half_width, half_width)};
}

DirectionAngles Rng::angles() {
  // area-uniform over the sphere
  const double z = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * std::numbers::pi);
  return {std::acos(z), phi};
}

Ket Rng::ket(int dim) {
  Ket k(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal();
    const double im = normal();
    k(i) = Complex(re, im);
  }
  return k / k.norm();
}

Matrix Rng::matrix_unit_disc(int dim) {
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      double x, y;
      do {
        x = uniform(-1.0, 1.0);
        y = uniform(-1.0, 1.0);
      } while (x * x + y * y > 1.0);
      m(r, c) = Complex(x, y);
    }
  return m;
}

}  // namespace cohspin
