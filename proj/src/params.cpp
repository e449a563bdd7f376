#include "sdflow/params.hpp"

#include <cmath>
#include <stdexcept>

namespace sdflow {

double PhysicalParams::k_min() const {
  const double a = K[0];
  const double d = K[3];
  const double b = 0.5 * (K[1] + K[2]);
  const double mean = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return mean - rad;
}

void PhysicalParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
  if (!(S > 0.0)) throw std::invalid_argument("S must be positive");
  if (!(alpha_bj >= 0.0)) throw std::invalid_argument("alpha_bj must be non-negative");
  if (!(gamma_f >= 0.0) || !(gamma_p >= 0.0)) {
    throw std::invalid_argument("stabilization weights gamma_f, gamma_p must be >= 0");
  }
  if (std::abs(K[1] - K[2]) > 1e-14 * (std::abs(K[1]) + std::abs(K[2]) + 1.0)) {
    throw std::invalid_argument("conductivity tensor K must be symmetric");
  }
  if (!(k_min() > 0.0)) {
    throw std::invalid_argument("conductivity tensor K must be positive definite");
  }
}

}  // namespace sdflow
