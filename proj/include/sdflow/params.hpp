#pragma once

#include <array>

namespace sdflow {

/// Model coefficients and interface stabilization weights.
/// Defaults are all ones with K = I.
struct PhysicalParams {
  double nu = 1.0;        // kinematic viscosity
  double g = 1.0;         // gravitational constant
  double S = 1.0;         // storage coefficient
  std::array<double, 4> K{1.0, 0.0, 0.0, 1.0};  // conductivity, row-major
  double alpha_bj = 1.0;  // Beavers-Joseph-Saffman-Jones coefficient
  double gamma_f = 1.0;
  double gamma_p = 1.0;

  /// Smallest eigenvalue of the symmetric part of K.
  double k_min() const;
  /// Throws std::invalid_argument on non-positive coefficients, non-SPD K
  /// or negative stabilization weights.
  void validate() const;

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

}  // namespace sdflow
