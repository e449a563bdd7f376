#pragma once

#include <array>
#include <string>
#include <string_view>

#include "sdflow/mesh.hpp"
#include "sdflow/params.hpp"

namespace sdflow {

enum class CaseId { Example1, Example2, Example3 };

std::string_view to_string(CaseId id);
/// Accepts "1", "example1", "Example1" (and likewise for 2, 3).
CaseId parse_case(std::string_view text);

/// A closed-form solution of the coupled system together with the
/// coefficients under which its forcing is derived.
struct ManufacturedCase {
  CaseId id = CaseId::Example1;
  PhysicalParams params;

  bool steady() const { return id == CaseId::Example2; }
};

using Mat2 = std::array<double, 4>;  // row-major

struct VelocityJet {
  Point2 value;
  Mat2 grad{};  // grad[2*i + j] = d u_i / d x_j
  Point2 laplacian;
  Point2 dt;
};

struct PressureJet {
  double value = 0.0;
  Point2 grad;
};

struct HeadJet {
  double value = 0.0;
  Point2 grad;
  Mat2 hessian{};
  double dt = 0.0;
};

VelocityJet velocity_jet(CaseId id, Point2 x, double t);
PressureJet pressure_jet(CaseId id, Point2 x, double t);
HeadJet head_jet(CaseId id, Point2 x, double t);

struct ExactValues {
  Point2 u;
  double p = 0.0;
  double phi = 0.0;
};

/// Fluid fields are meaningful on the closure of (0,1)x(1,2), the head on
/// (0,1)x(0,1); all three are evaluated at the same point.
ExactValues exact_eval(const ManufacturedCase& mc, Point2 x, double t);

/// f = du/dt - nu Lap u + grad p. With include_time_derivative = false the
/// du/dt part is dropped, which yields the steady problem solved by the
/// exact fields frozen at time t.
Point2 fluid_forcing(const ManufacturedCase& mc, Point2 x, double t,
                     bool include_time_derivative = true);

/// f = S dphi/dt - div(K grad phi).
double porous_forcing(const ManufacturedCase& mc, Point2 x, double t,
                      bool include_time_derivative = true);

/// Defects of the three interface conditions under the exact solution,
/// with the traction measured by the gradient-form pseudo-stress
/// nu (grad u) n - p n that matches the assembled viscous operator.
struct InterfaceResiduals {
  double mass = 0.0;           // u.n + (K grad phi).n
  double tangential = 0.0;     // -tau.(sigma n) - alpha_bj u.tau
  double normal_stress = 0.0;  // -n.(sigma n) - g phi
};

/// normal is the unit outward normal of the fluid region; tau = (-n_y, n_x).
InterfaceResiduals interface_residuals(const ManufacturedCase& mc, Point2 x, double t,
                                       Point2 normal = {0.0, -1.0});

}  // namespace sdflow
