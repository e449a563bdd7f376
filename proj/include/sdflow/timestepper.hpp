#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdflow/assembly.hpp"
#include "sdflow/linsolve.hpp"
#include "sdflow/mms.hpp"
#include "sdflow/params.hpp"

namespace sdflow {

/// One time slice of the discrete state.
struct TimeLevel {
  Vector u;    // fluid velocity, component blocks
  Vector p;    // fluid pressure, P1 nodes
  Vector phi;  // hydraulic head, P2 nodes
  double t = 0.0;
};

enum class SchemeKind { BDF2, AMB2 };
enum class StartMode {
  Interpolate,    // exact solution at t0 and t1
  Bdf1Bootstrap,  // exact at t0, one backward-Euler step to t1
  ZeroInterior,   // zero interior values, exact boundary data
};

std::string_view to_string(SchemeKind scheme);
SchemeKind parse_scheme(std::string_view text);

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::BDF2;
  double alpha = 0.8;  // AMB2 only, 1/2 < alpha < 1
  double dt = 0.0;
  PhysicalParams params;
  int triangle_degree = 5;
  int edge_degree = 5;
  StartMode start = StartMode::Interpolate;

  /// Throws std::invalid_argument when dt <= 0, alpha is outside (1/2,1)
  /// for AMB2, or the physical parameters are invalid.
  void validate() const;
};

/// Two-step linear multistep weights shared by every scheme:
///   (1/dt) M sum_k mass[k] x^{n+1-k} + (A + N) sum_k implicit[k] x^{n+1-k}
///     = F(t_n + forcing_offset dt) - (Gamma - N) sum_k extrap[k] x^{n-k}
/// where Gamma is the explicit interface coupling and N the stabilization.
struct SchemeCoefficients {
  std::array<double, 3> mass{};
  std::array<double, 3> implicit{};
  std::array<double, 2> extrap{};
  double forcing_offset = 1.0;
};

SchemeCoefficients scheme_coefficients(SchemeKind scheme, double alpha);
SchemeCoefficients bdf1_coefficients();

/// Mesh, spaces and assembled operators for one parameter set.
struct Problem {
  std::shared_ptr<const Discretization> disc;
  std::shared_ptr<const OperatorSet> ops;
  PhysicalParams params;
};

/// The scheme applied to y' = -(a + b) y with a implicit and b extrapolated,
/// started from the exact values at 0 and dt. Returns y(T).
double scalar_model(const SchemeCoefficients& coeffs, double a, double b, double dt,
                    double T);

Problem make_problem(const CoupledMesh& mesh, const PhysicalParams& params,
                     int triangle_degree = 5, int edge_degree = 5);

/// A square system with Dirichlet rows and columns eliminated. The lifting
/// block moves prescribed values to the right-hand side.
class ReducedSystem {
 public:
  ReducedSystem(const SparseMatrix& full, const std::vector<char>& fixed,
                MatrixSymmetry symmetry);

  /// rhs and fixed values are full-length; entries of fixed_values at free
  /// positions are ignored. Returns the full solution.
  Vector solve(const Vector& rhs, const Vector& fixed_values) const;

  int size() const { return full_size_; }

 private:
  int full_size_ = 0;
  std::vector<int> free_;
  std::vector<int> fixed_;
  SparseMatrix lift_;
  std::optional<Factorization> factor_;
};

/// Factorized implicit blocks for one (problem, scheme, dt) triple.
struct StepOperators {
  Problem problem;
  SchemeCoefficients coeffs;
  double dt = 0.0;
  SparseMatrix fluid_implicit;   // A_f + A_bjsj + N_f
  SparseMatrix porous_implicit;  // A_p + N_p
  std::shared_ptr<const ReducedSystem> stokes;  // [[m0/dt M_f + c0 Kf, B^T], [B, 0]]
  std::shared_ptr<const ReducedSystem> darcy;   // m0/dt M_p + c0 Kp
};

StepOperators build_step_operators(const Problem& problem, const SchemeCoefficients& coeffs,
                                   double dt);
StepOperators build_step_operators(const Problem& problem, const SchemeConfig& config);

class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Nodal interpolant of the exact fields at time t.
TimeLevel interpolate_exact(const Discretization& d, const ManufacturedCase& mc, double t);

/// Levels at t0 = 0 and t1 = dt according to config.start.
std::pair<TimeLevel, TimeLevel> initialize(const ManufacturedCase& mc, const Problem& problem,
                                           const SchemeConfig& config);

/// Right-hand side data of one step: loads at the scheme's forcing time and
/// Dirichlet values (full-length; only constrained entries are read) at t_{n+1}.
struct StepData {
  LoadVectors load;
  Vector u_boundary;
  Vector phi_boundary;
};

/// Loads and boundary values of the manufactured solution for the step that
/// starts at t_prev.
StepData manufactured_step_data(const StepOperators& ops, const ManufacturedCase& mc,
                                double t_prev);

/// Advance from (prev2, prev) = (x^{n-1}, x^n) to x^{n+1}. The Stokes and
/// Darcy solves only see levels n and n-1 and are independent.
TimeLevel advance(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                  const StepData& data);
TimeLevel advance(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                  const ManufacturedCase& mc);

TimeLevel bdf2_step(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                    const ManufacturedCase& mc, const SchemeConfig& config);
TimeLevel amb2_step(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                    const ManufacturedCase& mc, const SchemeConfig& config);

/// Steady coupled solve with the exact fields frozen at time t as data.
/// Interface stabilization cancels at steady state and is omitted.
TimeLevel steady_solve(const Problem& problem, const ManufacturedCase& mc, double t = 0.0);

// ---- diagnostics ----------------------------------------------------------

/// <a, b>_S for one block with its (already weighted) mass matrix.
double s_inner(const Vector& a, const Vector& b, const SparseMatrix& mass);

/// |w|_G^2 for w = [v0, v1]: (1/2)|v0|^2 - 2 <v0,v1> + (5/2)|v1|^2.
double g_energy(const Vector& v0, const Vector& v1, const SparseMatrix& mass);
double g_energy(const TimeLevel& v0, const TimeLevel& v1, const OperatorSet& ops);

/// sqrt(sum e_i^2 / N) over nodal values.
double nodal_rms(const Vector& v);
/// rms(num - ref) / rms(ref); falls back to the absolute rms when the
/// reference vanishes identically.
double relative_nodal_error(const Vector& num, const Vector& ref);

struct MonitorSample {
  long step = 0;
  double t = 0.0;
  double e_phi = 0.0;
  double e_u = 0.0;
  double e_p = 0.0;
  double g_energy = 0.0;
  double s_norm = 0.0;
  double h1_u = 0.0;
  double h1_phi = 0.0;
  double div_max = 0.0;         // |B u^{n+1}|_inf
  double div_dalpha_max = 0.0;  // |B sum_k implicit[k] u^{n+1-k}|_inf
};

struct MonitorOptions {
  int sample_every = 1;
  /// Errors are measured against this level instead of the exact solution.
  std::optional<TimeLevel> reference;
};

struct TransientResult {
  TimeLevel final;
  std::vector<MonitorSample> series;
  long steps = 0;  // time levels beyond t0 (the first one from initialization)
  double max_div = 0.0;  // over levels computed by the scheme
  double setup_seconds = 0.0;
  double step_seconds = 0.0;  // wall time spent in scheme steps
};

/// Steps from t = 0 to T. Throws std::invalid_argument unless T/dt is a
/// positive integer within 1e-9, StabilityError on non-finite values.
TransientResult run_transient(const ManufacturedCase& mc, const CoupledMesh& mesh,
                              const SchemeConfig& config, double T,
                              const MonitorOptions& monitors = {});
TransientResult run_transient(const ManufacturedCase& mc, const Problem& problem,
                              const SchemeConfig& config, double T,
                              const MonitorOptions& monitors = {});

}  // namespace sdflow
