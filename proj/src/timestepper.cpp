#include "sdflow/timestepper.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>

namespace sdflow {

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

struct Block {
  int row = 0;
  int col = 0;
  const SparseMatrix* matrix = nullptr;
  double scale = 1.0;
};

SparseMatrix block_matrix(int rows, int cols, std::initializer_list<Block> blocks) {
  Triplets trip;
  for (const Block& b : blocks) {
    for (int r = 0; r < b.matrix->outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(*b.matrix, r); it; ++it) {
        trip.emplace_back(b.row + it.row(), b.col + it.col(), b.scale * it.value());
      }
    }
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

bool all_finite(const TimeLevel& x) {
  return x.u.allFinite() && x.p.allFinite() && x.phi.allFinite();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(SchemeKind scheme) {
  return scheme == SchemeKind::BDF2 ? "bdf2" : "amb2";
}

SchemeKind parse_scheme(std::string_view text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "bdf2") return SchemeKind::BDF2;
  if (lower == "amb2") return SchemeKind::AMB2;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

void SchemeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (scheme == SchemeKind::AMB2 && !(alpha > 0.5 && alpha < 1.0)) {
    throw std::invalid_argument("AMB2 requires 1/2 < alpha < 1, got " + std::to_string(alpha));
  }
  params.validate();
}

SchemeCoefficients scheme_coefficients(SchemeKind scheme, double alpha) {
  if (scheme == SchemeKind::BDF2) {
    return {{1.5, -2.0, 0.5}, {1.0, 0.0, 0.0}, {2.0, -1.0}, 1.0};
  }
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw std::invalid_argument("AMB2 requires 1/2 < alpha < 1, got " + std::to_string(alpha));
  }
  return {{1.0, -1.0, 0.0}, {alpha, 1.5 - 2.0 * alpha, alpha - 0.5}, {1.5, -0.5}, 0.5};
}

SchemeCoefficients bdf1_coefficients() {
  return {{1.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0}, 1.0};
}

double scalar_model(const SchemeCoefficients& c, double a, double b, double dt, double T) {
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(steps * dt - T) > 1e-9 * T) {
    throw std::invalid_argument("T/dt must be a positive integer");
  }
  double y0 = 1.0;
  double y1 = std::exp(-(a + b) * dt);
  const double lhs = c.mass[0] / dt + a * c.implicit[0];
  for (long n = 2; n <= steps; ++n) {
    const double rhs = -(c.mass[1] * y1 + c.mass[2] * y0) / dt -
                       a * (c.implicit[1] * y1 + c.implicit[2] * y0) -
                       b * (c.extrap[0] * y1 + c.extrap[1] * y0);
    y0 = y1;
    y1 = rhs / lhs;
  }
  return steps == 1 ? std::exp(-(a + b) * dt) : y1;
}

Problem make_problem(const CoupledMesh& mesh, const PhysicalParams& params,
                     int triangle_degree, int edge_degree) {
  params.validate();
  auto disc = std::make_shared<Discretization>(
      make_discretization(mesh, triangle_degree, edge_degree));
  auto ops = std::make_shared<OperatorSet>(assemble_operators(*disc, params));
  return {std::move(disc), std::move(ops), params};
}

// ---- ReducedSystem ----------------------------------------------------------

ReducedSystem::ReducedSystem(const SparseMatrix& full, const std::vector<char>& fixed,
                             MatrixSymmetry symmetry)
    : full_size_(static_cast<int>(full.rows())) {
  // Position of each full index inside the free or the fixed list.
  std::vector<int> slot(full.rows(), -1);
  for (int i = 0; i < full.rows(); ++i) {
    if (fixed[i]) {
      slot[i] = static_cast<int>(fixed_.size());
      fixed_.push_back(i);
    } else {
      slot[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
  Triplets interior, lift;
  for (int r = 0; r < full.outerSize(); ++r) {
    if (fixed[r]) continue;
    for (SparseMatrix::InnerIterator it(full, r); it; ++it) {
      auto& target = fixed[it.col()] ? lift : interior;
      target.emplace_back(slot[r], slot[it.col()], it.value());
    }
  }
  const int nfree = static_cast<int>(free_.size());
  SparseMatrix a(nfree, nfree);
  a.setFromTriplets(interior.begin(), interior.end());
  factor_.emplace(Factorization::factorize(a, symmetry));

  lift_.resize(nfree, static_cast<int>(fixed_.size()));
  lift_.setFromTriplets(lift.begin(), lift.end());
  lift_.makeCompressed();
}

Vector ReducedSystem::solve(const Vector& rhs, const Vector& fixed_values) const {
  Vector xb(static_cast<Eigen::Index>(fixed_.size()));
  for (std::size_t k = 0; k < fixed_.size(); ++k) xb[k] = fixed_values[fixed_[k]];
  Vector r(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t k = 0; k < free_.size(); ++k) r[k] = rhs[free_[k]];
  if (!fixed_.empty()) r -= lift_ * xb;
  const Vector xi = factor_->solve(r);

  Vector x(full_size_);
  for (std::size_t k = 0; k < free_.size(); ++k) x[free_[k]] = xi[k];
  for (std::size_t k = 0; k < fixed_.size(); ++k) x[fixed_[k]] = xb[k];
  return x;
}

// ---- operators --------------------------------------------------------------

StepOperators build_step_operators(const Problem& problem, const SchemeCoefficients& coeffs,
                                   double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Discretization& d = *problem.disc;
  const OperatorSet& o = *problem.ops;

  StepOperators s;
  s.problem = problem;
  s.coeffs = coeffs;
  s.dt = dt;
  s.fluid_implicit = o.A_f + o.A_bjsj + o.N_f;
  s.porous_implicit = o.A_p + o.N_p;

  const double m0 = coeffs.mass[0] / dt;
  const double c0 = coeffs.implicit[0];
  const SparseMatrix velocity_block = m0 * o.M_f + c0 * s.fluid_implicit;
  const SparseMatrix bt = o.B.transpose();
  const int nu = d.velocity.size();
  const int np = d.pressure.size();
  const SparseMatrix saddle = block_matrix(
      nu + np, nu + np, {{0, 0, &velocity_block}, {0, nu, &bt}, {nu, 0, &o.B}});

  std::vector<char> stokes_fixed(nu + np, 0);
  std::copy(d.velocity.constrained.begin(), d.velocity.constrained.end(), stokes_fixed.begin());
  s.stokes = std::make_shared<const ReducedSystem>(saddle, stokes_fixed, MatrixSymmetry::General);

  const SparseMatrix darcy = m0 * o.M_p + c0 * s.porous_implicit;
  s.darcy = std::make_shared<const ReducedSystem>(darcy, d.head.constrained,
                                                  MatrixSymmetry::SymmetricPositiveDefinite);
  return s;
}

StepOperators build_step_operators(const Problem& problem, const SchemeConfig& config) {
  config.validate();
  return build_step_operators(problem, scheme_coefficients(config.scheme, config.alpha),
                              config.dt);
}

// ---- levels -----------------------------------------------------------------

TimeLevel interpolate_exact(const Discretization& d, const ManufacturedCase& mc, double t) {
  TimeLevel x;
  x.t = t;
  const int ns = d.velocity.scalar_nodes;
  x.u.resize(d.velocity.size());
  for (int k = 0; k < ns; ++k) {
    const Point2 u = velocity_jet(mc.id, d.velocity.node_coords[k], t).value;
    x.u[k] = u.x;
    x.u[ns + k] = u.y;
  }
  x.p.resize(d.pressure.size());
  for (int k = 0; k < d.pressure.size(); ++k) {
    x.p[k] = pressure_jet(mc.id, d.pressure.node_coords[k], t).value;
  }
  x.phi.resize(d.head.size());
  for (int k = 0; k < d.head.size(); ++k) {
    x.phi[k] = head_jet(mc.id, d.head.node_coords[k], t).value;
  }
  return x;
}

namespace {

TimeLevel zero_interior(const Discretization& d, const ManufacturedCase& mc, double t) {
  TimeLevel x = interpolate_exact(d, mc, t);
  for (int i = 0; i < x.u.size(); ++i) {
    if (!d.velocity.constrained[i]) x.u[i] = 0.0;
  }
  for (int i = 0; i < x.phi.size(); ++i) {
    if (!d.head.constrained[i]) x.phi[i] = 0.0;
  }
  x.p.setZero();
  return x;
}

}  // namespace

std::pair<TimeLevel, TimeLevel> initialize(const ManufacturedCase& mc, const Problem& problem,
                                           const SchemeConfig& config) {
  config.validate();
  const Discretization& d = *problem.disc;
  switch (config.start) {
    case StartMode::Interpolate:
      return {interpolate_exact(d, mc, 0.0), interpolate_exact(d, mc, config.dt)};
    case StartMode::ZeroInterior:
      return {zero_interior(d, mc, 0.0), zero_interior(d, mc, config.dt)};
    case StartMode::Bdf1Bootstrap: {
      TimeLevel x0 = interpolate_exact(d, mc, 0.0);
      const StepOperators euler = build_step_operators(problem, bdf1_coefficients(), config.dt);
      TimeLevel x1 = advance(euler, x0, x0, mc);
      return {std::move(x0), std::move(x1)};
    }
  }
  throw std::logic_error("unhandled start mode");
}

StepData manufactured_step_data(const StepOperators& s, const ManufacturedCase& mc,
                                double t_prev) {
  const Discretization& d = *s.problem.disc;
  TimeLevel boundary = interpolate_exact(d, mc, t_prev + s.dt);
  return {assemble_load(d, mc, t_prev + s.coeffs.forcing_offset * s.dt),
          std::move(boundary.u), std::move(boundary.phi)};
}

TimeLevel advance(const StepOperators& s, const TimeLevel& prev, const TimeLevel& prev2,
                  const ManufacturedCase& mc) {
  return advance(s, prev, prev2, manufactured_step_data(s, mc, prev.t));
}

TimeLevel advance(const StepOperators& s, const TimeLevel& prev, const TimeLevel& prev2,
                  const StepData& data) {
  const Discretization& d = *s.problem.disc;
  const OperatorSet& o = *s.problem.ops;
  const auto& c = s.coeffs;
  const double dt = s.dt;
  const double t_new = prev.t + dt;
  const LoadVectors& load = data.load;
  if (load.fluid.size() != d.velocity.size() || load.porous.size() != d.head.size() ||
      data.u_boundary.size() != d.velocity.size() || data.phi_boundary.size() != d.head.size()) {
    throw std::invalid_argument("advance: step data does not match the discretization");
  }

  const Vector u_hist = c.mass[1] * prev.u + c.mass[2] * prev2.u;
  const Vector phi_hist = c.mass[1] * prev.phi + c.mass[2] * prev2.phi;
  const Vector u_impl = c.implicit[1] * prev.u + c.implicit[2] * prev2.u;
  const Vector phi_impl = c.implicit[1] * prev.phi + c.implicit[2] * prev2.phi;
  const Vector u_ext = c.extrap[0] * prev.u + c.extrap[1] * prev2.u;
  const Vector phi_ext = c.extrap[0] * prev.phi + c.extrap[1] * prev2.phi;

  const int nu = d.velocity.size();
  const int np = d.pressure.size();

  // Stokes: velocity and q = sum_k implicit[k] p^{n+1-k}.
  Vector stokes_rhs = Vector::Zero(nu + np);
  stokes_rhs.head(nu) = load.fluid - (o.M_f * u_hist) / dt - s.fluid_implicit * u_impl -
                        o.C_fp * phi_ext + o.N_f * u_ext;
  Vector stokes_fixed = Vector::Zero(nu + np);
  stokes_fixed.head(nu) = data.u_boundary;
  const Vector stokes_sol = s.stokes->solve(stokes_rhs, stokes_fixed);

  // Darcy: the porous coupling block is -C_fp^T.
  const Vector darcy_rhs = load.porous - (o.M_p * phi_hist) / dt -
                           s.porous_implicit * phi_impl +
                           o.C_fp.transpose() * u_ext + o.N_p * phi_ext;
  const Vector phi = s.darcy->solve(darcy_rhs, data.phi_boundary);

  TimeLevel next;
  next.t = t_new;
  next.u = stokes_sol.head(nu);
  next.p = (stokes_sol.tail(np) - c.implicit[1] * prev.p - c.implicit[2] * prev2.p) /
           c.implicit[0];
  next.phi = phi;
  return next;
}

namespace {

void check_spacing(const TimeLevel& prev, const TimeLevel& prev2, double dt) {
  if (std::abs((prev.t - prev2.t) - dt) > 1e-12) {
    throw std::invalid_argument("history levels are not dt apart");
  }
}

}  // namespace

TimeLevel bdf2_step(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                    const ManufacturedCase& mc, const SchemeConfig& config) {
  if (config.scheme != SchemeKind::BDF2) throw std::invalid_argument("config is not BDF2");
  check_spacing(prev, prev2, ops.dt);
  return advance(ops, prev, prev2, mc);
}

TimeLevel amb2_step(const StepOperators& ops, const TimeLevel& prev, const TimeLevel& prev2,
                    const ManufacturedCase& mc, const SchemeConfig& config) {
  if (config.scheme != SchemeKind::AMB2) throw std::invalid_argument("config is not AMB2");
  config.validate();
  check_spacing(prev, prev2, ops.dt);
  return advance(ops, prev, prev2, mc);
}

TimeLevel steady_solve(const Problem& problem, const ManufacturedCase& mc, double t) {
  const Discretization& d = *problem.disc;
  const OperatorSet& o = *problem.ops;
  const int nu = d.velocity.size();
  const int np = d.pressure.size();
  const int nh = d.head.size();

  const SparseMatrix fluid = o.A_f + o.A_bjsj;
  const SparseMatrix bt = o.B.transpose();
  const SparseMatrix porous_coupling = o.porous_coupling();
  const SparseMatrix full = block_matrix(nu + np + nh, nu + np + nh,
                                         {{0, 0, &fluid},
                                          {0, nu, &bt},
                                          {0, nu + np, &o.C_fp},
                                          {nu, 0, &o.B},
                                          {nu + np, 0, &porous_coupling},
                                          {nu + np, nu + np, &o.A_p}});
  std::vector<char> fixed(nu + np + nh, 0);
  std::copy(d.velocity.constrained.begin(), d.velocity.constrained.end(), fixed.begin());
  std::copy(d.head.constrained.begin(), d.head.constrained.end(), fixed.begin() + nu + np);
  const ReducedSystem system(full, fixed, MatrixSymmetry::General);

  const LoadVectors load = assemble_load(d, mc, t, /*include_time_derivative=*/false);
  const TimeLevel exact = interpolate_exact(d, mc, t);
  Vector rhs = Vector::Zero(nu + np + nh);
  rhs.head(nu) = load.fluid;
  rhs.tail(nh) = load.porous;
  Vector fixed_values = Vector::Zero(nu + np + nh);
  fixed_values.head(nu) = exact.u;
  fixed_values.tail(nh) = exact.phi;
  const Vector x = system.solve(rhs, fixed_values);

  TimeLevel out;
  out.t = t;
  out.u = x.head(nu);
  out.p = x.segment(nu, np);
  out.phi = x.tail(nh);
  return out;
}

// ---- diagnostics --------------------------------------------------------------

double s_inner(const Vector& a, const Vector& b, const SparseMatrix& mass) {
  if (a.size() != mass.rows() || b.size() != mass.cols()) {
    throw std::invalid_argument("s_inner: dimension mismatch");
  }
  return a.dot(mass * b);
}

double g_energy(const Vector& v0, const Vector& v1, const SparseMatrix& mass) {
  return 0.5 * s_inner(v0, v0, mass) - 2.0 * s_inner(v0, v1, mass) +
         2.5 * s_inner(v1, v1, mass);
}

double g_energy(const TimeLevel& v0, const TimeLevel& v1, const OperatorSet& ops) {
  return g_energy(v0.u, v1.u, ops.M_f) + g_energy(v0.phi, v1.phi, ops.M_p);
}

double nodal_rms(const Vector& v) {
  return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

double relative_nodal_error(const Vector& num, const Vector& ref) {
  const double err = nodal_rms(num - ref);
  const double scale = nodal_rms(ref);
  return scale > 0.0 ? err / scale : err;
}

namespace {

MonitorSample sample(long step, const TimeLevel& prev, const TimeLevel& cur,
                     const TimeLevel& ref, const OperatorSet& o) {
  MonitorSample m;
  m.step = step;
  m.t = cur.t;
  m.e_phi = relative_nodal_error(cur.phi, ref.phi);
  m.e_u = relative_nodal_error(cur.u, ref.u);
  m.e_p = relative_nodal_error(cur.p, ref.p);
  m.g_energy = g_energy(prev, cur, o);
  m.s_norm = std::sqrt(s_inner(cur.u, cur.u, o.M_f) + s_inner(cur.phi, cur.phi, o.M_p));
  m.h1_u = std::sqrt(std::max(0.0, s_inner(cur.u, cur.u, o.L_f)));
  m.h1_phi = std::sqrt(std::max(0.0, s_inner(cur.phi, cur.phi, o.L_p)));
  m.div_max = (o.B * cur.u).lpNorm<Eigen::Infinity>();
  return m;
}

}  // namespace

TransientResult run_transient(const ManufacturedCase& mc, const CoupledMesh& mesh,
                              const SchemeConfig& config, double T,
                              const MonitorOptions& monitors) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Problem problem =
      make_problem(mesh, config.params, config.triangle_degree, config.edge_degree);
  TransientResult r = run_transient(mc, problem, config, T, monitors);
  r.setup_seconds = seconds_since(start) - r.step_seconds;
  return r;
}

TransientResult run_transient(const ManufacturedCase& mc, const Problem& problem,
                              const SchemeConfig& config, double T,
                              const MonitorOptions& monitors) {
  config.validate();
  if (monitors.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!(mc.params == problem.params) || !(config.params == problem.params)) {
    throw std::invalid_argument("case, scheme and problem must share one parameter set");
  }
  const double ratio = T / config.dt;
  const long nsteps = std::lround(ratio);
  if (nsteps < 1 || std::abs(ratio - static_cast<double>(nsteps)) > 1e-9) {
    throw std::invalid_argument("T/dt must be a positive integer (T=" + std::to_string(T) +
                                ", dt=" + std::to_string(config.dt) + ")");
  }

  const auto setup_start = std::chrono::steady_clock::now();
  const Discretization& d = *problem.disc;
  const OperatorSet& o = *problem.ops;
  const StepOperators ops = build_step_operators(problem, config);
  auto [x0, x1] = initialize(mc, problem, config);

  TransientResult r;
  r.setup_seconds = seconds_since(setup_start);
  auto reference_at = [&](double t) {
    return monitors.reference ? *monitors.reference : interpolate_exact(d, mc, t);
  };
  // Only levels produced by a saddle solve enter max_div; interpolated
  // starting values are not discretely divergence free.
  const bool solved_start = config.start == StartMode::Bdf1Bootstrap;
  auto record = [&](long step, const TimeLevel& prev, const TimeLevel& cur) {
    MonitorSample m = sample(step, prev, cur, reference_at(cur.t), o);
    if (step >= 2 || (step == 1 && solved_start)) r.max_div = std::max(r.max_div, m.div_max);
    r.series.push_back(m);
  };

  record(0, x0, x0);
  if (nsteps == 1 || monitors.sample_every == 1) record(1, x0, x1);

  const auto& c = ops.coeffs;
  TimeLevel prev2 = std::move(x0);
  TimeLevel prev = std::move(x1);
  const auto step_start = std::chrono::steady_clock::now();
  for (long n = 2; n <= nsteps; ++n) {
    TimeLevel next = advance(ops, prev, prev2, mc);
    next.t = static_cast<double>(n) * config.dt;
    if (!all_finite(next)) {
      throw StabilityError("non-finite solution at step " + std::to_string(n), n);
    }
    const bool due = n % monitors.sample_every == 0 || n == nsteps;
    const double div_dalpha =
        (o.B * (c.implicit[0] * next.u + c.implicit[1] * prev.u + c.implicit[2] * prev2.u))
            .lpNorm<Eigen::Infinity>();
    if (due) {
      record(n, prev, next);
      r.series.back().div_dalpha_max = div_dalpha;
    } else {
      r.max_div = std::max(r.max_div, (o.B * next.u).lpNorm<Eigen::Infinity>());
    }
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  r.step_seconds = seconds_since(step_start);
  r.steps = nsteps;
  r.final = std::move(prev);
  return r;
}

}  // namespace sdflow
