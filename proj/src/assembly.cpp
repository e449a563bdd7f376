#include "sdflow/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sdflow {

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Reference basis values and gradients tabulated at quadrature points.
struct Tabulation {
  int nb = 0;
  std::vector<double> values;  // [qp * nb + i]
  std::vector<Point2> grads;

  double value(int q, int i) const { return values[q * nb + i]; }
  Point2 grad(int q, int i) const { return grads[q * nb + i]; }
};

Tabulation tabulate(SpaceKind kind, const QuadRule& rule) {
  Tabulation tab;
  tab.nb = kind == SpaceKind::ScalarP1 ? 3 : 6;
  for (const Point2& pt : rule.points) {
    if (tab.nb == 3) {
      const auto s = p1_eval(pt);
      tab.values.insert(tab.values.end(), s.values.begin(), s.values.end());
      tab.grads.insert(tab.grads.end(), s.grads.begin(), s.grads.end());
    } else {
      const auto s = p2_eval(pt);
      tab.values.insert(tab.values.end(), s.values.begin(), s.values.end());
      tab.grads.insert(tab.grads.end(), s.grads.begin(), s.grads.end());
    }
  }
  return tab;
}

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Local 3x3 trace mass for one interface edge: int N_i N_j ds.
std::array<std::array<double, 3>, 3> trace_mass(const QuadRule1D& rule, double length) {
  std::array<std::array<double, 3>, 3> m{};
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto n = p2_trace_eval(rule.points[q]);
    const double w = rule.weights[q] * length;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += w * n[i] * n[j];
    }
  }
  return m;
}

}  // namespace

Discretization make_discretization(CoupledMesh mesh, int triangle_degree, int edge_degree) {
  Discretization d;
  d.triangle_rule = triangle_quadrature(triangle_degree);
  d.edge_rule = edge_quadrature(edge_degree);
  d.velocity = build_dof_map(mesh.fluid, SpaceKind::VectorP2);
  d.pressure = build_dof_map(mesh.fluid, SpaceKind::ScalarP1, /*constrain_outer=*/false);
  d.head = build_dof_map(mesh.porous, SpaceKind::ScalarP2);

  const int nvf = static_cast<int>(mesh.fluid.vertices.size());
  const int nvp = static_cast<int>(mesh.porous.vertices.size());
  for (const auto& pair : mesh.interface_pairs) {
    const Edge& fe = mesh.fluid.edges.at(pair.fluid_edge);
    const Edge& pe = mesh.porous.edges.at(pair.porous_edge);
    InterfaceEdge ie;
    ie.a = mesh.fluid.vertices[fe.vertices[0]];
    ie.b = mesh.fluid.vertices[fe.vertices[1]];
    int pa = pe.vertices[0];
    int pb = pe.vertices[1];
    if (dist(mesh.porous.vertices[pa], ie.a) > 1e-12) std::swap(pa, pb);
    if (dist(mesh.porous.vertices[pa], ie.a) > 1e-12 ||
        dist(mesh.porous.vertices[pb], ie.b) > 1e-12) {
      throw std::runtime_error("interface pair (" + std::to_string(pair.fluid_edge) + ", " +
                               std::to_string(pair.porous_edge) +
                               ") does not match geometrically");
    }
    ie.fluid_nodes = {fe.vertices[0], fe.vertices[1], nvf + pair.fluid_edge};
    ie.porous_nodes = {pa, pb, nvp + pair.porous_edge};
    ie.length = dist(ie.a, ie.b);

    // Orient the normal away from the fluid triangle's opposite vertex.
    Point2 nrm{(ie.b.y - ie.a.y) / ie.length, -(ie.b.x - ie.a.x) / ie.length};
    const auto& tri = mesh.fluid.triangles[fe.triangles[0]];
    for (int v : tri) {
      if (v == fe.vertices[0] || v == fe.vertices[1]) continue;
      const Point2 c = mesh.fluid.vertices[v];
      if (nrm.x * (c.x - ie.a.x) + nrm.y * (c.y - ie.a.y) > 0.0) nrm = {-nrm.x, -nrm.y};
    }
    ie.normal = nrm;
    ie.tangent = {-nrm.y, nrm.x};
    d.interface.push_back(ie);
  }
  d.mesh = std::move(mesh);
  return d;
}

SparseMatrix OperatorSet::porous_coupling() const {
  SparseMatrix m = -SparseMatrix(C_fp.transpose());
  m.makeCompressed();
  return m;
}

SparseMatrix assemble_scalar_mass(const SubMesh& mesh, const DofMap& map,
                                  const QuadRule& rule, double coefficient) {
  const Tabulation tab = tabulate(map.kind, rule);
  const int nb = tab.nb;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(map.num_cells()) * nb * nb * map.components);
  std::vector<double> local(nb * nb);
  for (int t = 0; t < map.num_cells(); ++t) {
    const double jac = std::abs(AffineMap::of(mesh, t).det);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * jac * coefficient;
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) local[i * nb + j] += w * tab.value(q, i) * tab.value(q, j);
      }
    }
    const auto dofs = map.cell(t);
    for (int c = 0; c < map.components; ++c) {
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          trip.emplace_back(dofs[c * nb + i], dofs[c * nb + j], local[i * nb + j]);
        }
      }
    }
  }
  return from_triplets(map.size(), map.size(), trip);
}

SparseMatrix assemble_gradient_stiffness(const SubMesh& mesh, const DofMap& map,
                                         const QuadRule& rule,
                                         const std::array<double, 4>& k) {
  const Tabulation tab = tabulate(map.kind, rule);
  const int nb = tab.nb;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(map.num_cells()) * nb * nb * map.components);
  std::vector<double> local(nb * nb);
  std::vector<Point2> grads(nb);
  for (int t = 0; t < map.num_cells(); ++t) {
    const AffineMap am = AffineMap::of(mesh, t);
    const double jac = std::abs(am.det);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < nb; ++i) grads[i] = am.push_gradient(tab.grad(q, i));
      for (int i = 0; i < nb; ++i) {
        const Point2 kg{k[0] * grads[i].x + k[1] * grads[i].y,
                        k[2] * grads[i].x + k[3] * grads[i].y};
        for (int j = 0; j < nb; ++j) {
          local[j * nb + i] += w * (kg.x * grads[j].x + kg.y * grads[j].y);
        }
      }
    }
    const auto dofs = map.cell(t);
    for (int c = 0; c < map.components; ++c) {
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
          trip.emplace_back(dofs[c * nb + i], dofs[c * nb + j], local[i * nb + j]);
        }
      }
    }
  }
  return from_triplets(map.size(), map.size(), trip);
}

MassPair assemble_masses(const Discretization& d, const PhysicalParams& params) {
  return {assemble_scalar_mass(d.mesh.fluid, d.velocity, d.triangle_rule, 1.0),
          assemble_scalar_mass(d.mesh.porous, d.head, d.triangle_rule, params.g * params.S)};
}

StiffnessTriple assemble_stiffnesses(const Discretization& d, const PhysicalParams& params) {
  params.validate();
  const std::array<double, 4> nu_id{params.nu, 0.0, 0.0, params.nu};
  const std::array<double, 4> gk{params.g * params.K[0], params.g * params.K[1],
                                 params.g * params.K[2], params.g * params.K[3]};

  StiffnessTriple out;
  out.fluid = assemble_gradient_stiffness(d.mesh.fluid, d.velocity, d.triangle_rule, nu_id);
  out.porous = assemble_gradient_stiffness(d.mesh.porous, d.head, d.triangle_rule, gk);

  const int ns = d.velocity.scalar_nodes;
  Triplets trip;
  for (const auto& ie : d.interface) {
    const auto m = trace_mass(d.edge_rule, ie.length);
    const double tau[2] = {ie.tangent.x, ie.tangent.y};
    for (int ci = 0; ci < 2; ++ci) {
      for (int cj = 0; cj < 2; ++cj) {
        const double s = params.alpha_bj * tau[ci] * tau[cj];
        if (s == 0.0) continue;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            trip.emplace_back(ci * ns + ie.fluid_nodes[i], cj * ns + ie.fluid_nodes[j],
                              s * m[i][j]);
          }
        }
      }
    }
  }
  out.bjsj = from_triplets(d.velocity.size(), d.velocity.size(), trip);
  return out;
}

SparseMatrix assemble_divergence(const Discretization& d) {
  const QuadRule& rule = d.triangle_rule;
  const Tabulation vel = tabulate(SpaceKind::VectorP2, rule);
  const Tabulation pre = tabulate(SpaceKind::ScalarP1, rule);
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(d.pressure.num_cells()) * 3 * 12);
  std::array<double, 36> local{};  // [q_i][component * 6 + j]
  for (int t = 0; t < d.velocity.num_cells(); ++t) {
    const AffineMap am = AffineMap::of(d.mesh.fluid, t);
    const double jac = std::abs(am.det);
    local.fill(0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * jac;
      for (int j = 0; j < 6; ++j) {
        const Point2 g = am.push_gradient(vel.grad(q, j));
        for (int i = 0; i < 3; ++i) {
          const double wq = -w * pre.value(q, i);
          local[i * 12 + j] += wq * g.x;
          local[i * 12 + 6 + j] += wq * g.y;
        }
      }
    }
    const auto vdofs = d.velocity.cell(t);
    const auto pdofs = d.pressure.cell(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 12; ++j) trip.emplace_back(pdofs[i], vdofs[j], local[i * 12 + j]);
    }
  }
  return from_triplets(d.pressure.size(), d.velocity.size(), trip);
}

InterfaceTriple assemble_interface(const Discretization& d, const PhysicalParams& params) {
  const int ns = d.velocity.scalar_nodes;
  Triplets coupling, nf, np;
  for (const auto& ie : d.interface) {
    const auto m = trace_mass(d.edge_rule, ie.length);
    const double n[2] = {ie.normal.x, ie.normal.y};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int ci = 0; ci < 2; ++ci) {
          if (n[ci] == 0.0) continue;
          coupling.emplace_back(ci * ns + ie.fluid_nodes[i], ie.porous_nodes[j],
                                params.g * n[ci] * m[i][j]);
          for (int cj = 0; cj < 2; ++cj) {
            if (n[cj] == 0.0) continue;
            nf.emplace_back(ci * ns + ie.fluid_nodes[i], cj * ns + ie.fluid_nodes[j],
                            params.gamma_f * n[ci] * n[cj] * m[i][j]);
          }
        }
        np.emplace_back(ie.porous_nodes[i], ie.porous_nodes[j], params.gamma_p * m[i][j]);
      }
    }
  }
  return {from_triplets(d.velocity.size(), d.head.size(), coupling),
          from_triplets(d.velocity.size(), d.velocity.size(), nf),
          from_triplets(d.head.size(), d.head.size(), np)};
}

OperatorSet assemble_operators(const Discretization& d, const PhysicalParams& params) {
  params.validate();
  OperatorSet ops;
  auto masses = assemble_masses(d, params);
  ops.M_f = std::move(masses.fluid);
  ops.M_p = std::move(masses.porous);
  auto stiff = assemble_stiffnesses(d, params);
  ops.A_f = std::move(stiff.fluid);
  ops.A_bjsj = std::move(stiff.bjsj);
  ops.A_p = std::move(stiff.porous);
  ops.B = assemble_divergence(d);
  auto iface = assemble_interface(d, params);
  ops.C_fp = std::move(iface.coupling);
  ops.N_f = std::move(iface.fluid_stab);
  ops.N_p = std::move(iface.porous_stab);
  const std::array<double, 4> unit{1.0, 0.0, 0.0, 1.0};
  ops.L_f = assemble_gradient_stiffness(d.mesh.fluid, d.velocity, d.triangle_rule, unit);
  ops.L_p = assemble_gradient_stiffness(d.mesh.porous, d.head, d.triangle_rule, unit);
  return ops;
}

LoadVectors assemble_load(const Discretization& d, const LoadData& data, double g) {
  const QuadRule& rule = d.triangle_rule;
  const Tabulation tab = tabulate(SpaceKind::ScalarP2, rule);

  LoadVectors out{Vector::Zero(d.velocity.size()), Vector::Zero(d.head.size())};

  if (data.fluid_forcing) {
    for (int t_id = 0; t_id < d.velocity.num_cells(); ++t_id) {
      const AffineMap am = AffineMap::of(d.mesh.fluid, t_id);
      const double jac = std::abs(am.det);
      const auto dofs = d.velocity.cell(t_id);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point2 f = data.fluid_forcing(am.map(rule.points[q]));
        const double w = rule.weights[q] * jac;
        for (int i = 0; i < 6; ++i) {
          const double wn = w * tab.value(q, i);
          out.fluid[dofs[i]] += wn * f.x;
          out.fluid[dofs[6 + i]] += wn * f.y;
        }
      }
    }
  }

  if (data.porous_forcing) {
    for (int t_id = 0; t_id < d.head.num_cells(); ++t_id) {
      const AffineMap am = AffineMap::of(d.mesh.porous, t_id);
      const double jac = std::abs(am.det);
      const auto dofs = d.head.cell(t_id);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double f = data.porous_forcing(am.map(rule.points[q]));
        const double w = g * rule.weights[q] * jac * f;
        for (int i = 0; i < 6; ++i) out.porous[dofs[i]] += w * tab.value(q, i);
      }
    }
  }

  if (data.interface_defects) {
    const int ns = d.velocity.scalar_nodes;
    for (const auto& ie : d.interface) {
      for (std::size_t q = 0; q < d.edge_rule.points.size(); ++q) {
        const double s = d.edge_rule.points[q];
        const Point2 x{ie.a.x + s * (ie.b.x - ie.a.x), ie.a.y + s * (ie.b.y - ie.a.y)};
        const InterfaceResiduals res = data.interface_defects(x, ie.normal);
        const auto n = p2_trace_eval(s);
        const double w = d.edge_rule.weights[q] * ie.length;
        // Traction defect tested against v; mass defect against g psi.
        const double fx = res.tangential * ie.tangent.x + res.normal_stress * ie.normal.x;
        const double fy = res.tangential * ie.tangent.y + res.normal_stress * ie.normal.y;
        for (int i = 0; i < 3; ++i) {
          out.fluid[ie.fluid_nodes[i]] -= w * n[i] * fx;
          out.fluid[ns + ie.fluid_nodes[i]] -= w * n[i] * fy;
          out.porous[ie.porous_nodes[i]] -= g * w * n[i] * res.mass;
        }
      }
    }
  }
  return out;
}

LoadVectors assemble_load(const Discretization& d, const ManufacturedCase& mc, double t,
                          bool include_time_derivative) {
  LoadData data;
  data.fluid_forcing = [&](Point2 x) {
    return fluid_forcing(mc, x, t, include_time_derivative);
  };
  data.porous_forcing = [&](Point2 x) {
    return porous_forcing(mc, x, t, include_time_derivative);
  };
  data.interface_defects = [&](Point2 x, Point2 normal) {
    return interface_residuals(mc, x, t, normal);
  };
  return assemble_load(d, data, mc.params.g);
}

void write_matrix(const SparseMatrix& m, std::ostream& out) {
  const auto precision = out.precision(17);
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace sdflow
