#include "sdflow/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdflow {

ShapeSet<6> p2_eval(Point2 ref) {
  const double l0 = 1.0 - ref.x - ref.y;
  const double l1 = ref.x;
  const double l2 = ref.y;
  const Point2 g0{-1.0, -1.0};
  const Point2 g1{1.0, 0.0};
  const Point2 g2{0.0, 1.0};

  ShapeSet<6> s;
  s.values = {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
              4.0 * l0 * l1,         4.0 * l1 * l2,         4.0 * l2 * l0};
  auto scale = [](double c, Point2 g) { return Point2{c * g.x, c * g.y}; };
  auto sum = [](Point2 a, Point2 b) { return Point2{a.x + b.x, a.y + b.y}; };
  s.grads[0] = scale(4.0 * l0 - 1.0, g0);
  s.grads[1] = scale(4.0 * l1 - 1.0, g1);
  s.grads[2] = scale(4.0 * l2 - 1.0, g2);
  s.grads[3] = sum(scale(4.0 * l0, g1), scale(4.0 * l1, g0));
  s.grads[4] = sum(scale(4.0 * l1, g2), scale(4.0 * l2, g1));
  s.grads[5] = sum(scale(4.0 * l2, g0), scale(4.0 * l0, g2));
  return s;
}

ShapeSet<3> p1_eval(Point2 ref) {
  ShapeSet<3> s;
  s.values = {1.0 - ref.x - ref.y, ref.x, ref.y};
  s.grads = {Point2{-1.0, -1.0}, Point2{1.0, 0.0}, Point2{0.0, 1.0}};
  return s;
}

std::array<double, 3> p2_trace_eval(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
}

namespace {

// Orbits of the S3 action on barycentric coordinates; weights are given
// normalized to sum 1 and scaled by the reference area on output.
void add_centroid(QuadRule& rule, double w) {
  rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  rule.weights.push_back(0.5 * w);
}

void add_orbit3(QuadRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (Point2 p : {Point2{a, a}, Point2{b, a}, Point2{a, b}}) {
    rule.points.push_back(p);
    rule.weights.push_back(0.5 * w);
  }
}

void add_orbit6(QuadRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (Point2 p : {Point2{a, b}, Point2{b, a}, Point2{a, c}, Point2{c, a},
                   Point2{b, c}, Point2{c, b}}) {
    rule.points.push_back(p);
    rule.weights.push_back(0.5 * w);
  }
}

}  // namespace

QuadRule triangle_quadrature(int min_degree) {
  if (min_degree < 1 || min_degree > 6) {
    throw std::invalid_argument("unsupported triangle quadrature degree " +
                                std::to_string(min_degree));
  }
  QuadRule rule;
  if (min_degree == 1) {
    rule.degree = 1;
    add_centroid(rule, 1.0);
  } else if (min_degree == 2) {
    rule.degree = 2;
    add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
  } else if (min_degree <= 4) {
    rule.degree = 4;
    add_orbit3(rule, 0.44594849091596488632, 0.22338158967801146570);
    add_orbit3(rule, 0.09157621350977074346, 0.10995174365532186764);
  } else if (min_degree == 5) {
    rule.degree = 5;
    const double r15 = std::sqrt(15.0);
    add_centroid(rule, 9.0 / 40.0);
    add_orbit3(rule, (6.0 - r15) / 21.0, (155.0 - r15) / 1200.0);
    add_orbit3(rule, (6.0 + r15) / 21.0, (155.0 + r15) / 1200.0);
  } else {
    rule.degree = 6;
    add_orbit3(rule, 0.24928674517091042129, 0.11678627572637936603);
    add_orbit3(rule, 0.06308901449150222834, 0.05084490637020681692);
    add_orbit6(rule, 0.05314504984481694735, 0.31035245103378440542,
               0.08285107561837357519);
  }
  return rule;
}

QuadRule1D edge_quadrature(int min_degree) {
  if (min_degree < 1 || min_degree > 9) {
    throw std::invalid_argument("unsupported edge quadrature degree " +
                                std::to_string(min_degree));
  }
  // Gauss-Legendre nodes/weights on [-1,1], positive half only.
  struct Table {
    std::vector<double> x, w;
  };
  static const Table tables[] = {
      {{0.0}, {2.0}},
      {{0.57735026918962576451}, {1.0}},
      {{0.0, 0.77459666924148337704}, {8.0 / 9.0, 5.0 / 9.0}},
      {{0.33998104358485626480, 0.86113631159405257522},
       {0.65214515486254614263, 0.34785484513745385737}},
      {{0.0, 0.53846931010568309104, 0.90617984593866399280},
       {0.56888888888888888889, 0.47862867049936646804, 0.23692688505618908751}},
  };
  const int npts = (min_degree + 2) / 2;
  const Table& tab = tables[npts - 1];

  QuadRule1D rule;
  rule.degree = 2 * npts - 1;
  for (std::size_t k = 0; k < tab.x.size(); ++k) {
    if (tab.x[k] == 0.0) {
      rule.points.push_back(0.5);
      rule.weights.push_back(0.5 * tab.w[k]);
    } else {
      rule.points.push_back(0.5 * (1.0 - tab.x[k]));
      rule.weights.push_back(0.5 * tab.w[k]);
      rule.points.push_back(0.5 * (1.0 + tab.x[k]));
      rule.weights.push_back(0.5 * tab.w[k]);
    }
  }
  return rule;
}

AffineMap AffineMap::of(const SubMesh& mesh, int triangle) {
  const auto& tri = mesh.triangles[triangle];
  const Point2& a = mesh.vertices[tri[0]];
  const Point2& b = mesh.vertices[tri[1]];
  const Point2& c = mesh.vertices[tri[2]];
  AffineMap m;
  m.origin = a;
  m.jacobian = {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
  m.det = m.jacobian[0] * m.jacobian[3] - m.jacobian[1] * m.jacobian[2];
  return m;
}

Point2 AffineMap::map(Point2 ref) const {
  return {origin.x + jacobian[0] * ref.x + jacobian[1] * ref.y,
          origin.y + jacobian[2] * ref.x + jacobian[3] * ref.y};
}

Point2 AffineMap::push_gradient(Point2 g) const {
  // J^{-T} = (1/det) [ j11 -j10 ; -j01 j00 ]
  const double inv = 1.0 / det;
  return {inv * (jacobian[3] * g.x - jacobian[2] * g.y),
          inv * (-jacobian[1] * g.x + jacobian[0] * g.y)};
}

DofMap build_dof_map(const SubMesh& mesh, SpaceKind kind, bool constrain_outer) {
  DofMap map;
  map.kind = kind;
  const bool quadratic = kind != SpaceKind::ScalarP1;
  map.components = kind == SpaceKind::VectorP2 ? 2 : 1;
  const int nv = static_cast<int>(mesh.vertices.size());
  map.scalar_nodes = nv + (quadratic ? static_cast<int>(mesh.edges.size()) : 0);
  const int scalar_local = quadratic ? 6 : 3;
  map.local_size = scalar_local * map.components;

  map.node_coords = mesh.vertices;
  if (quadratic) {
    for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
      map.node_coords.push_back(mesh.edge_midpoint(e));
    }
  }

  const int ncells = static_cast<int>(mesh.triangles.size());
  map.cell_table.resize(static_cast<std::size_t>(ncells) * map.local_size);
  for (int t = 0; t < ncells; ++t) {
    std::array<int, 6> scalar{};
    for (int k = 0; k < 3; ++k) scalar[k] = mesh.triangles[t][k];
    if (quadratic) {
      for (int k = 0; k < 3; ++k) scalar[3 + k] = nv + mesh.triangle_edges[t][k];
    }
    for (int c = 0; c < map.components; ++c) {
      for (int k = 0; k < scalar_local; ++k) {
        map.cell_table[static_cast<std::size_t>(t) * map.local_size + c * scalar_local + k] =
            c * map.scalar_nodes + scalar[k];
      }
    }
  }

  map.constrained.assign(map.size(), 0);
  if (constrain_outer) {
    std::vector<char> node_flag(map.scalar_nodes, 0);
    for (int v : outer_boundary_vertices(mesh)) node_flag[v] = 1;
    if (quadratic) {
      for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
        if (mesh.edges[e].marker == EdgeMarker::Outer) node_flag[nv + e] = 1;
      }
    }
    for (int c = 0; c < map.components; ++c) {
      for (int k = 0; k < map.scalar_nodes; ++k) {
        if (node_flag[k]) map.constrained[c * map.scalar_nodes + k] = 1;
      }
    }
  }
  for (int i = 0; i < map.size(); ++i) {
    if (map.constrained[i]) map.dirichlet.push_back(i);
  }
  return map;
}

}  // namespace sdflow
