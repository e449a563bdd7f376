#pragma once

#include <array>
#include <span>
#include <vector>

#include "sdflow/mesh.hpp"

namespace sdflow {

// Reference triangle has vertices (0,0), (1,0), (0,1).

template <int N>
struct ShapeSet {
  std::array<double, N> values{};
  std::array<Point2, N> grads{};
};

/// Lagrange P2 basis: vertices 0..2, then midpoints of edges 01, 12, 20.
ShapeSet<6> p2_eval(Point2 ref);
ShapeSet<3> p1_eval(Point2 ref);

/// Quadratic Lagrange basis on [0,1] with nodes s = 0, 1, 1/2.
std::array<double, 3> p2_trace_eval(double s);

struct QuadRule {
  std::vector<Point2> points;
  std::vector<double> weights;
  int degree = 0;
};

struct QuadRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric rules on the reference triangle (weights sum to 1/2).
/// Supported: 1 <= min_degree <= 6.
QuadRule triangle_quadrature(int min_degree);

/// Gauss-Legendre on [0,1]. Supported: 1 <= min_degree <= 9.
QuadRule1D edge_quadrature(int min_degree);

/// Affine map from the reference triangle onto a mesh triangle.
struct AffineMap {
  Point2 origin;
  std::array<double, 4> jacobian{};  // row-major [dx/dxi dx/deta; dy/dxi dy/deta]
  double det = 0.0;

  static AffineMap of(const SubMesh& mesh, int triangle);
  Point2 map(Point2 ref) const;
  /// Reference gradient to physical gradient (J^{-T} g).
  Point2 push_gradient(Point2 ref_grad) const;
};

enum class SpaceKind { ScalarP1, ScalarP2, VectorP2 };

/// Global numbering of one finite element space on one SubMesh.
///
/// Scalar nodes: mesh vertices first, then (P2 only) one node per edge.
/// VectorP2 stores component blocks [x-nodes..., y-nodes...], so the global
/// index of component c at scalar node k is c * scalar_nodes + k.
struct DofMap {
  SpaceKind kind = SpaceKind::ScalarP1;
  int components = 1;
  int scalar_nodes = 0;
  int local_size = 0;  // per triangle, all components
  std::vector<int> cell_table;
  std::vector<Point2> node_coords;  // per scalar node
  std::vector<char> constrained;    // per global dof
  std::vector<int> dirichlet;       // sorted global dofs with constrained != 0

  int size() const { return scalar_nodes * components; }
  int num_cells() const {
    return local_size == 0 ? 0 : static_cast<int>(cell_table.size()) / local_size;
  }
  std::span<const int> cell(int t) const {
    return {cell_table.data() + static_cast<std::size_t>(t) * local_size,
            static_cast<std::size_t>(local_size)};
  }
  int scalar_local_size() const { return local_size / components; }
};

/// When constrain_outer is set, every dof sitting on the outer boundary
/// (vertices, and midpoints of Outer edges for P2) joins the Dirichlet set.
DofMap build_dof_map(const SubMesh& mesh, SpaceKind kind, bool constrain_outer = true);

}  // namespace sdflow
