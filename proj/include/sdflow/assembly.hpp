#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "sdflow/fem.hpp"
#include "sdflow/mesh.hpp"
#include "sdflow/mms.hpp"
#include "sdflow/params.hpp"

namespace sdflow {

/// Row-compressed real matrix with sorted column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

/// One matched interface edge seen from both sides. Trace nodes are listed
/// in P2 trace order (end a, end b, midpoint) with a/b shared by both sides.
struct InterfaceEdge {
  std::array<int, 3> fluid_nodes{};   // scalar P2 nodes of the fluid mesh
  std::array<int, 3> porous_nodes{};  // scalar P2 nodes of the porous mesh
  Point2 a, b;
  Point2 normal;   // outward unit normal of the fluid region
  Point2 tangent;  // (-normal.y, normal.x)
  double length = 0.0;
};

/// Mesh plus the three finite element spaces and quadrature choices:
/// vector P2 velocity and P1 pressure on the fluid mesh, P2 head on the
/// porous mesh.
struct Discretization {
  CoupledMesh mesh;
  DofMap velocity;
  DofMap pressure;
  DofMap head;
  QuadRule triangle_rule;
  QuadRule1D edge_rule;
  std::vector<InterfaceEdge> interface;
};

/// Throws std::runtime_error if paired interface edges differ by more than
/// 1e-12 in their end points.
Discretization make_discretization(CoupledMesh mesh, int triangle_degree = 5,
                                   int edge_degree = 5);

/// Every matrix of the semi-discrete weak form.
struct OperatorSet {
  SparseMatrix M_f;     // fluid velocity mass
  SparseMatrix M_p;     // porous head mass scaled by g S
  SparseMatrix A_f;     // nu (grad u, grad v)
  SparseMatrix A_bjsj;  // alpha_bj (u.tau, v.tau) on the interface
  SparseMatrix A_p;     // g (K grad phi, grad psi)
  SparseMatrix B;       // -(q, div v): pressure rows, velocity columns
  SparseMatrix C_fp;    // g (phi, v.n): velocity rows, head columns
  SparseMatrix N_f;     // gamma_f (u.n, v.n) on the interface
  SparseMatrix N_p;     // gamma_p (phi, psi) on the interface
  SparseMatrix L_f;     // unit-coefficient vector gradient stiffness
  SparseMatrix L_p;     // unit-coefficient scalar gradient stiffness

  /// -g (u.n, psi): head rows, velocity columns. Always -C_fp^T.
  SparseMatrix porous_coupling() const;
};

struct MassPair {
  SparseMatrix fluid, porous;
};
struct StiffnessTriple {
  SparseMatrix fluid, bjsj, porous;
};
struct InterfaceTriple {
  SparseMatrix coupling, fluid_stab, porous_stab;
};

MassPair assemble_masses(const Discretization& d, const PhysicalParams& params);
/// Throws std::invalid_argument if K is not symmetric positive definite.
StiffnessTriple assemble_stiffnesses(const Discretization& d, const PhysicalParams& params);
SparseMatrix assemble_divergence(const Discretization& d);
InterfaceTriple assemble_interface(const Discretization& d, const PhysicalParams& params);
OperatorSet assemble_operators(const Discretization& d, const PhysicalParams& params);

/// Scalar mass on a P1 or P2 space of one submesh.
SparseMatrix assemble_scalar_mass(const SubMesh& mesh, const DofMap& map,
                                  const QuadRule& rule, double coefficient = 1.0);
/// (C grad u, grad v) with a constant 2x2 coefficient; vector spaces get
/// the same block on each component.
SparseMatrix assemble_gradient_stiffness(const SubMesh& mesh, const DofMap& map,
                                         const QuadRule& rule,
                                         const std::array<double, 4>& coefficient);

struct LoadVectors {
  Vector fluid;   // (f, v) plus interface defect terms
  Vector porous;  // g (f, psi) plus interface defect terms
};

/// Pointwise data for one load assembly. Empty callables contribute nothing.
struct LoadData {
  std::function<Point2(Point2)> fluid_forcing;
  std::function<double(Point2)> porous_forcing;
  /// Defects on the interface; the point lies on y = 1 and the normal is
  /// the fluid outward normal.
  std::function<InterfaceResiduals(Point2, Point2)> interface_defects;
};

/// (f, v) on the fluid, g (f, psi) on the porous side, and the defect
/// terms -(tangential v.tau + normal_stress v.n) and -g (mass psi) on the
/// interface.
LoadVectors assemble_load(const Discretization& d, const LoadData& data, double g);

/// Quadrature of the closed-form forcing at time t. Interface-condition
/// defects of the manufactured solution enter as natural boundary loads.
LoadVectors assemble_load(const Discretization& d, const ManufacturedCase& mc, double t,
                          bool include_time_derivative = true);

/// Coordinate dump, one `i j value` line per stored entry (0-based).
void write_matrix(const SparseMatrix& m, std::ostream& out);

}  // namespace sdflow
