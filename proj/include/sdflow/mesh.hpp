#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sdflow {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class EdgeMarker : std::uint8_t { Interior, Outer, Interface };

struct Edge {
  std::array<int, 2> vertices{};
  // Adjacent triangles; the second slot is -1 on boundary edges.
  std::array<int, 2> triangles{-1, -1};
  EdgeMarker marker = EdgeMarker::Interior;

  bool on_boundary() const { return triangles[1] < 0; }
};

/// Conforming triangulation of one rectangular subdomain.
///
/// Local edge k of a triangle joins local vertices (k, (k+1)%3); the
/// triangle_edges table follows that convention, which is also the
/// midpoint ordering of the P2 element.
struct SubMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> triangle_edges;

  double triangle_area(int t) const;
  Point2 edge_midpoint(int e) const;
};

struct InterfacePair {
  int fluid_edge = -1;
  int porous_edge = -1;
};

/// Porous rectangle (0,1)x(0,1) and fluid rectangle (0,1)x(1,2), meshed
/// independently and matched edge-by-edge along the interface y = 1.
struct CoupledMesh {
  SubMesh fluid;
  SubMesh porous;
  std::vector<InterfacePair> interface_pairs;
  int n = 0;
  double h = 0.0;
};

/// Structured n x n split of [x0,x0+1]x[y0,y0+1]; every square is cut along
/// its lower-left to upper-right diagonal. Edges on the line y = interface_y
/// are marked Interface, all other boundary edges Outer.
SubMesh build_unit_square(int n, Point2 origin, double interface_y);

/// Throws std::invalid_argument for n < 1.
CoupledMesh build_coupled_mesh(int n);

/// Sorted indices of vertices on the boundary minus the open interface.
/// The two interface end points lie on the outer boundary and are included.
std::vector<int> outer_boundary_vertices(const SubMesh& mesh);

/// Debug dump: `v x y`, `t i j k` per submesh (fluid first), then `g ef ep`.
void write_mesh(const CoupledMesh& mesh, std::ostream& out);

}  // namespace sdflow
