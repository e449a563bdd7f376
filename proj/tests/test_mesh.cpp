#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sdflow/mesh.hpp"

using namespace sdflow;

namespace {

double signed_area(const SubMesh& m, int t) {
  const auto& tri = m.triangles[t];
  const Point2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

int count_interface_edges(const SubMesh& m) {
  int k = 0;
  for (const auto& e : m.edges) k += e.marker == EdgeMarker::Interface;
  return k;
}

}  // namespace

TEST(Mesh, CountsForSmallN) {
  const CoupledMesh m1 = build_coupled_mesh(1);
  EXPECT_EQ(m1.fluid.vertices.size(), 4u);
  EXPECT_EQ(m1.fluid.triangles.size(), 2u);
  EXPECT_EQ(m1.porous.vertices.size(), 4u);
  EXPECT_EQ(m1.porous.triangles.size(), 2u);
  EXPECT_EQ(m1.interface_pairs.size(), 1u);

  const CoupledMesh m2 = build_coupled_mesh(2);
  for (const SubMesh* s : {&m2.fluid, &m2.porous}) {
    EXPECT_EQ(s->vertices.size(), 9u);
    EXPECT_EQ(s->triangles.size(), 8u);
  }
  EXPECT_EQ(m2.interface_pairs.size(), 2u);

  const CoupledMesh m16 = build_coupled_mesh(16);
  for (const SubMesh* s : {&m16.fluid, &m16.porous}) {
    EXPECT_EQ(s->vertices.size(), 289u);
    EXPECT_EQ(s->triangles.size(), 512u);
    EXPECT_EQ(count_interface_edges(*s), 16);
  }
  EXPECT_EQ(m16.interface_pairs.size(), 16u);
  EXPECT_DOUBLE_EQ(m16.h, 1.0 / 16.0);
}

TEST(Mesh, RejectsZeroSubdivisions) {
  EXPECT_THROW(build_coupled_mesh(0), std::invalid_argument);
  EXPECT_THROW(build_coupled_mesh(-3), std::invalid_argument);
}

TEST(Mesh, TrianglesArePositivelyOriented) {
  const CoupledMesh m = build_coupled_mesh(7);
  for (const SubMesh* s : {&m.fluid, &m.porous}) {
    for (int t = 0; t < static_cast<int>(s->triangles.size()); ++t) {
      EXPECT_GT(signed_area(*s, t), 0.0);
    }
  }
}

TEST(Mesh, AreasSumToOne) {
  for (int n = 1; n <= 64; ++n) {
    const CoupledMesh m = build_coupled_mesh(n);
    for (const SubMesh* s : {&m.fluid, &m.porous}) {
      double area = 0.0;
      for (int t = 0; t < static_cast<int>(s->triangles.size()); ++t) area += s->triangle_area(t);
      EXPECT_NEAR(area, 1.0, 1e-12) << "n=" << n;
    }
  }
}

TEST(Mesh, Conforming) {
  // Every interior edge is shared by exactly two triangles, boundary edges by
  // one, and the Euler relation V - E + F = 1 holds for a disc.
  const CoupledMesh m = build_coupled_mesh(5);
  for (const SubMesh* s : {&m.fluid, &m.porous}) {
    std::map<std::pair<int, int>, int> uses;
    for (const auto& tri : s->triangles) {
      for (int k = 0; k < 3; ++k) {
        int a = tri[k], b = tri[(k + 1) % 3];
        if (a > b) std::swap(a, b);
        ++uses[{a, b}];
      }
    }
    EXPECT_EQ(uses.size(), s->edges.size());
    for (const auto& e : s->edges) {
      const auto key = std::minmax(e.vertices[0], e.vertices[1]);
      const int n_adj = uses[{key.first, key.second}];
      EXPECT_EQ(n_adj, e.on_boundary() ? 1 : 2);
      EXPECT_EQ(e.marker != EdgeMarker::Interior, e.on_boundary());
    }
    const long v = static_cast<long>(s->vertices.size());
    const long f = static_cast<long>(s->triangles.size());
    EXPECT_EQ(v - static_cast<long>(s->edges.size()) + f, 1);
  }
}

TEST(Mesh, TriangleEdgeTableMatchesLocalEdges) {
  const CoupledMesh m = build_coupled_mesh(3);
  const SubMesh& s = m.porous;
  for (std::size_t t = 0; t < s.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const Edge& e = s.edges[s.triangle_edges[t][k]];
      const std::set<int> want{s.triangles[t][k], s.triangles[t][(k + 1) % 3]};
      EXPECT_EQ((std::set<int>{e.vertices[0], e.vertices[1]}), want);
    }
  }
}

TEST(Mesh, DiagonalRunsLowerLeftToUpperRight) {
  const SubMesh s = build_unit_square(1, {0.0, 0.0}, 1.0);
  bool found = false;
  for (const auto& e : s.edges) {
    if (e.on_boundary()) continue;
    const Point2 a = s.vertices[e.vertices[0]], b = s.vertices[e.vertices[1]];
    found = (a == Point2{0, 0} && b == Point2{1, 1}) || (a == Point2{1, 1} && b == Point2{0, 0});
  }
  EXPECT_TRUE(found);
}

TEST(Mesh, InterfaceEdgesOnLineAndPaired) {
  const CoupledMesh m = build_coupled_mesh(9);
  for (const SubMesh* s : {&m.fluid, &m.porous}) {
    for (const auto& e : s->edges) {
      if (e.marker != EdgeMarker::Interface) continue;
      for (int v : e.vertices) {
        EXPECT_EQ(s->vertices[v].y, 1.0);
        EXPECT_GE(s->vertices[v].x, 0.0);
        EXPECT_LE(s->vertices[v].x, 1.0);
      }
    }
  }
  ASSERT_EQ(m.interface_pairs.size(), 9u);
  for (const auto& pair : m.interface_pairs) {
    const Edge& ef = m.fluid.edges[pair.fluid_edge];
    const Edge& ep = m.porous.edges[pair.porous_edge];
    EXPECT_EQ(ef.marker, EdgeMarker::Interface);
    EXPECT_EQ(ep.marker, EdgeMarker::Interface);
    std::set<double> xf, xp;
    for (int v : ef.vertices) xf.insert(m.fluid.vertices[v].x);
    for (int v : ep.vertices) xp.insert(m.porous.vertices[v].x);
    ASSERT_EQ(xf.size(), 2u);
    ASSERT_EQ(xp.size(), 2u);
    EXPECT_NEAR(*xf.begin(), *xp.begin(), 1e-14);
    EXPECT_NEAR(*xf.rbegin(), *xp.rbegin(), 1e-14);
    EXPECT_NEAR(*xf.rbegin() - *xf.begin(), 1.0 / 9.0, 1e-14);
    EXPECT_NEAR(*xp.rbegin() - *xp.begin(), 1.0 / 9.0, 1e-14);
  }
}

TEST(Mesh, OuterBoundaryVertexCounts) {
  EXPECT_EQ(outer_boundary_vertices(build_coupled_mesh(1).fluid).size(), 4u);

  const SubMesh p2 = build_coupled_mesh(2).porous;
  const auto outer2 = outer_boundary_vertices(p2);
  EXPECT_EQ(outer2.size(), 7u);
  // Excluded: the centre and the interface midpoint (0.5, 1).
  for (int v = 0; v < 9; ++v) {
    const bool excluded = std::find(outer2.begin(), outer2.end(), v) == outer2.end();
    if (excluded) {
      EXPECT_EQ(p2.vertices[v].x, 0.5);
      EXPECT_TRUE(p2.vertices[v].y == 0.5 || p2.vertices[v].y == 1.0);
    }
  }

  // Oracle: enumerate the 5x5 grid, keep boundary points off the open interface.
  const SubMesh p4 = build_coupled_mesh(4).porous;
  int expected = 0;
  for (const Point2& v : p4.vertices) {
    const bool boundary = v.x == 0.0 || v.x == 1.0 || v.y == 0.0 || v.y == 1.0;
    const bool open_interface = v.y == 1.0 && v.x > 0.0 && v.x < 1.0;
    expected += boundary && !open_interface;
  }
  EXPECT_EQ(expected, 13);
  EXPECT_EQ(outer_boundary_vertices(p4).size(), 13u);
}

TEST(Mesh, Deterministic) {
  const CoupledMesh a = build_coupled_mesh(6);
  const CoupledMesh b = build_coupled_mesh(6);
  EXPECT_EQ(a.fluid.vertices, b.fluid.vertices);
  EXPECT_EQ(a.porous.triangles, b.porous.triangles);
  std::ostringstream da, db;
  write_mesh(a, da);
  write_mesh(b, db);
  EXPECT_EQ(da.str(), db.str());
}

TEST(Mesh, DumpFormat) {
  std::ostringstream out;
  write_mesh(build_coupled_mesh(1), out);
  std::istringstream in(out.str());
  std::map<char, int> kinds;
  std::string line;
  while (std::getline(in, line)) ++kinds[line.at(0)];
  EXPECT_EQ(kinds['v'], 8);
  EXPECT_EQ(kinds['t'], 4);
  EXPECT_EQ(kinds['g'], 1);
}
