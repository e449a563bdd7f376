#include "sdflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdflow {

double SubMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Point2& a = vertices[tri[0]];
  const Point2& b = vertices[tri[1]];
  const Point2& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point2 SubMesh::edge_midpoint(int e) const {
  const Point2& a = vertices[edges[e].vertices[0]];
  const Point2& b = vertices[edges[e].vertices[1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

SubMesh build_unit_square(int n, Point2 origin, double interface_y) {
  if (n < 1) {
    throw std::invalid_argument("mesh subdivision count must be >= 1, got " +
                                std::to_string(n));
  }
  SubMesh mesh;
  const int np = n + 1;
  const double h = 1.0 / n;

  mesh.vertices.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      // Last row/column snapped exactly so both submeshes agree on y = 1.
      const double x = (i == n) ? origin.x + 1.0 : origin.x + i * h;
      const double y = (j == n) ? origin.y + 1.0 : origin.y + j * h;
      mesh.vertices.push_back({x, y});
    }
  }

  auto vid = [np](int i, int j) { return i + np * j; };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1);
      const int v01 = vid(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] =
          edge_index.try_emplace({key.first, key.second},
                                 static_cast<int>(mesh.edges.size()));
      if (inserted) {
        Edge edge;
        edge.vertices = {a, b};
        edge.triangles = {t, -1};
        mesh.edges.push_back(edge);
      } else {
        mesh.edges[it->second].triangles[1] = t;
      }
      mesh.triangle_edges[t][k] = it->second;
    }
  }

  for (auto& edge : mesh.edges) {
    if (!edge.on_boundary()) continue;
    const Point2& a = mesh.vertices[edge.vertices[0]];
    const Point2& b = mesh.vertices[edge.vertices[1]];
    const bool on_interface = a.y == interface_y && b.y == interface_y;
    edge.marker = on_interface ? EdgeMarker::Interface : EdgeMarker::Outer;
  }
  return mesh;
}

CoupledMesh build_coupled_mesh(int n) {
  CoupledMesh mesh;
  mesh.n = n;
  mesh.porous = build_unit_square(n, {0.0, 0.0}, 1.0);
  mesh.fluid = build_unit_square(n, {0.0, 1.0}, 1.0);
  mesh.h = 1.0 / n;

  auto interface_edges = [](const SubMesh& m) {
    std::vector<std::pair<double, int>> out;
    for (int e = 0; e < static_cast<int>(m.edges.size()); ++e) {
      if (m.edges[e].marker == EdgeMarker::Interface) {
        out.emplace_back(m.edge_midpoint(e).x, e);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto fluid_edges = interface_edges(mesh.fluid);
  const auto porous_edges = interface_edges(mesh.porous);
  if (fluid_edges.size() != porous_edges.size()) {
    throw std::logic_error("interface edge counts differ between submeshes");
  }
  for (std::size_t k = 0; k < fluid_edges.size(); ++k) {
    mesh.interface_pairs.push_back({fluid_edges[k].second, porous_edges[k].second});
  }
  return mesh;
}

std::vector<int> outer_boundary_vertices(const SubMesh& mesh) {
  std::vector<char> flag(mesh.vertices.size(), 0);
  for (const auto& edge : mesh.edges) {
    if (edge.marker == EdgeMarker::Outer) {
      flag[edge.vertices[0]] = 1;
      flag[edge.vertices[1]] = 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(flag.size()); ++v) {
    if (flag[v]) out.push_back(v);
  }
  return out;
}

void write_mesh(const CoupledMesh& mesh, std::ostream& out) {
  auto dump = [&out](const SubMesh& m) {
    for (const auto& v : m.vertices) out << "v " << v.x << ' ' << v.y << '\n';
    for (const auto& t : m.triangles) {
      out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
  };
  dump(mesh.fluid);
  dump(mesh.porous);
  for (const auto& pair : mesh.interface_pairs) {
    out << "g " << pair.fluid_edge << ' ' << pair.porous_edge << '\n';
  }
}

}  // namespace sdflow
