#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hdgbddc {

// Uniform triangulation of the unit square. The domain is split into
// nsub x nsub square subdomains, each subdomain into m x m squares, and
// every square into two triangles along the diagonal from its lower-left
// to its upper-right corner.
struct MeshConfig {
  int nsub = 1;  // subdomains per direction
  int m = 1;     // squares per subdomain per direction
};

enum class EdgeClass : std::uint8_t { Interior, Interface, Dirichlet };

struct Edge {
  std::array<int, 2> v{-1, -1};    // endpoints; v[0] -> v[1] is the canonical
                                   // direction (increasing x, then y)
  std::array<int, 2> tri{-1, -1};  // adjacent triangles, tri[0] < tri[1]
  EdgeClass cls = EdgeClass::Interior;
  std::array<double, 2> normal{0.0, 0.0};  // unit normal away from tri[0]
  double length = 0.0;
  int macro_edge = -1;    // enclosing macro edge for Interface edges
  int pos_in_macro = -1;  // position along that macro edge
};

struct Tri {
  std::array<int, 3> v{};     // vertex ids, counterclockwise
  std::array<int, 3> edge{};  // edge i sits opposite vertex i
  int subdomain = 0;
};

// Shared boundary segment between two adjacent subdomains. The arc-length
// parametrization runs from p0 to p1 in the direction of increasing global
// coordinate; the master side is the lower subdomain id.
struct MacroEdge {
  int sub_lo = -1;
  int sub_hi = -1;
  bool vertical = false;  // separates horizontally adjacent subdomains
  std::vector<int> edges; // member mesh edges, ordered along the param
  std::array<double, 2> p0{}, p1{};
  double length = 0.0;
};

struct Mesh {
  MeshConfig cfg;
  int grid = 0;  // squares per direction, nsub * m
  double h = 0.0;
  double H = 0.0;
  std::vector<std::array<double, 2>> vertices;
  std::vector<Tri> tris;
  std::vector<Edge> edges;
  std::vector<MacroEdge> macro_edges;
  std::vector<std::vector<int>> sub_tris;  // triangle ids per subdomain

  int n_subdomains() const { return cfg.nsub * cfg.nsub; }
};

Mesh build_structured_mesh(const MeshConfig& cfg);

// Outward unit normal of triangle t on its local edge le.
std::array<double, 2> outward_normal(const Mesh& mesh, int t, int le);

std::string mesh_to_json(const Mesh& mesh);

}  // namespace hdgbddc
