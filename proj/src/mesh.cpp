#include "hdgbddc/mesh.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdgbddc {

namespace {

// Edge ids are laid out in three blocks: horizontal, vertical, diagonal.
struct EdgeIndexer {
  int g;
  int n_h() const { return g * (g + 1); }
  int n_v() const { return (g + 1) * g; }
  int horizontal(int ix, int iy) const { return iy * g + ix; }
  int vertical(int ix, int iy) const { return n_h() + iy * (g + 1) + ix; }
  int diagonal(int ix, int iy) const { return n_h() + n_v() + iy * g + ix; }
};

void attach(Edge& e, int tri) {
  if (e.tri[0] < 0) {
    e.tri[0] = tri;
  } else {
    assert(e.tri[1] < 0);
    if (tri < e.tri[0]) {
      e.tri[1] = e.tri[0];
      e.tri[0] = tri;
    } else {
      e.tri[1] = tri;
    }
  }
}

}  // namespace

Mesh build_structured_mesh(const MeshConfig& cfg) {
  if (cfg.nsub < 1 || cfg.m < 1) throw std::invalid_argument("mesh: nsub and m must be >= 1");
  Mesh mesh;
  mesh.cfg = cfg;
  const int g = cfg.nsub * cfg.m;
  mesh.grid = g;
  mesh.h = 1.0 / g;
  mesh.H = 1.0 / cfg.nsub;

  mesh.vertices.resize((g + 1) * (g + 1));
  for (int iy = 0; iy <= g; ++iy)
    for (int ix = 0; ix <= g; ++ix)
      mesh.vertices[iy * (g + 1) + ix] = {ix * mesh.h, iy * mesh.h};

  const EdgeIndexer ei{g};
  mesh.edges.resize(ei.n_h() + ei.n_v() + g * g);
  auto vid = [g](int ix, int iy) { return iy * (g + 1) + ix; };

  for (int iy = 0; iy <= g; ++iy)
    for (int ix = 0; ix < g; ++ix) {
      Edge& e = mesh.edges[ei.horizontal(ix, iy)];
      e.v = {vid(ix, iy), vid(ix + 1, iy)};
    }
  for (int iy = 0; iy < g; ++iy)
    for (int ix = 0; ix <= g; ++ix) {
      Edge& e = mesh.edges[ei.vertical(ix, iy)];
      e.v = {vid(ix, iy), vid(ix, iy + 1)};
    }
  for (int iy = 0; iy < g; ++iy)
    for (int ix = 0; ix < g; ++ix) {
      Edge& e = mesh.edges[ei.diagonal(ix, iy)];
      e.v = {vid(ix, iy), vid(ix + 1, iy + 1)};
    }

  mesh.tris.resize(2 * g * g);
  mesh.sub_tris.assign(cfg.nsub * cfg.nsub, {});
  for (int iy = 0; iy < g; ++iy)
    for (int ix = 0; ix < g; ++ix) {
      const int s = iy * g + ix;
      const int a = vid(ix, iy), b = vid(ix + 1, iy), c = vid(ix + 1, iy + 1), d = vid(ix, iy + 1);
      const int sub = (iy / cfg.m) * cfg.nsub + (ix / cfg.m);
      Tri& lo = mesh.tris[2 * s];
      lo.v = {a, b, c};
      lo.edge = {ei.vertical(ix + 1, iy), ei.diagonal(ix, iy), ei.horizontal(ix, iy)};
      lo.subdomain = sub;
      Tri& up = mesh.tris[2 * s + 1];
      up.v = {a, c, d};
      up.edge = {ei.horizontal(ix, iy + 1), ei.vertical(ix, iy), ei.diagonal(ix, iy)};
      up.subdomain = sub;
      mesh.sub_tris[sub].push_back(2 * s);
      mesh.sub_tris[sub].push_back(2 * s + 1);
      for (int le = 0; le < 3; ++le) attach(mesh.edges[lo.edge[le]], 2 * s);
      for (int le = 0; le < 3; ++le) attach(mesh.edges[up.edge[le]], 2 * s + 1);
    }

  // Edge classes. Only full horizontal/vertical edges can lie on a
  // subdomain boundary line; diagonals are always interior.
  for (int iy = 0; iy <= g; ++iy)
    for (int ix = 0; ix < g; ++ix) {
      Edge& e = mesh.edges[ei.horizontal(ix, iy)];
      if (iy == 0 || iy == g)
        e.cls = EdgeClass::Dirichlet;
      else if (iy % cfg.m == 0)
        e.cls = EdgeClass::Interface;
    }
  for (int iy = 0; iy < g; ++iy)
    for (int ix = 0; ix <= g; ++ix) {
      Edge& e = mesh.edges[ei.vertical(ix, iy)];
      if (ix == 0 || ix == g)
        e.cls = EdgeClass::Dirichlet;
      else if (ix % cfg.m == 0)
        e.cls = EdgeClass::Interface;
    }

  for (std::size_t id = 0; id < mesh.edges.size(); ++id) {
    Edge& e = mesh.edges[id];
    const auto& p = mesh.vertices[e.v[0]];
    const auto& q = mesh.vertices[e.v[1]];
    e.length = std::hypot(q[0] - p[0], q[1] - p[1]);
    assert(e.tri[0] >= 0);
    assert((e.tri[1] >= 0) == (e.cls != EdgeClass::Dirichlet));
    const Tri& t0 = mesh.tris[e.tri[0]];
    for (int le = 0; le < 3; ++le)
      if (t0.edge[le] == static_cast<int>(id)) e.normal = outward_normal(mesh, e.tri[0], le);
  }

  // Macro edges: per subdomain in row-major order, first the shared edge
  // with its right neighbor, then with its top neighbor.
  const int n = cfg.nsub;
  for (int sy = 0; sy < n; ++sy)
    for (int sx = 0; sx < n; ++sx) {
      if (sx + 1 < n) {
        MacroEdge me;
        me.sub_lo = sy * n + sx;
        me.sub_hi = sy * n + sx + 1;
        me.vertical = true;
        const int ix = (sx + 1) * cfg.m;
        for (int iy = sy * cfg.m; iy < (sy + 1) * cfg.m; ++iy) me.edges.push_back(ei.vertical(ix, iy));
        me.p0 = {ix * mesh.h, sy * mesh.H};
        me.p1 = {ix * mesh.h, (sy + 1) * mesh.H};
        me.length = mesh.H;
        mesh.macro_edges.push_back(std::move(me));
      }
      if (sy + 1 < n) {
        MacroEdge me;
        me.sub_lo = sy * n + sx;
        me.sub_hi = (sy + 1) * n + sx;
        me.vertical = false;
        const int iy = (sy + 1) * cfg.m;
        for (int ix = sx * cfg.m; ix < (sx + 1) * cfg.m; ++ix) me.edges.push_back(ei.horizontal(ix, iy));
        me.p0 = {sx * mesh.H, iy * mesh.h};
        me.p1 = {(sx + 1) * mesh.H, iy * mesh.h};
        me.length = mesh.H;
        mesh.macro_edges.push_back(std::move(me));
      }
    }
  for (std::size_t mi = 0; mi < mesh.macro_edges.size(); ++mi) {
    const auto& me = mesh.macro_edges[mi];
    for (std::size_t pos = 0; pos < me.edges.size(); ++pos) {
      mesh.edges[me.edges[pos]].macro_edge = static_cast<int>(mi);
      mesh.edges[me.edges[pos]].pos_in_macro = static_cast<int>(pos);
    }
  }
  return mesh;
}

std::array<double, 2> outward_normal(const Mesh& mesh, int t, int le) {
  const Tri& tri = mesh.tris[t];
  const auto& p = mesh.vertices[tri.v[(le + 1) % 3]];
  const auto& q = mesh.vertices[tri.v[(le + 2) % 3]];
  // For a counterclockwise triangle the outward normal of the directed
  // edge p->q is the clockwise rotation of q - p.
  const double dx = q[0] - p[0], dy = q[1] - p[1];
  const double len = std::hypot(dx, dy);
  return {dy / len, -dx / len};
}

std::string mesh_to_json(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"nsub\": " << mesh.cfg.nsub << ", \"m\": " << mesh.cfg.m << ", \"grid\": " << mesh.grid
     << ", \"h\": " << mesh.h << ", \"H\": " << mesh.H << ",\n  \"vertices\": [";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << (i ? "," : "") << "[" << mesh.vertices[i][0] << "," << mesh.vertices[i][1] << "]";
  os << "],\n  \"triangles\": [";
  for (std::size_t i = 0; i < mesh.tris.size(); ++i) {
    const Tri& t = mesh.tris[i];
    os << (i ? "," : "") << "{\"v\":[" << t.v[0] << "," << t.v[1] << "," << t.v[2] << "],\"edges\":["
       << t.edge[0] << "," << t.edge[1] << "," << t.edge[2] << "],\"sub\":" << t.subdomain << "}";
  }
  os << "],\n  \"edges\": [";
  static const char* cls_name[] = {"interior", "interface", "dirichlet"};
  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    const Edge& e = mesh.edges[i];
    os << (i ? "," : "") << "{\"v\":[" << e.v[0] << "," << e.v[1] << "],\"class\":\""
       << cls_name[static_cast<int>(e.cls)] << "\",\"macro\":" << e.macro_edge << "}";
  }
  os << "],\n  \"macro_edges\": [";
  for (std::size_t i = 0; i < mesh.macro_edges.size(); ++i) {
    const MacroEdge& me = mesh.macro_edges[i];
    os << (i ? "," : "") << "{\"subs\":[" << me.sub_lo << "," << me.sub_hi << "],\"vertical\":"
       << (me.vertical ? "true" : "false") << ",\"edges\":[";
    for (std::size_t j = 0; j < me.edges.size(); ++j) os << (j ? "," : "") << me.edges[j];
    os << "]}";
  }
  os << "]\n}\n";
  return os.str();
}

}  // namespace hdgbddc
