#include "hdgbddc/fespace.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgbddc {

namespace {

// Exponents (a, b) of the monomials x^a y^b with a + b <= k, by total degree.
std::vector<std::array<int, 2>> tri_monomials(int k) {
  std::vector<std::array<int, 2>> mono;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a) mono.push_back({a, d - a});
  return mono;
}

Eigen::MatrixXd tri_monomial_values(const std::vector<std::array<int, 2>>& mono,
                                    const Eigen::MatrixX2d& pts) {
  Eigen::MatrixXd m(pts.rows(), mono.size());
  for (Eigen::Index q = 0; q < pts.rows(); ++q)
    for (std::size_t j = 0; j < mono.size(); ++j)
      m(q, j) = std::pow(pts(q, 0), mono[j][0]) * std::pow(pts(q, 1), mono[j][1]);
  return m;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  QuadratureRule rule;
  auto set = [&rule](const std::vector<std::array<double, 3>>& rows) {
    // rows: {w, a, b} with barycentric point (a, b, 1-a-b); the weight is
    // relative to unit total mass and every row is expanded symmetrically.
    std::vector<std::array<double, 3>> pts;
    for (const auto& r : rows) {
      const double w = r[0], a = r[1], b = r[2], c = 1.0 - a - b;
      std::vector<std::array<double, 2>> orbit;
      auto add = [&orbit](double u, double v) {
        for (const auto& p : orbit)
          if (std::abs(p[0] - u) + std::abs(p[1] - v) < 1e-14) return;
        orbit.push_back({u, v});
      };
      add(a, b); add(b, c); add(c, a); add(b, a); add(c, b); add(a, c);
      for (const auto& p : orbit) pts.push_back({w, p[0], p[1]});
    }
    rule.pts.resize(pts.size(), 2);
    rule.w.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      rule.w(i) = 0.5 * pts[i][0];
      rule.pts(i, 0) = pts[i][1];
      rule.pts(i, 1) = pts[i][2];
    }
  };
  if (degree <= 2) {
    set({{1.0 / 3.0, 2.0 / 3.0, 1.0 / 6.0}});
  } else if (degree <= 4) {
    set({{0.223381589678011, 0.108103018168070, 0.445948490915965},
         {0.109951743655322, 0.816847572980459, 0.091576213509771}});
  } else if (degree <= 6) {
    set({{0.116786275726379, 0.501426509658179, 0.249286745170910},
         {0.050844906370207, 0.873821971016996, 0.063089014491502},
         {0.082851075618374, 0.053145049844816, 0.310352451033785}});
  } else {
    throw std::invalid_argument("triangle_rule: degree > 6 not tabulated");
  }
  return rule;
}

QuadratureRule triangle_tensor_rule(int q) {
  const LineRule g = line_gauss(q);
  QuadratureRule rule;
  rule.pts.resize(q * q, 2);
  rule.w.resize(q * q);
  // Collapse the unit square: x = u (1 - v), y = v, Jacobian 1 - v.
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const int idx = i * q + j;
      const double u = g.t(i), v = g.t(j);
      rule.pts(idx, 0) = u * (1.0 - v);
      rule.pts(idx, 1) = v;
      rule.w(idx) = g.w(i) * g.w(j) * (1.0 - v);
    }
  return rule;
}

LineRule line_gauss(int npts) {
  if (npts < 1) throw std::invalid_argument("line_gauss: npts must be >= 1");
  LineRule rule;
  rule.t.resize(npts);
  rule.w.resize(npts);
  // Newton iteration on the Legendre polynomial, nodes on [-1,1] then
  // mapped to [0,1].
  for (int i = 0; i < npts; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (npts == 1) { p1 = x; }
      for (int n = 2; n <= npts; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (npts == 1) ? x : p1;
      const double pm = (npts == 1) ? 1.0 : p0;
      dp = npts * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.t(npts - 1 - i) = 0.5 * (1.0 + x);
    rule.w(npts - 1 - i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

TriBasis::TriBasis(int k) : k_(k), ndof_((k + 1) * (k + 2) / 2) {
  if (k < 1) throw std::invalid_argument("TriBasis: k must be >= 1");
  const auto mono = tri_monomials(k);
  Eigen::MatrixX2d nodes(ndof_, 2);
  int idx = 0;
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= k - j; ++i) nodes.row(idx++) << double(i) / k, double(j) / k;
  const Eigen::MatrixXd v = tri_monomial_values(mono, nodes);
  coeff_ = v.partialPivLu().inverse();
}

Eigen::MatrixXd TriBasis::eval(const Eigen::MatrixX2d& pts) const {
  return tri_monomial_values(tri_monomials(k_), pts) * coeff_;
}

std::array<Eigen::MatrixXd, 2> TriBasis::grad(const Eigen::MatrixX2d& pts) const {
  const auto mono = tri_monomials(k_);
  Eigen::MatrixXd dx(pts.rows(), mono.size()), dy(pts.rows(), mono.size());
  for (Eigen::Index q = 0; q < pts.rows(); ++q)
    for (std::size_t j = 0; j < mono.size(); ++j) {
      const int a = mono[j][0], b = mono[j][1];
      dx(q, j) = a == 0 ? 0.0 : a * std::pow(pts(q, 0), a - 1) * std::pow(pts(q, 1), b);
      dy(q, j) = b == 0 ? 0.0 : b * std::pow(pts(q, 0), a) * std::pow(pts(q, 1), b - 1);
    }
  return {dx * coeff_, dy * coeff_};
}

EdgeBasis::EdgeBasis(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("EdgeBasis: k must be >= 1");
  Eigen::MatrixXd v(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) v(i, j) = std::pow(double(i) / k, j);
  coeff_ = v.partialPivLu().inverse();
}

Eigen::MatrixXd EdgeBasis::eval(const Eigen::VectorXd& t) const {
  Eigen::MatrixXd m(t.size(), k_ + 1);
  for (Eigen::Index q = 0; q < t.size(); ++q)
    for (int j = 0; j <= k_; ++j) m(q, j) = std::pow(t(q), j);
  return m * coeff_;
}

TraceSpace build_trace_space(const Mesh& mesh, int k) {
  TraceSpace sp;
  sp.k = k;
  sp.per_edge = 2 * (k + 1);
  sp.edge_offset.assign(mesh.edges.size(), -1);
  int next = 0;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (mesh.edges[e].cls == EdgeClass::Dirichlet) continue;
    sp.edge_offset[e] = next;
    next += sp.per_edge;
  }
  sp.n_dofs = next;

  sp.gamma_index.assign(sp.n_dofs, -1);
  sp.interior_index.assign(sp.n_dofs, -1);
  for (const MacroEdge& me : mesh.macro_edges)
    for (int e : me.edges)
      for (int d = 0; d < sp.per_edge; ++d) {
        const int dof = sp.edge_offset[e] + d;
        sp.gamma_index[dof] = static_cast<int>(sp.gamma_dofs.size());
        sp.gamma_dofs.push_back(dof);
      }
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (mesh.edges[e].cls != EdgeClass::Interior) continue;
    for (int d = 0; d < sp.per_edge; ++d) {
      const int dof = sp.edge_offset[e] + d;
      sp.interior_index[dof] = static_cast<int>(sp.interior_dofs.size());
      sp.interior_dofs.push_back(dof);
    }
  }

  sp.sub.resize(mesh.n_subdomains());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const Edge& edge = mesh.edges[e];
    if (edge.cls != EdgeClass::Interior) continue;
    const int s = mesh.tris[edge.tri[0]].subdomain;
    for (int d = 0; d < sp.per_edge; ++d) sp.sub[s].interior.push_back(sp.edge_offset[e] + d);
  }
  for (std::size_t mi = 0; mi < mesh.macro_edges.size(); ++mi) {
    sp.sub[mesh.macro_edges[mi].sub_lo].macro.push_back(static_cast<int>(mi));
    sp.sub[mesh.macro_edges[mi].sub_hi].macro.push_back(static_cast<int>(mi));
  }
  for (auto& sd : sp.sub)
    for (int mi : sd.macro)
      for (int e : mesh.macro_edges[mi].edges)
        for (int d = 0; d < sp.per_edge; ++d)
          sd.gamma.push_back(sp.gamma_index[sp.edge_offset[e] + d]);
  return sp;
}

}  // namespace hdgbddc
