#include "hdgbddc/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hdgbddc {

BoundFactors bound_factors(double beta, double H, double h) {
  if (beta <= 0 || H <= 0 || h <= 0 || h > H)
    throw std::invalid_argument("bound_factors: need beta > 0 and 0 < h <= H");
  BoundFactors f;
  f.beta = beta;
  f.H = H;
  f.h = h;
  const double sb = std::sqrt(beta);      // beta^(1/2)
  const double qb = std::sqrt(sb);        // beta^(1/4)
  const double lg = 1.0 + std::log(H / h);
  f.c0 = h / sb + 1.0;
  f.C_ED = f.c0 * (1.0 + H / sb) * lg;
  f.C_EDM = (1.0 + f.c0 * H / qb) * f.C_ED;
  f.gamma1 = (1.0 + qb) * f.c0;
  f.alpha1 = H * ((1.0 + 1.0 / sb) * f.c0 * f.c0 + 1.0 / qb);
  f.alpha2 = H * ((1.0 + 1.0 / sb) * f.c0 * f.c0 + f.C_ED / qb);
  f.c1 = f.c0 * H * f.C_ED / qb;
  f.c2 = f.gamma1 * f.alpha2;
  f.c3 = f.c0 * H * (1.0 + 1.0 / sb);
  f.c4 = f.gamma1 * f.alpha1;
  f.Cu = f.C_EDM * f.C_EDM;
  f.cl = 1.0 - f.c2 * f.C_EDM - f.c3 * f.C_EDM * f.C_EDM;
  return f;
}

double predicted_rate(const BoundFactors& f, int m) {
  const double ratio = (f.cl / f.Cu) * (f.cl / f.Cu);
  return std::pow(1.0 - ratio, 0.5 * m);
}

std::string bound_factors_csv(const std::vector<BoundFactors>& rows) {
  std::string out = "beta,H,h,c0,C_ED,C_EDM,Cu_factor,cl_factor\n";
  char buf[256];
  for (const auto& f : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.10g,%.10g,%.10g,%.10g,%.10g\n", f.beta, f.H,
                  f.h, f.c0, f.C_ED, f.C_EDM, f.Cu, f.cl);
    out += buf;
  }
  return out;
}

namespace {

double boundary_norms(const TraceSystem& ts, const Eigen::VectorXd& lambda, int subdomain,
                      bool centered) {
  const Mesh& mesh = *ts.mesh;
  const EdgeBasis eb(ts.k);
  const LineRule er = line_gauss(ts.k + 2);
  const Eigen::MatrixXd ev = eb.eval(er.t);
  const int nb = ts.k + 1;

  std::vector<int> all_tris;
  const std::vector<int>* tris = nullptr;
  if (subdomain >= 0) {
    tris = &mesh.sub_tris[subdomain];
  } else {
    all_tris.resize(mesh.tris.size());
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) all_tris[t] = static_cast<int>(t);
    tris = &all_tris;
  }

  double acc = 0.0;
  for (int t : *tris) {
    // Edge values of both fields at the quadrature points.
    std::array<Eigen::VectorXd, 2> vals[3];
    double perimeter = 0.0;
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.tris[t].edge[le];
      perimeter += mesh.edges[e].length;
      for (int f = 0; f < 2; ++f) {
        vals[le][f] = Eigen::VectorXd::Zero(er.n());
        if (ts.space.edge_offset[e] < 0) continue;
        for (int a = 0; a < nb; ++a)
          vals[le][f] += lambda(ts.space.dof(e, a, f)) * ev.col(a);
      }
    }
    for (int f = 0; f < 2; ++f) {
      double mean = 0.0;
      if (centered) {
        for (int le = 0; le < 3; ++le)
          mean += mesh.edges[mesh.tris[t].edge[le]].length * er.w.dot(vals[le][f]);
        mean /= perimeter;
      }
      for (int le = 0; le < 3; ++le) {
        const double len = mesh.edges[mesh.tris[t].edge[le]].length;
        acc += len * (vals[le][f].array() - mean).square().matrix().dot(er.w);
      }
    }
  }
  return acc;
}

}  // namespace

double h_norm(const TraceSystem& ts, const Eigen::VectorXd& lambda, int subdomain) {
  // |D| / |dD| is H/4 for a subdomain and 1/4 for the unit square.
  const double scale = subdomain >= 0 ? ts.mesh->H / 4.0 : 0.25;
  return std::sqrt(scale * boundary_norms(ts, lambda, subdomain, false));
}

double triple_norm(const TraceSystem& ts, const Eigen::VectorXd& lambda, int subdomain) {
  const double scale = subdomain >= 0 ? ts.mesh->H / 4.0 : 0.25;
  return std::sqrt(boundary_norms(ts, lambda, subdomain, true) / scale);
}

}  // namespace hdgbddc
