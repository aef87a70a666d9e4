#include "hdgbddc/hdg.hpp"

#include <cmath>

namespace hdgbddc {

namespace {

struct ElemGeom {
  Eigen::Matrix2d jac, inv_jt;
  double det = 0.0;
  Eigen::Vector2d p0;
};

ElemGeom geometry(const Mesh& mesh, int tri) {
  const Tri& t = mesh.tris[tri];
  ElemGeom g;
  const auto& a = mesh.vertices[t.v[0]];
  const auto& b = mesh.vertices[t.v[1]];
  const auto& c = mesh.vertices[t.v[2]];
  g.p0 << a[0], a[1];
  g.jac << b[0] - a[0], c[0] - a[0], b[1] - a[1], c[1] - a[1];
  g.det = g.jac.determinant();
  g.inv_jt = g.jac.inverse().transpose();
  return g;
}

}  // namespace

Stabilizers stabilizers_for(const Mesh& mesh, const Velocity& zeta) {
  Stabilizers stab;
  stab.tau1.resize(mesh.tris.size());
  for (std::size_t t = 0; t < mesh.tris.size(); ++t)
    for (int le = 0; le < 3; ++le) {
      const Edge& e = mesh.edges[mesh.tris[t].edge[le]];
      const auto n = outward_normal(mesh, static_cast<int>(t), le);
      const auto& p = mesh.vertices[e.v[0]];
      const auto& q = mesh.vertices[e.v[1]];
      const auto zp = zeta(p[0], p[1]);
      const auto zq = zeta(q[0], q[1]);
      const double zn = std::max(zp[0] * n[0] + zp[1] * n[1], zq[0] * n[0] + zq[1] * n[1]);
      stab.tau1[t][le] = std::max(zn, 0.0) + 1.0;
    }
  return stab;
}

ElementAssembler::ElementAssembler(const Mesh& mesh, int k, const Stabilizers& stab,
                                   const ProblemConfig& prob)
    : mesh_(mesh),
      k_(k),
      stab_(stab),
      prob_(prob),
      basis_(k),
      edge_basis_(k),
      vol_rule_(triangle_rule(2 * k + 2)),
      load_rule_(triangle_tensor_rule(10)),
      edge_rule_(line_gauss(k + 2)) {
  vol_vals_ = basis_.eval(vol_rule_.pts);
  vol_grads_ = basis_.grad(vol_rule_.pts);
  load_vals_ = basis_.eval(load_rule_.pts);
}

Eigen::MatrixXd ElementAssembler::mass_matrix(int tri) const {
  const ElemGeom g = geometry(mesh_, tri);
  return g.det * (vol_vals_.transpose() * vol_rule_.w.asDiagonal() * vol_vals_);
}

Eigen::VectorXd ElementAssembler::load(int tri) const {
  const int np = basis_.ndof();
  const ElemGeom g = geometry(mesh_, tri);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n_interior());
  for (int q = 0; q < load_rule_.n(); ++q) {
    const Eigen::Vector2d x = g.p0 + g.jac * load_rule_.pts.row(q).transpose();
    const double w = load_rule_.w(q) * g.det;
    const double fv = w * prob_.f(x(0), x(1));
    const double gv = w * prob_.g(x(0), x(1));
    for (int i = 0; i < np; ++i) {
      z(2 * np + i) += fv * load_vals_(q, i);
      z(5 * np + i) += gv * load_vals_(q, i);
    }
  }
  return z;
}

LocalSystem ElementAssembler::assemble(int tri) const {
  const int np = basis_.ndof();
  const int nb = k_ + 1;           // edge basis functions
  const int nint = 6 * np;
  const int ntr = 6 * nb;
  const double sb = std::sqrt(prob_.beta);
  const Tri& t = mesh_.tris[tri];
  const ElemGeom g = geometry(mesh_, tri);

  LocalSystem ls;
  ls.Aii = Eigen::MatrixXd::Zero(nint, nint);
  ls.Ail = Eigen::MatrixXd::Zero(nint, ntr);
  ls.Ali = Eigen::MatrixXd::Zero(ntr, nint);
  ls.All = Eigen::MatrixXd::Zero(ntr, ntr);

  // Volume contributions.
  const Eigen::VectorXd wq = g.det * vol_rule_.w;
  Eigen::MatrixXd gx = vol_grads_[0] * g.inv_jt(0, 0) + vol_grads_[1] * g.inv_jt(0, 1);
  Eigen::MatrixXd gy = vol_grads_[0] * g.inv_jt(1, 0) + vol_grads_[1] * g.inv_jt(1, 1);
  const Eigen::MatrixXd mw = vol_vals_.transpose() * wq.asDiagonal() * vol_vals_;
  const std::array<Eigen::MatrixXd, 2> div = {gx.transpose() * wq.asDiagonal() * vol_vals_,
                                              gy.transpose() * wq.asDiagonal() * vol_vals_};
  Eigen::VectorXd zx(vol_rule_.n()), zy(vol_rule_.n());
  for (int q = 0; q < vol_rule_.n(); ++q) {
    const Eigen::Vector2d x = g.p0 + g.jac * vol_rule_.pts.row(q).transpose();
    const auto z = prob_.zeta(x(0), x(1));
    zx(q) = z[0];
    zy(q) = z[1];
  }
  const Eigen::MatrixXd adv = gx.transpose() * (wq.cwiseProduct(zx)).asDiagonal() * vol_vals_ +
                              gy.transpose() * (wq.cwiseProduct(zy)).asDiagonal() * vol_vals_;

  // Offsets: field 0 carries (q, y), field 1 carries (qd, p).
  const auto scatter_volume = [&](int field) {
    const int q0 = field == 0 ? 0 : 3 * np;
    const int y0 = field == 0 ? 2 * np : 5 * np;
    const double zsign = field == 0 ? 1.0 : -1.0;
    for (int c = 0; c < 2; ++c) {
      ls.Aii.block(q0 + c * np, q0 + c * np, np, np) -= sb * mw;
      ls.Aii.block(q0 + c * np, y0, np, np) += sb * div[c];
      ls.Aii.block(y0, q0 + c * np, np, np) += sb * div[c].transpose();
    }
    ls.Aii.block(y0, y0, np, np) -= sb * zsign * adv;
  };
  scatter_volume(0);
  scatter_volume(1);
  ls.Aii.block(2 * np, 5 * np, np, np) -= mw;  // -(p, w1)
  ls.Aii.block(5 * np, 2 * np, np, np) += mw;  // +(y, w2)

  // Edge contributions.
  const Eigen::MatrixXd edge_vals = edge_basis_.eval(edge_rule_.t);
  static const Eigen::Vector2d ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int le = 0; le < 3; ++le) {
    const Edge& edge = mesh_.edges[t.edge[le]];
    const int lv1 = (le + 1) % 3, lv2 = (le + 2) % 3;
    const bool fwd = t.v[lv1] == edge.v[0];
    const Eigen::Vector2d r0 = fwd ? ref[lv1] : ref[lv2];
    const Eigen::Vector2d r1 = fwd ? ref[lv2] : ref[lv1];
    const auto n = outward_normal(mesh_, tri, le);

    const int nq = edge_rule_.n();
    Eigen::MatrixX2d pts(nq, 2);
    Eigen::VectorXd zn(nq);
    for (int q = 0; q < nq; ++q) {
      pts.row(q) = (r0 + edge_rule_.t(q) * (r1 - r0)).transpose();
      const Eigen::Vector2d x = g.p0 + g.jac * pts.row(q).transpose();
      const auto z = prob_.zeta(x(0), x(1));
      zn(q) = z[0] * n[0] + z[1] * n[1];
    }
    const Eigen::MatrixXd tv = basis_.eval(pts);
    const Eigen::VectorXd we = edge.length * edge_rule_.w;
    const double tau1 = stab_.tau1[tri][le];

    for (int field = 0; field < 2; ++field) {
      const int q0 = field == 0 ? 0 : 3 * np;
      const int y0 = field == 0 ? 2 * np : 5 * np;
      Eigen::VectorXd tau, zn_eff;
      if (field == 0) {
        tau = Eigen::VectorXd::Constant(nq, tau1);
        zn_eff = zn;
      } else {
        tau = (tau1 - zn.array()).matrix();
        zn_eff = -zn;
      }

      const Eigen::MatrixXd fyy = tv.transpose() * (we.cwiseProduct(tau)).asDiagonal() * tv;
      const Eigen::MatrixXd gw =
          tv.transpose() * (we.cwiseProduct(zn_eff - tau)).asDiagonal() * edge_vals;
      const Eigen::MatrixXd tmy =
          edge_vals.transpose() * (we.cwiseProduct(tau)).asDiagonal() * tv;
      const Eigen::MatrixXd wmm =
          edge_vals.transpose() * (we.cwiseProduct(zn_eff - tau)).asDiagonal() * edge_vals;
      std::array<Eigen::MatrixXd, 2> en;
      for (int c = 0; c < 2; ++c) en[c] = n[c] * (tv.transpose() * we.asDiagonal() * edge_vals);

      ls.Aii.block(y0, y0, np, np) += sb * fyy;
      for (int m = 0; m < nb; ++m) {
        const int lt = le * 2 * nb + 2 * m + field;
        for (int c = 0; c < 2; ++c) {
          ls.Ail.block(q0 + c * np, lt, np, 1) -= sb * en[c].col(m);
          ls.Ali.block(lt, q0 + c * np, 1, np) -= sb * en[c].col(m).transpose();
        }
        ls.Ail.block(y0, lt, np, 1) += sb * gw.col(m);
        ls.Ali.block(lt, y0, 1, np) -= sb * tmy.row(m);
        for (int mm = 0; mm < nb; ++mm)
          ls.All(le * 2 * nb + 2 * mm + field, lt) -= sb * wmm(mm, m);
      }
    }
  }

  ls.z = load(tri);
  return ls;
}

}  // namespace hdgbddc
