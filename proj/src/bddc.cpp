#include "hdgbddc/bddc.hpp"

#include <stdexcept>

namespace hdgbddc {

PrimalConstraintSet select_primal(const TraceSystem& ts, const PrimalFlags& flags) {
  PrimalConstraintSet pcs;
  pcs.flags = flags;
  if (flags.all_dofs) {
    pcs.n_primal = ts.space.n_gamma();
    return pcs;
  }
  const Mesh& mesh = *ts.mesh;
  const EdgeBasis eb(ts.k);
  const LineRule er = line_gauss(ts.k + 2);
  const Eigen::MatrixXd ev = eb.eval(er.t);
  const int nb = ts.k + 1;

  pcs.per_macro.resize(mesh.macro_edges.size());
  for (std::size_t mi = 0; mi < mesh.macro_edges.size(); ++mi) {
    const MacroEdge& me = mesh.macro_edges[mi];
    const int nm = static_cast<int>(me.edges.size());
    const int ncols = nm * nb;
    std::vector<Eigen::VectorXd> cand;
    auto weight_row = [&](int kind) {
      // kind 0: plain average, 1: flux average, 2: flux first moment.
      Eigen::VectorXd row = Eigen::VectorXd::Zero(ncols);
      for (int pe = 0; pe < nm; ++pe) {
        const Edge& edge = mesh.edges[me.edges[pe]];
        for (int q = 0; q < er.n(); ++q) {
          const auto& p = mesh.vertices[edge.v[0]];
          const auto& r = mesh.vertices[edge.v[1]];
          const double x = p[0] + er.t(q) * (r[0] - p[0]);
          const double y = p[1] + er.t(q) * (r[1] - p[1]);
          double wq = edge.length * er.w(q);
          if (kind >= 1) {
            const auto z = ts.prob.zeta(x, y);
            wq *= z[0] * edge.normal[0] + z[1] * edge.normal[1];
          }
          if (kind == 2) wq *= 2.0 * (pe + er.t(q)) / nm - 1.0;  // arc param in [-1,1]
          for (int a = 0; a < nb; ++a) row(pe * nb + a) += wq * ev(q, a);
        }
      }
      return row;
    };
    if (flags.average) cand.push_back(weight_row(0));
    if (flags.flux_average) cand.push_back(weight_row(1));
    if (flags.flux_moment) cand.push_back(weight_row(2));

    // Keep only rows independent of those already retained, and store them
    // orthonormalized. The span is what defines the primal space; the raw
    // flux rows become nearly dependent on the averages as the macro edges
    // shrink, which would poison the bordered local factorizations.
    std::vector<Eigen::VectorXd> kept_ortho;
    for (const Eigen::VectorXd& row : cand) {
      const double nrm = row.norm();
      if (nrm <= 1e-12 * ncols) continue;
      Eigen::VectorXd res = row;
      for (const Eigen::VectorXd& o : kept_ortho) res -= o.dot(res) * o;
      if (res.norm() <= 1e-10 * nrm) continue;
      for (const Eigen::VectorXd& o : kept_ortho) res -= o.dot(res) * o;
      kept_ortho.push_back(res.normalized());
      pcs.per_macro[mi].rows.push_back(kept_ortho.back());
      pcs.per_macro[mi].global.push_back({pcs.n_primal, pcs.n_primal + 1});
      pcs.n_primal += 2;
    }
  }
  return pcs;
}

Eigen::MatrixXd subdomain_constraints(const TraceSystem& ts, const PrimalConstraintSet& pcs,
                                      int sub, std::vector<int>* primal_ids) {
  const TraceSpace& sp = ts.space;
  const int ng = static_cast<int>(sp.sub[sub].gamma.size());
  if (pcs.flags.all_dofs) {
    if (primal_ids) {
      primal_ids->resize(ng);
      for (int j = 0; j < ng; ++j) (*primal_ids)[j] = sp.sub[sub].gamma[j];
    }
    return Eigen::MatrixXd::Identity(ng, ng);
  }
  int nrows = 0;
  for (int mi : sp.sub[sub].macro) nrows += 2 * static_cast<int>(pcs.per_macro[mi].rows.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nrows, ng);
  if (primal_ids) primal_ids->assign(nrows, -1);
  const int nb = ts.k + 1;
  int row = 0, base = 0;
  for (int mi : sp.sub[sub].macro) {
    const auto& mr = pcs.per_macro[mi];
    const int nm = static_cast<int>(ts.mesh->macro_edges[mi].edges.size());
    for (std::size_t r = 0; r < mr.rows.size(); ++r)
      for (int f = 0; f < 2; ++f) {
        for (int pe = 0; pe < nm; ++pe)
          for (int a = 0; a < nb; ++a)
            c(row, base + pe * 2 * nb + 2 * a + f) = mr.rows[r](pe * nb + a);
        if (primal_ids) (*primal_ids)[row] = mr.global[r][f];
        ++row;
      }
    base += nm * 2 * nb;
  }
  return c;
}

BddcPreconditioner build_preconditioner(std::vector<SubdomainOperator>& ops,
                                        const TraceSystem& ts,
                                        const PrimalConstraintSet& pcs) {
  BddcPreconditioner pc;
  pc.n_gamma = ts.space.n_gamma();
  pc.n_primal = pcs.n_primal;
  if (pc.n_gamma == 0) return pc;

  std::vector<Eigen::Triplet<double>> coarse_trips;
  pc.subs.resize(ops.size());
  for (std::size_t s = 0; s < ops.size(); ++s) {
    SubdomainOperator& op = ops[s];
    ensure_dense_schur(op);
    BddcPreconditioner::Sub& sub = pc.subs[s];
    sub.gseq = op.gseq;
    const int n = op.ng();
    const Eigen::MatrixXd c = subdomain_constraints(ts, pcs, static_cast<int>(s), &sub.primal);
    const int m = static_cast<int>(c.rows());
    sub.n = n;
    sub.m = m;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
    k.topLeftCorner(n, n) = op.S;
    k.topRightCorner(n, m) = c.transpose();
    k.bottomLeftCorner(m, n) = c;
    sub.klu = Eigen::PartialPivLU<Eigen::MatrixXd>(k);
    if (m > 0) {
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, m);
      rhs.bottomRows(m).setIdentity();
      const Eigen::MatrixXd x = sub.klu.solve(rhs);
      sub.psi = x.topRows(n);
      sub.lam = x.bottomRows(m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          coarse_trips.emplace_back(sub.primal[i], sub.primal[j], sub.lam(i, j));
    }
  }
  if (pc.n_primal > 0) {
    SpMat f(pc.n_primal, pc.n_primal);
    f.setFromTriplets(coarse_trips.begin(), coarse_trips.end());
    f.makeCompressed();
    pc.coarse = std::make_unique<Eigen::SparseLU<SpMat>>();
    pc.coarse->compute(f);
    if (pc.coarse->info() != Eigen::Success)
      throw std::invalid_argument("coarse primal problem is singular");
  }
  return pc;
}

Eigen::VectorXd apply_preconditioner(const BddcPreconditioner& pc, const Eigen::VectorXd& r) {
  if (pc.subs.empty()) return r;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(pc.n_gamma);
  std::vector<Eigen::VectorXd> a(pc.subs.size());
  Eigen::VectorXd coarse_rhs = Eigen::VectorXd::Zero(pc.n_primal);
  for (std::size_t s = 0; s < pc.subs.size(); ++s) {
    const auto& sub = pc.subs[s];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sub.n + sub.m);
    for (int j = 0; j < sub.n; ++j) rhs(j) = 0.5 * r(sub.gseq[j]);
    const Eigen::VectorXd sol = sub.klu.solve(rhs);
    a[s] = sol.head(sub.n);
    for (int i = 0; i < sub.m; ++i) coarse_rhs(sub.primal[i]) -= sol(sub.n + i);
  }
  Eigen::VectorXd x_pi;
  if (pc.n_primal > 0) x_pi = pc.coarse->solve(coarse_rhs);
  for (std::size_t s = 0; s < pc.subs.size(); ++s) {
    const auto& sub = pc.subs[s];
    Eigen::VectorXd w = a[s];
    if (sub.m > 0) {
      Eigen::VectorXd xp(sub.m);
      for (int i = 0; i < sub.m; ++i) xp(i) = x_pi(sub.primal[i]);
      w += sub.psi * xp;
    }
    for (int j = 0; j < sub.n; ++j) z(sub.gseq[j]) += 0.5 * w(j);
  }
  return z;
}

}  // namespace hdgbddc
