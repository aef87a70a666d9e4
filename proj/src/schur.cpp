#include "hdgbddc/schur.hpp"

#include <stdexcept>

namespace hdgbddc {

std::vector<SubdomainOperator> build_subdomain_ops(const TraceSystem& ts) {
  const Mesh& mesh = *ts.mesh;
  const TraceSpace& sp = ts.space;
  const int nsub = mesh.n_subdomains();
  std::vector<SubdomainOperator> ops(nsub);

  const ElementAssembler ea = ts.make_assembler();
  const EdgeBasis eb(ts.k);
  const LineRule er = line_gauss(ts.k + 2);
  const Eigen::MatrixXd ev = eb.eval(er.t);

  // Reused global-to-local lookups.
  std::vector<int> loc_i(sp.n_dofs, -1);
  std::vector<int> loc_g(sp.n_gamma(), -1);
  ElemCondensed scratch;

  for (int s = 0; s < nsub; ++s) {
    SubdomainOperator& op = ops[s];
    op.sub = s;
    op.idof = sp.sub[s].interior;
    op.gseq = sp.sub[s].gamma;
    const int ni = op.ni(), ng = op.ng();
    for (int i = 0; i < ni; ++i) loc_i[op.idof[i]] = i;
    for (int j = 0; j < ng; ++j) loc_g[op.gseq[j]] = j;

    std::vector<Eigen::Triplet<double>> tii, tig, tgi;
    op.AGG = Eigen::MatrixXd::Zero(ng, ng);
    op.bI = Eigen::VectorXd::Zero(ni);
    op.bG = Eigen::VectorXd::Zero(ng);

    for (int t : mesh.sub_tris[s]) {
      const ElemCondensed& ec = element_condensed(ts, ea, t, scratch);
      const auto dofs = element_trace_dofs(mesh, sp, t);
      const int nloc = static_cast<int>(dofs.size());
      // Classify each local dof: interior (>= 0 in li) or interface (in lg).
      std::vector<int> li(nloc, -1), lg(nloc, -1);
      for (int i = 0; i < nloc; ++i) {
        if (dofs[i] < 0) continue;
        if (sp.interior_index[dofs[i]] >= 0)
          li[i] = loc_i[dofs[i]];
        else
          lg[i] = loc_g[sp.gamma_index[dofs[i]]];
      }
      for (int i = 0; i < nloc; ++i) {
        if (dofs[i] < 0) continue;
        if (li[i] >= 0)
          op.bI(li[i]) += ec.bk(i);
        else
          op.bG(lg[i]) += ec.bk(i);
        for (int j = 0; j < nloc; ++j) {
          if (dofs[j] < 0) continue;
          const double v = ec.ak(i, j);
          if (li[i] >= 0 && li[j] >= 0)
            tii.emplace_back(li[i], li[j], v);
          else if (li[i] >= 0)
            tig.emplace_back(li[i], lg[j], v);
          else if (li[j] >= 0)
            tgi.emplace_back(lg[i], li[j], v);
          else
            op.AGG(lg[i], lg[j]) += v;
        }
      }
    }

    // Robin correction over the subdomain's interface edges, with the
    // outward normal of this subdomain. For interface edges the stored edge
    // normal is outward for the master side. The correction carries the
    // same scaling as the advective boundary terms it symmetrizes.
    const double sb = std::sqrt(ts.prob.beta);
    op.robin = Eigen::MatrixXd::Zero(ng, ng);
    int base = 0;
    for (int mi : sp.sub[s].macro) {
      const MacroEdge& me = mesh.macro_edges[mi];
      const double sgn = (s == me.sub_lo) ? 1.0 : -1.0;
      for (std::size_t pe = 0; pe < me.edges.size(); ++pe) {
        const Edge& edge = mesh.edges[me.edges[pe]];
        Eigen::VectorXd zn(er.n());
        for (int q = 0; q < er.n(); ++q) {
          const auto& p = mesh.vertices[edge.v[0]];
          const auto& r = mesh.vertices[edge.v[1]];
          const double x = p[0] + er.t(q) * (r[0] - p[0]);
          const double y = p[1] + er.t(q) * (r[1] - p[1]);
          const auto z = ts.prob.zeta(x, y);
          zn(q) = sgn * (z[0] * edge.normal[0] + z[1] * edge.normal[1]);
        }
        const Eigen::VectorXd w = edge.length * er.w;
        const Eigen::MatrixXd r = ev.transpose() * (w.cwiseProduct(zn)).asDiagonal() * ev;
        const int lb = base + static_cast<int>(pe) * sp.per_edge;
        for (int a = 0; a <= ts.k; ++a)
          for (int b = 0; b <= ts.k; ++b) {
            op.robin(lb + 2 * a, lb + 2 * b) += 0.5 * sb * r(a, b);
            op.robin(lb + 2 * a + 1, lb + 2 * b + 1) -= 0.5 * sb * r(a, b);
          }
      }
      base += static_cast<int>(me.edges.size()) * sp.per_edge;
    }
    op.AGG += op.robin;

    op.AII.resize(ni, ni);
    op.AII.setFromTriplets(tii.begin(), tii.end());
    op.AIG.resize(ni, ng);
    op.AIG.setFromTriplets(tig.begin(), tig.end());
    op.AGI.resize(ng, ni);
    op.AGI.setFromTriplets(tgi.begin(), tgi.end());
    if (ni > 0) {
      op.AII.makeCompressed();
      op.ilu = std::make_unique<Eigen::SparseLU<SpMat>>();
      op.ilu->compute(op.AII);
      if (op.ilu->info() != Eigen::Success)
        throw std::runtime_error("subdomain interior factorization failed");
    }

    for (int i : op.idof) loc_i[i] = -1;
    for (int j : op.gseq) loc_g[j] = -1;
  }
  return ops;
}

Eigen::VectorXd apply_local_schur(const SubdomainOperator& op, const Eigen::VectorXd& v) {
  if (op.ni() == 0) return op.AGG * v;
  return op.AGG * v - op.AGI * op.ilu->solve(op.AIG * v);
}

void ensure_dense_schur(SubdomainOperator& op) {
  if (op.has_dense) return;
  if (op.ni() == 0) {
    op.S = op.AGG;
  } else {
    const Eigen::MatrixXd x = op.ilu->solve(Eigen::MatrixXd(op.AIG));
    op.S = op.AGG - op.AGI * x;
  }
  op.has_dense = true;
}

Eigen::VectorXd interface_rhs(const std::vector<SubdomainOperator>& ops, int n_gamma) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_gamma);
  for (const auto& op : ops) {
    Eigen::VectorXd gi = op.bG;
    if (op.ni() > 0) gi -= op.AGI * op.ilu->solve(op.bI);
    for (int j = 0; j < op.ng(); ++j) g(op.gseq[j]) += gi(j);
  }
  return g;
}

Eigen::VectorXd apply_interface(const std::vector<SubdomainOperator>& ops,
                                const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (const auto& op : ops) {
    Eigen::VectorXd vi(op.ng());
    for (int j = 0; j < op.ng(); ++j) vi(j) = v(op.gseq[j]);
    const Eigen::VectorXd si = apply_local_schur(op, vi);
    for (int j = 0; j < op.ng(); ++j) out(op.gseq[j]) += si(j);
  }
  return out;
}

Eigen::VectorXd backsolve_interior(const TraceSystem& ts,
                                   const std::vector<SubdomainOperator>& ops,
                                   const Eigen::VectorXd& lam_gamma) {
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(ts.space.n_dofs);
  for (int j = 0; j < ts.space.n_gamma(); ++j) lam(ts.space.gamma_dofs[j]) = lam_gamma(j);
  for (const auto& op : ops) {
    if (op.ni() == 0) continue;
    Eigen::VectorXd vg(op.ng());
    for (int j = 0; j < op.ng(); ++j) vg(j) = lam_gamma(op.gseq[j]);
    const Eigen::VectorXd li = op.ilu->solve(op.bI - op.AIG * vg);
    for (int i = 0; i < op.ni(); ++i) lam(op.idof[i]) = li(i);
  }
  return lam;
}

}  // namespace hdgbddc
