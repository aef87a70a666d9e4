#include "hdgbddc/condense.hpp"

#include <vector>

namespace hdgbddc {

ElemCondensed condense_element(const LocalSystem& ls) {
  ElemCondensed ec;
  ec.lu = Eigen::PartialPivLU<Eigen::MatrixXd>(ls.Aii);
  ec.ail = ls.Ail;
  ec.z = ls.z;
  ec.ak = ls.All - ls.Ali * ec.lu.solve(ls.Ail);
  ec.bk = -ls.Ali * ec.lu.solve(ls.z);
  return ec;
}

std::vector<int> element_trace_dofs(const Mesh& mesh, const TraceSpace& space, int t) {
  const int nb = space.k + 1;
  std::vector<int> dofs(6 * nb, -1);
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.tris[t].edge[le];
    if (space.edge_offset[e] < 0) continue;
    for (int m = 0; m < nb; ++m)
      for (int f = 0; f < 2; ++f) dofs[le * 2 * nb + 2 * m + f] = space.dof(e, m, f);
  }
  return dofs;
}

TraceSystem condense(const Mesh& mesh, int k, const ProblemConfig& prob, int cache_limit) {
  TraceSystem ts;
  ts.mesh = &mesh;
  ts.k = k;
  ts.space = build_trace_space(mesh, k);
  ts.stab = stabilizers_for(mesh, prob.zeta);
  ts.prob = prob;
  ts.cached = static_cast<int>(mesh.tris.size()) <= cache_limit;
  ts.b = Eigen::VectorXd::Zero(ts.space.n_dofs);

  const ElementAssembler ea = ts.make_assembler();
  if (ts.cached) ts.elems.resize(mesh.tris.size());
  for (int t = 0; t < static_cast<int>(mesh.tris.size()); ++t) {
    ElemCondensed ec = condense_element(ea.assemble(t));
    const auto dofs = element_trace_dofs(mesh, ts.space, t);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      if (dofs[i] >= 0) ts.b(dofs[i]) += ec.bk(i);
    if (ts.cached) ts.elems[t] = std::move(ec);
  }
  return ts;
}

const ElemCondensed& element_condensed(const TraceSystem& ts, const ElementAssembler& ea, int t,
                                       ElemCondensed& scratch) {
  if (ts.cached) return ts.elems[t];
  scratch = condense_element(ea.assemble(t));
  return scratch;
}

SpMat assemble_global(const TraceSystem& ts) {
  std::vector<Eigen::Triplet<double>> trips;
  const ElementAssembler ea = ts.make_assembler();
  ElemCondensed scratch;
  for (int t = 0; t < static_cast<int>(ts.mesh->tris.size()); ++t) {
    const ElemCondensed& ec = element_condensed(ts, ea, t, scratch);
    const auto dofs = element_trace_dofs(*ts.mesh, ts.space, t);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (dofs[i] < 0) continue;
      for (std::size_t j = 0; j < dofs.size(); ++j)
        if (dofs[j] >= 0) trips.emplace_back(dofs[i], dofs[j], ec.ak(i, j));
    }
  }
  SpMat a(ts.space.n_dofs, ts.space.n_dofs);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

namespace {

InteriorSolution element_solves(const TraceSystem& ts, const Eigen::VectorXd& lambda,
                                bool with_load) {
  const ElementAssembler ea = ts.make_assembler();
  const int ntri = static_cast<int>(ts.mesh->tris.size());
  InteriorSolution sol;
  sol.coeffs.resize(ea.n_interior(), ntri);
  ElemCondensed scratch;
  Eigen::VectorXd lam_k(ea.n_trace());
  for (int t = 0; t < ntri; ++t) {
    const ElemCondensed& ec = element_condensed(ts, ea, t, scratch);
    const auto dofs = element_trace_dofs(*ts.mesh, ts.space, t);
    for (std::size_t i = 0; i < dofs.size(); ++i) lam_k(i) = dofs[i] >= 0 ? lambda(dofs[i]) : 0.0;
    Eigen::VectorXd rhs = -ec.ail * lam_k;
    if (with_load) rhs += ec.z;
    sol.coeffs.col(t) = ec.lu.solve(rhs);
  }
  return sol;
}

}  // namespace

InteriorSolution extend(const TraceSystem& ts, const Eigen::VectorXd& lambda) {
  return element_solves(ts, lambda, false);
}

InteriorSolution recover_interior(const TraceSystem& ts, const Eigen::VectorXd& lambda) {
  return element_solves(ts, lambda, true);
}

double l_form(const TraceSystem& ts, const Eigen::VectorXd& lambda, const Eigen::VectorXd& s) {
  const ElementAssembler ea = ts.make_assembler();
  const InteriorSolution ul = extend(ts, lambda);
  const InteriorSolution us = extend(ts, s);
  const int np = ea.np();
  double acc = 0.0;
  for (int t = 0; t < static_cast<int>(ts.mesh->tris.size()); ++t) {
    const Eigen::MatrixXd mw = ea.mass_matrix(t);
    acc += ul.coeffs.col(t).segment(2 * np, np).dot(mw * us.coeffs.col(t).segment(2 * np, np));
    acc += ul.coeffs.col(t).segment(5 * np, np).dot(mw * us.coeffs.col(t).segment(5 * np, np));
  }
  return acc;
}

std::pair<SpMat, SpMat> split_bz(const SpMat& a) {
  SpMat at = SpMat(a.transpose());
  SpMat b = 0.5 * (a + at);
  SpMat z = 0.5 * (a - at);
  return {b, z};
}

}  // namespace hdgbddc
