#pragma once

#include <memory>

#include "hdgbddc/condense.hpp"

namespace hdgbddc {

// Trace operator of one subdomain, split into dofs interior to the
// subdomain (I) and dofs on the interface (G). AGG carries the element
// contributions of this side plus the Robin boundary correction, so the
// local Schur complement is positive definite while the corrections cancel
// across the interface in the assembled operator.
struct SubdomainOperator {
  int sub = -1;
  std::vector<int> idof;  // global trace dofs interior to the subdomain
  std::vector<int> gseq;  // gather positions into the global interface sequence
  SpMat AII, AIG, AGI;
  Eigen::MatrixXd AGG;
  Eigen::MatrixXd robin;  // the Robin correction alone
  Eigen::VectorXd bI, bG;
  std::unique_ptr<Eigen::SparseLU<SpMat>> ilu;
  Eigen::MatrixXd S;  // dense Schur complement, built on demand
  bool has_dense = false;

  int ni() const { return static_cast<int>(idof.size()); }
  int ng() const { return static_cast<int>(gseq.size()); }
};

std::vector<SubdomainOperator> build_subdomain_ops(const TraceSystem& ts);

// S^(i) v through one interior solve.
Eigen::VectorXd apply_local_schur(const SubdomainOperator& op, const Eigen::VectorXd& v);

void ensure_dense_schur(SubdomainOperator& op);

// Assembled interface rhs g = sum_i R_i^T (bG - AGI AII^-1 bI).
Eigen::VectorXd interface_rhs(const std::vector<SubdomainOperator>& ops, int n_gamma);

// Assembled interface operator applied to v.
Eigen::VectorXd apply_interface(const std::vector<SubdomainOperator>& ops,
                                const Eigen::VectorXd& v);

// Interior trace values given the interface solution; returns the full
// trace vector.
Eigen::VectorXd backsolve_interior(const TraceSystem& ts,
                                   const std::vector<SubdomainOperator>& ops,
                                   const Eigen::VectorXd& lam_gamma);

}  // namespace hdgbddc
