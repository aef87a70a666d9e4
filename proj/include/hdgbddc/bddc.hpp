#pragma once

#include "hdgbddc/schur.hpp"

namespace hdgbddc {

struct PrimalFlags {
  bool average = true;
  bool flux_average = true;
  bool flux_moment = true;
  bool all_dofs = false;  // promote every interface dof (testing aid)
};

// Retained primal constraint rows. Each row is a weight vector over the
// per-field scalar dofs of one macro edge (edge-major, node-minor), built
// with the master side normal and applied to both fields independently.
struct PrimalConstraintSet {
  PrimalFlags flags;
  int n_primal = 0;
  struct MacroRows {
    std::vector<Eigen::VectorXd> rows;
    std::vector<std::array<int, 2>> global;  // global primal ids per field
  };
  std::vector<MacroRows> per_macro;
};

PrimalConstraintSet select_primal(const TraceSystem& ts, const PrimalFlags& flags);

// Constraint matrix of one subdomain over its local interface dofs.
Eigen::MatrixXd subdomain_constraints(const TraceSystem& ts, const PrimalConstraintSet& pcs,
                                      int sub, std::vector<int>* primal_ids = nullptr);

class BddcPreconditioner {
 public:
  struct Sub {
    Eigen::PartialPivLU<Eigen::MatrixXd> klu;  // bordered local matrix
    Eigen::MatrixXd psi;                       // primal basis columns
    Eigen::MatrixXd lam;                       // multiplier block of the basis
    std::vector<int> gseq;
    std::vector<int> primal;  // global primal id per local row
    int n = 0, m = 0;
  };
  std::vector<Sub> subs;
  std::unique_ptr<Eigen::SparseLU<SpMat>> coarse;
  int n_gamma = 0;
  int n_primal = 0;
};

// Requires dense local Schur complements; builds them as needed.
BddcPreconditioner build_preconditioner(std::vector<SubdomainOperator>& ops,
                                        const TraceSystem& ts,
                                        const PrimalConstraintSet& pcs);

Eigen::VectorXd apply_preconditioner(const BddcPreconditioner& pc, const Eigen::VectorXd& r);

}  // namespace hdgbddc
