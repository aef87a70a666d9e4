#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace hdgbddc {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresConfig {
  int max_iters = 400;
  double rel_tol = 1e-11;
  bool reorthogonalize = true;
  // When positive, convergence additionally requires the recomputed
  // unpreconditioned residual |b - a(x)| <= true_res_floor * |b|. The
  // preconditioned reduction alone can leave the plain residual several
  // orders larger when the preconditioner has a wide norm spread.
  double true_res_floor = 0.0;
};

struct GmresReport {
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;
  std::vector<double> residual_history;  // preconditioned norms, [0] is initial
};

// Full (unrestarted) left-preconditioned GMRES on a(x) = b. The solution is
// accumulated into x, which also provides the initial guess.
GmresReport gmres(const LinOp& a, const LinOp& p, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  const GmresConfig& cfg = {});

}  // namespace hdgbddc
