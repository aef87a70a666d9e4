#include "hdgbddc/gmres.hpp"

#include <cmath>

namespace hdgbddc {

GmresReport gmres(const LinOp& a, const LinOp& p, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  const GmresConfig& cfg) {
  GmresReport rep;
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    return rep;
  }

  Eigen::VectorXd r0 = p(b - a(x));
  const double beta0 = r0.norm();
  rep.residual_history.push_back(beta0);
  if (beta0 == 0.0) {
    rep.converged = true;
    return rep;
  }

  const int maxit = std::min<int>(cfg.max_iters, static_cast<int>(n));
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(maxit + 1);
  basis.push_back(r0 / beta0);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(maxit + 1);
  g(0) = beta0;
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(maxit), sn = Eigen::VectorXd::Zero(maxit);

  // Candidate solution from the first m Arnoldi columns, leaving x untouched.
  const auto candidate = [&](int m) {
    Eigen::VectorXd y(m);
    for (int i = m - 1; i >= 0; --i) {
      double acc = g(i);
      for (int j = i + 1; j < m; ++j) acc -= h(i, j) * y(j);
      y(i) = acc / h(i, i);
    }
    Eigen::VectorXd xc = x;
    for (int i = 0; i < m; ++i) xc += y(i) * basis[i];
    return xc;
  };
  const double b_norm = std::max(b.norm(), 1e-300);

  int m = 0;
  for (int j = 0; j < maxit; ++j) {
    Eigen::VectorXd w = p(a(basis[j]));
    for (int i = 0; i <= j; ++i) {
      const double hij = basis[i].dot(w);
      h(i, j) = hij;
      w -= hij * basis[i];
    }
    if (cfg.reorthogonalize) {
      for (int i = 0; i <= j; ++i) {
        const double corr = basis[i].dot(w);
        h(i, j) += corr;
        w -= corr * basis[i];
      }
    }
    h(j + 1, j) = w.norm();

    for (int i = 0; i < j; ++i) {
      const double t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
      h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
      h(i, j) = t;
    }
    const double denom = std::hypot(h(j, j), h(j + 1, j));
    cs(j) = h(j, j) / denom;
    sn(j) = h(j + 1, j) / denom;
    h(j, j) = denom;
    g(j + 1) = -sn(j) * g(j);
    g(j) = cs(j) * g(j);

    m = j + 1;
    const double res = std::abs(g(j + 1));
    rep.residual_history.push_back(res);
    if (res <= cfg.rel_tol * beta0) {
      if (cfg.true_res_floor <= 0.0 ||
          (b - a(candidate(m))).norm() <= cfg.true_res_floor * b_norm) {
        rep.converged = true;
        break;
      }
    }
    if (h(j + 1, j) <= 1e-14 * beta0) {
      rep.breakdown = true;
      break;
    }
    basis.push_back(w / h(j + 1, j));
  }
  rep.iterations = m;
  if (m > 0) x = candidate(m);
  return rep;
}

}  // namespace hdgbddc
