#pragma once

#include <functional>

#include "hdgbddc/fespace.hpp"

namespace hdgbddc {

// Advective velocity field. The built-in fields are affine and divergence
// free, so edge restrictions of zeta.n attain their extrema at endpoints.
struct Velocity {
  enum class Kind { Zero, UnitX, Rotation } kind = Kind::Zero;

  std::array<double, 2> operator()(double x, double y) const {
    switch (kind) {
      case Kind::UnitX: return {1.0, 0.0};
      case Kind::Rotation: return {y, -x};
      default: return {0.0, 0.0};
    }
  }
  static Velocity zero() { return {Kind::Zero}; }
  static Velocity unit_x() { return {Kind::UnitX}; }
  static Velocity rotation() { return {Kind::Rotation}; }
};

struct ProblemConfig {
  double beta = 1.0;
  Velocity zeta;
  std::function<double(double, double)> f;  // state equation load
  std::function<double(double, double)> g;  // adjoint equation load
};

// Upwind stabilization: per element edge, tau1 = max(sup zeta.n, 0) + 1 with
// the element's outward normal; tau2(x) = tau1 - zeta(x).n pointwise.
struct Stabilizers {
  std::vector<std::array<double, 3>> tau1;  // per triangle, per local edge
};

Stabilizers stabilizers_for(const Mesh& mesh, const Velocity& zeta);

// Dense element system of the coupled pair of first-order equations with the
// beta scaling baked in. Interior unknowns are ordered (q, y, qd, p) where q
// and qd are the two fluxes laid out component-major; trace unknowns are
// ordered per local edge, per edge basis function, fields interleaved.
struct LocalSystem {
  Eigen::MatrixXd Aii, Ail, Ali, All;
  Eigen::VectorXd z;  // interior load
};

class ElementAssembler {
 public:
  ElementAssembler(const Mesh& mesh, int k, const Stabilizers& stab, const ProblemConfig& prob);

  LocalSystem assemble(int tri) const;
  Eigen::VectorXd load(int tri) const;    // interior load vector only
  Eigen::MatrixXd mass_matrix(int tri) const;  // scalar mass on the element

  int np() const { return basis_.ndof(); }
  int n_interior() const { return 6 * basis_.ndof(); }
  int n_trace() const { return 6 * (k_ + 1); }
  const TriBasis& basis() const { return basis_; }
  const EdgeBasis& edge_basis() const { return edge_basis_; }
  const LineRule& edge_rule() const { return edge_rule_; }
  const QuadratureRule& volume_rule() const { return vol_rule_; }
  const QuadratureRule& load_rule() const { return load_rule_; }

 private:
  const Mesh& mesh_;
  int k_;
  const Stabilizers& stab_;
  const ProblemConfig& prob_;
  TriBasis basis_;
  EdgeBasis edge_basis_;
  QuadratureRule vol_rule_;   // exact to degree 2k + 2
  QuadratureRule load_rule_;  // elevated rule for non-polynomial loads
  LineRule edge_rule_;        // exact to degree 2k + 3
  Eigen::MatrixXd vol_vals_;
  std::array<Eigen::MatrixXd, 2> vol_grads_;
  Eigen::MatrixXd load_vals_;
};

}  // namespace hdgbddc
