#pragma once

#include <Eigen/Dense>

#include "hdgbddc/mesh.hpp"

namespace hdgbddc {

// Quadrature on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2.
struct QuadratureRule {
  Eigen::MatrixX2d pts;
  Eigen::VectorXd w;
  int n() const { return static_cast<int>(w.size()); }
};

// Symmetric rules, exact for polynomials up to the requested degree (<= 6).
QuadratureRule triangle_rule(int degree);

// Collapsed tensor Gauss rule with q*q points; exact well beyond degree q.
QuadratureRule triangle_tensor_rule(int q);

// Gauss-Legendre on [0,1], exact to degree 2*npts - 1.
struct LineRule {
  Eigen::VectorXd t, w;
  int n() const { return static_cast<int>(w.size()); }
};
LineRule line_gauss(int npts);

// Nodal Lagrange basis of degree k on the reference triangle, equispaced
// lattice nodes (i/k, j/k).
class TriBasis {
 public:
  explicit TriBasis(int k);
  int degree() const { return k_; }
  int ndof() const { return ndof_; }
  // Values at reference points: (npts x ndof).
  Eigen::MatrixXd eval(const Eigen::MatrixX2d& pts) const;
  // Reference gradients: [d/dx, d/dy], each (npts x ndof).
  std::array<Eigen::MatrixXd, 2> grad(const Eigen::MatrixX2d& pts) const;

 private:
  int k_, ndof_;
  Eigen::MatrixXd coeff_;  // column j = monomial coefficients of basis j
};

// Nodal Lagrange basis of degree k on [0,1], equispaced nodes j/k.
class EdgeBasis {
 public:
  explicit EdgeBasis(int k);
  int degree() const { return k_; }
  int ndof() const { return k_ + 1; }
  Eigen::MatrixXd eval(const Eigen::VectorXd& t) const;

 private:
  int k_;
  Eigen::MatrixXd coeff_;
};

// Numbering of the paired trace unknowns. Every non-Dirichlet edge carries
// 2*(k+1) dofs; the two fields are interleaved per edge basis function.
struct TraceSpace {
  int k = 1;
  int per_edge = 0;  // dofs per edge, both fields
  int n_dofs = 0;
  std::vector<int> edge_offset;  // -1 on Dirichlet edges

  // Interface dofs in macro-edge order; interior dofs in edge order.
  std::vector<int> gamma_dofs;
  std::vector<int> interior_dofs;
  std::vector<int> gamma_index;     // dof -> position in gamma_dofs, -1 otherwise
  std::vector<int> interior_index;  // dof -> position in interior_dofs, -1 otherwise

  struct SubDofs {
    std::vector<int> interior;  // global dofs on edges interior to the subdomain
    std::vector<int> gamma;     // positions in gamma_dofs, grouped by macro edge
    std::vector<int> macro;     // adjacent macro edges, ascending
  };
  std::vector<SubDofs> sub;

  int dof(int edge, int node, int field) const { return edge_offset[edge] + 2 * node + field; }
  int n_gamma() const { return static_cast<int>(gamma_dofs.size()); }
  int n_interior() const { return static_cast<int>(interior_dofs.size()); }
};

TraceSpace build_trace_space(const Mesh& mesh, int k);

}  // namespace hdgbddc
