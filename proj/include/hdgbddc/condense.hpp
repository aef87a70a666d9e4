#pragma once

#include <Eigen/Sparse>

#include "hdgbddc/hdg.hpp"

namespace hdgbddc {

using SpMat = Eigen::SparseMatrix<double>;

// Condensed data of one element: interior factorization, couplings to the
// element's trace unknowns, condensed trace block and rhs contribution.
struct ElemCondensed {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // interior block
  Eigen::MatrixXd ail;                      // interior x trace coupling
  Eigen::MatrixXd ak;                       // condensed trace block
  Eigen::VectorXd z;                        // interior load
  Eigen::VectorXd bk;                       // condensed rhs contribution
};

// Statically condensed trace system. Element recovery data is cached below
// a size threshold and rebuilt on demand above it.
struct TraceSystem {
  const Mesh* mesh = nullptr;
  int k = 1;
  TraceSpace space;
  Stabilizers stab;
  ProblemConfig prob;
  bool cached = false;
  std::vector<ElemCondensed> elems;
  Eigen::VectorXd b;  // assembled rhs over all trace dofs

  ElementAssembler make_assembler() const { return ElementAssembler(*mesh, k, stab, prob); }
};

TraceSystem condense(const Mesh& mesh, int k, const ProblemConfig& prob, int cache_limit = 40000);

ElemCondensed condense_element(const LocalSystem& ls);

// Cached block, or scratch refilled for element t when the system is uncached.
const ElemCondensed& element_condensed(const TraceSystem& ts, const ElementAssembler& ea, int t,
                                       ElemCondensed& scratch);

// Global trace dofs of element t in local trace order; -1 on Dirichlet edges.
std::vector<int> element_trace_dofs(const Mesh& mesh, const TraceSpace& space, int t);

SpMat assemble_global(const TraceSystem& ts);

// Interior coefficients per element, ordered as in LocalSystem.
struct InteriorSolution {
  Eigen::MatrixXd coeffs;  // n_interior x n_triangles
};

InteriorSolution extend(const TraceSystem& ts, const Eigen::VectorXd& lambda);
InteriorSolution recover_interior(const TraceSystem& ts, const Eigen::VectorXd& lambda);

// Inner product of the scalar components of two extensions.
double l_form(const TraceSystem& ts, const Eigen::VectorXd& lambda, const Eigen::VectorXd& s);

// Symmetric/skew-symmetric split A = B + Z.
std::pair<SpMat, SpMat> split_bz(const SpMat& a);

}  // namespace hdgbddc
