#pragma once

#include <iosfwd>
#include <string>

#include "hdgbddc/bddc.hpp"
#include "hdgbddc/diagnostics.hpp"
#include "hdgbddc/gmres.hpp"

namespace hdgbddc {

// Smooth reference profile with homogeneous Dirichlet values, used to
// manufacture the loads of the coupled system.
namespace exact {
double y(double x1, double x2);
double p(double x1, double x2);
std::array<double, 2> grad_y(double x1, double x2);
std::array<double, 2> grad_p(double x1, double x2);
double lap_y(double x1, double x2);
double lap_p(double x1, double x2);
}  // namespace exact

// Velocity of the named convection test: 1 is uniform, 2 is a rotation.
Velocity test_velocity(int test);

// Problem with loads manufactured so the scaled coupled system reproduces
// the exact profile.
ProblemConfig make_problem(int test, double beta);

struct ExperimentConfig {
  int test = 1;
  int k = 1;
  double beta = 1.0;
  int nsub = 4;
  int hh = 6;  // elements per subdomain per direction
  double tol = 1e-11;
  int max_iters = 400;
  PrimalFlags primal;
};

struct CaseResult {
  ExperimentConfig cfg;
  int iters = 0;
  bool converged = false;
  double final_true_res = 0.0;
  double l2err_y = 0.0;
  double l2err_p = 0.0;
  double wall_ms = 0.0;
  int paper_ref = -1;  // reference iteration count, -1 when absent
  std::vector<double> history;
  int n_trace = 0, n_gamma = 0, n_primal = 0;
};

CaseResult run_case(const ExperimentConfig& cfg);

// Iteration counts reported for the two published sweeps; -1 when the
// configuration is not a tabulated cell.
int reference_iters(const std::string& preset, int test, int k, double beta, int sweep);

// Sweep presets: "table1" scales the subdomain count at hh = 6, "table2"
// scales hh at 6x6 subdomains.
std::vector<CaseResult> run_table(const std::string& preset, int test, int k,
                                  std::ostream* log = nullptr);

std::string results_csv(const std::vector<CaseResult>& rows);

std::string result_json(const CaseResult& r);

}  // namespace hdgbddc
