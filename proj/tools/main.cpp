#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdgbddc/experiments.hpp"

namespace {

using namespace hdgbddc;

PrimalFlags parse_primal(const std::string& s) {
  PrimalFlags f;
  if (s == "avg") {
    f.flux_average = f.flux_moment = false;
  } else if (s == "avg+flux") {
    f.flux_moment = false;
  } else if (s == "all") {
    f.all_dofs = true;
  } else if (s != "avg+flux+moment") {
    throw std::invalid_argument("unknown primal set: " + s);
  }
  return f;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out << text;
}

int run_solve(const ExperimentConfig& cfg, const std::string& csv, const std::string& json,
              const std::string& dump_mesh) {
  if (!dump_mesh.empty())
    write_file(dump_mesh, mesh_to_json(build_structured_mesh({cfg.nsub, cfg.hh})));
  CaseResult r = run_case(cfg);
  std::cout << "trace dofs " << r.n_trace << ", interface dofs " << r.n_gamma << ", primal "
            << r.n_primal << "\n"
            << "iterations " << r.iters << (r.converged ? "" : " (not converged)")
            << ", final true residual " << r.final_true_res << "\n"
            << "l2 errors: y " << r.l2err_y << ", p " << r.l2err_p << "\n";
  if (!csv.empty()) write_file(csv, results_csv({r}));
  if (!json.empty()) write_file(json, result_json(r));
  return r.converged ? 0 : 2;
}

int run_preset(const std::string& preset, int test, int k, const std::string& csv) {
  std::vector<CaseResult> rows = run_table(preset, test, k, &std::cout);
  const std::string text = results_csv(rows);
  if (!csv.empty())
    write_file(csv, text);
  else
    std::cout << text;
  for (const CaseResult& r : rows)
    if (!r.converged) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG trace solver with BDDC-preconditioned GMRES"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string primal = "avg+flux+moment";
  std::string csv, json, dump_mesh;

  CLI::App* solve = app.add_subcommand("solve", "solve one configuration");
  solve->add_option("--test", cfg.test, "velocity: 1 uniform, 2 rotation")
      ->check(CLI::IsMember({1, 2}));
  solve->add_option("--k", cfg.k, "polynomial degree")->check(CLI::IsMember({1, 2}));
  solve->add_option("--beta", cfg.beta, "regularization parameter");
  solve->add_option("--nsub", cfg.nsub, "subdomains per direction");
  solve->add_option("--hh", cfg.hh, "elements per subdomain per direction");
  solve->add_option("--tol", cfg.tol, "relative residual reduction");
  solve->add_option("--max-iters", cfg.max_iters, "iteration cap");
  solve->add_option("--primal", primal, "avg | avg+flux | avg+flux+moment");
  solve->add_option("--csv", csv, "write the result row to this file");
  solve->add_option("--json", json, "write a json summary to this file");
  solve->add_option("--dump-mesh", dump_mesh, "write the mesh as json to this file");

  std::string preset;
  int tab_test = 1, tab_k = 1;
  std::string tab_csv;
  CLI::App* table = app.add_subcommand("table", "run a published sweep");
  table->add_option("--preset", preset, "table1 | table2")->required();
  table->add_option("--test", tab_test, "velocity: 1 uniform, 2 rotation")
      ->check(CLI::IsMember({1, 2}));
  table->add_option("--k", tab_k, "polynomial degree")->check(CLI::IsMember({1, 2}));
  table->add_option("--csv", tab_csv, "write the result rows to this file");

  double b_beta = 1.0, b_H = 0.25, b_h = 1.0 / 24.0;
  std::string b_csv;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the convergence bound factors");
  bounds->set_help_flag("--help", "print help");
  bounds->add_option("--beta", b_beta, "regularization parameter");
  bounds->add_option("--H", b_H, "subdomain size");
  bounds->add_option("--h", b_h, "element size");
  bounds->add_option("--csv", b_csv, "write the factors to this file");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) {
      cfg.primal = parse_primal(primal);
      return run_solve(cfg, csv, json, dump_mesh);
    }
    if (table->parsed()) return run_preset(preset, tab_test, tab_k, tab_csv);
    const BoundFactors bf = bound_factors(b_beta, b_H, b_h);
    const std::string text = bound_factors_csv({bf});
    if (!b_csv.empty())
      write_file(b_csv, text);
    else
      std::cout << text;
    std::cout << "predicted rate per iteration: ";
    if (bf.cl > 0)
      std::cout << std::sqrt(1.0 - (bf.cl * bf.cl) / (bf.Cu * bf.Cu)) << "\n";
    else
      std::cout << "n/a (lower factor not positive)\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
