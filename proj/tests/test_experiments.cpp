#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hdgbddc/experiments.hpp"

using namespace hdgbddc;

namespace {

// Five-point central differences of the reference profile, for checking the
// hand-differentiated gradients and Laplacians.
template <typename F>
double fd1(const F& f, double x, double y, bool dx) {
  const double e = 1e-5;
  const auto g = [&](double t) { return dx ? f(x + t, y) : f(x, y + t); };
  return (-g(2 * e) + 8 * g(e) - 8 * g(-e) + g(-2 * e)) / (12 * e);
}

template <typename F>
double fd_lap(const F& f, double x, double y) {
  const double e = 1e-4;
  return (f(x + e, y) + f(x - e, y) + f(x, y + e) + f(x, y - e) - 4 * f(x, y)) / (e * e);
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("reference profile vanishes on the boundary") {
    for (double t = 0.0; t <= 1.0; t += 0.125) {
      CHECK(exact::y(t, 0.0) == 0.0);
      CHECK(exact::y(t, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
      CHECK(exact::y(0.0, t) == 0.0);
      CHECK(exact::y(1.0, t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
      CHECK(exact::p(t, 0.0) == 0.0);
      CHECK(std::abs(exact::p(t, 1.0)) <= 1e-15);
      CHECK(exact::p(0.0, t) == 0.0);
      CHECK(std::abs(exact::p(1.0, t)) <= 1e-15);
    }
  }

  TEST_CASE("frozen profile values") {
    // Values computed symbolically and frozen; guards the closed forms.
    const double x = 0.3, y = 0.7;
    CHECK(exact::y(x, y) == doctest::Approx(-0.2037074480735371).epsilon(1e-14));
    CHECK(exact::grad_y(x, y)[0] == doctest::Approx(-1.3948871592201759).epsilon(1e-14));
    CHECK(exact::grad_y(x, y)[1] == doctest::Approx(0.049087385212340519).epsilon(1e-12));
    CHECK(exact::lap_y(x, y) == doctest::Approx(11.614903597998814).epsilon(1e-14));
    CHECK(exact::p(x, y) == doctest::Approx(-0.25179625334190044).epsilon(1e-14));
    CHECK(exact::grad_p(x, y)[0] == doctest::Approx(-0.060675344960170831).epsilon(1e-13));
    CHECK(exact::grad_p(x, y)[1] == doctest::Approx(1.1494502331584733).epsilon(1e-14));
    CHECK(exact::lap_p(x, y) == doctest::Approx(17.118922840260839).epsilon(1e-14));

    const double u = 0.62, v = 0.18;
    CHECK(exact::y(u, v) == doctest::Approx(0.19484787976890363).epsilon(1e-14));
    CHECK(exact::grad_y(u, v)[0] == doctest::Approx(-0.72708140466755297).epsilon(1e-14));
    CHECK(exact::grad_y(u, v)[1] == doctest::Approx(1.5406622785837391).epsilon(1e-14));
    CHECK(exact::lap_y(u, v) == doctest::Approx(-7.8720612950692381).epsilon(1e-14));
    CHECK(exact::p(u, v) == doctest::Approx(0.091369396564126428).epsilon(1e-14));
    CHECK(exact::grad_p(u, v)[0] == doctest::Approx(0.4976953382306226).epsilon(1e-14));
    CHECK(exact::grad_p(u, v)[1] == doctest::Approx(0.90462242834279209).epsilon(1e-14));
    CHECK(exact::lap_p(u, v) == doctest::Approx(-3.3550892232309188).epsilon(1e-14));
  }

  TEST_CASE("derivatives agree with finite differences") {
    for (const auto& pt : {std::pair{0.3, 0.7}, {0.62, 0.18}, {0.5, 0.5}, {0.11, 0.93}}) {
      const auto [x, y] = pt;
      CAPTURE(x);
      CAPTURE(y);
      CHECK(exact::grad_y(x, y)[0] == doctest::Approx(fd1(exact::y, x, y, true)).epsilon(1e-9));
      CHECK(exact::grad_y(x, y)[1] == doctest::Approx(fd1(exact::y, x, y, false)).epsilon(1e-9));
      CHECK(exact::grad_p(x, y)[0] == doctest::Approx(fd1(exact::p, x, y, true)).epsilon(1e-9));
      CHECK(exact::grad_p(x, y)[1] == doctest::Approx(fd1(exact::p, x, y, false)).epsilon(1e-9));
      CHECK(exact::lap_y(x, y) == doctest::Approx(fd_lap(exact::y, x, y)).epsilon(1e-6));
      CHECK(exact::lap_p(x, y) == doctest::Approx(fd_lap(exact::p, x, y)).epsilon(1e-6));
    }
  }

  TEST_CASE("manufactured loads close the coupled equations") {
    // f = sqrt(beta)(-lap y + zeta . grad y) - p and
    // g = sqrt(beta)(-lap p - zeta . grad p) + y, checked against the
    // profile derivatives at sample points for both velocities.
    for (const int test : {1, 2}) {
      for (const double beta : {1.0, 1e-4}) {
        const ProblemConfig prob = make_problem(test, beta);
        const Velocity zeta = test_velocity(test);
        const double sb = std::sqrt(beta);
        for (const auto& pt : {std::pair{0.3, 0.7}, {0.62, 0.18}, {0.25, 0.4}}) {
          const auto [x, y] = pt;
          const auto z = zeta(x, y);
          const double f_ref =
              sb * (-exact::lap_y(x, y) + z[0] * exact::grad_y(x, y)[0] +
                    z[1] * exact::grad_y(x, y)[1]) -
              exact::p(x, y);
          const double g_ref =
              sb * (-exact::lap_p(x, y) - z[0] * exact::grad_p(x, y)[0] -
                    z[1] * exact::grad_p(x, y)[1]) +
              exact::y(x, y);
          CAPTURE(test);
          CAPTURE(beta);
          CAPTURE(x);
          CAPTURE(y);
          CHECK(prob.f(x, y) == doctest::Approx(f_ref).epsilon(1e-13));
          CHECK(prob.g(x, y) == doctest::Approx(g_ref).epsilon(1e-13));
        }
      }
    }
  }

  TEST_CASE("velocity lookup matches the two test configurations") {
    const auto z1 = test_velocity(1)(0.3, 0.8);
    CHECK(z1[0] == 1.0);
    CHECK(z1[1] == 0.0);
    const auto z2 = test_velocity(2)(0.3, 0.8);
    CHECK(z2[0] == doctest::Approx(0.8));
    CHECK(z2[1] == doctest::Approx(-0.3));
    CHECK_THROWS_AS(test_velocity(3), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(1, -2.0), std::invalid_argument);
  }

  TEST_CASE("published iteration references") {
    CHECK(reference_iters("table1", 1, 1, 1.0, 4) == 19);
    CHECK(reference_iters("table1", 1, 1, 1e-4, 4) == 25);
    CHECK(reference_iters("table1", 2, 1, 1.0, 8) == 6);
    CHECK(reference_iters("table1", 1, 2, 1e-8, 32) == 21);
    CHECK(reference_iters("table2", 1, 1, 1.0, 4) == 18);
    CHECK(reference_iters("table2", 1, 1, 1.0, 8) == 23);
    CHECK(reference_iters("table2", 1, 1, 1.0, 16) == 28);
    CHECK(reference_iters("table2", 2, 2, 1e-6, 20) == 8);
    // Unknown cells answer -1.
    CHECK(reference_iters("table1", 1, 1, 1.0, 5) == -1);
    CHECK(reference_iters("table1", 1, 1, 0.5, 4) == -1);
    CHECK(reference_iters("table3", 1, 1, 1.0, 4) == -1);
    CHECK(reference_iters("table2", 3, 1, 1.0, 4) == -1);
  }

  TEST_CASE("case runs are deterministic apart from the wall clock") {
    ExperimentConfig cfg;
    cfg.test = 2;
    cfg.k = 1;
    cfg.beta = 1e-4;
    cfg.nsub = 2;
    cfg.hh = 2;
    const CaseResult a = run_case(cfg);
    const CaseResult b = run_case(cfg);
    CHECK(a.iters == b.iters);
    CHECK(a.converged);
    CHECK(a.final_true_res == b.final_true_res);
    CHECK(a.l2err_y == b.l2err_y);
    CHECK(a.l2err_p == b.l2err_p);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i] == b.history[i]);
    // CSV rows agree except for the wall-clock column.
    auto strip_wall = [](const std::string& csv) {
      std::string out;
      std::istringstream is(csv);
      std::string line;
      while (std::getline(is, line)) {
        // Column 10 is wall_ms: blank it.
        std::string rebuilt;
        int col = 0;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
          if (col == 9) cell = "x";
          rebuilt += (col ? "," : "") + cell;
          ++col;
        }
        out += rebuilt + "\n";
      }
      return out;
    };
    CHECK(strip_wall(results_csv({a})) == strip_wall(results_csv({b})));
  }

  TEST_CASE("csv schema carries the documented columns") {
    ExperimentConfig cfg;
    cfg.test = 1;
    cfg.k = 1;
    cfg.beta = 1.0;
    cfg.nsub = 2;
    cfg.hh = 1;
    CaseResult r = run_case(cfg);
    const std::string csv = results_csv({r});
    std::istringstream is(csv);
    std::string header;
    REQUIRE(std::getline(is, header));
    CHECK(header ==
          "test,k,beta,nsub,hh,iters,final_true_res,l2err_y,l2err_p,wall_ms,paper_ref_iters,"
          "delta");
    std::string row;
    REQUIRE(std::getline(is, row));
    int commas = 0;
    for (char c : row)
      if (c == ',') ++commas;
    CHECK(commas == 11);
    // Without a reference count the last two cells stay empty.
    CHECK(row.substr(row.size() - 2) == ",,");
    // With one, both fill in.
    r.paper_ref = r.iters + 3;
    const std::string csv2 = results_csv({r});
    std::istringstream is2(csv2);
    std::getline(is2, header);
    std::getline(is2, row);
    CHECK(row.substr(row.size() - 5) == "," + std::to_string(r.iters + 3) + ",-3");
  }

  TEST_CASE("json result carries the solver outcome") {
    ExperimentConfig cfg;
    cfg.test = 2;
    cfg.k = 1;
    cfg.beta = 1.0;
    cfg.nsub = 2;
    cfg.hh = 1;
    const CaseResult r = run_case(cfg);
    const std::string j = result_json(r);
    CHECK(j.find("\"iters\"") != std::string::npos);
    CHECK(j.find("\"converged\": true") != std::string::npos);
    CHECK(j.find("\"l2err_y\"") != std::string::npos);
    CHECK(j.find("\"residual_history\"") != std::string::npos);
  }

  TEST_CASE("a single subdomain pair solves without interface unknowns") {
    // nsub = 1 leaves no interface: the run falls back to the direct trace
    // solve and reports zero iterations.
    ExperimentConfig cfg;
    cfg.test = 1;
    cfg.k = 1;
    cfg.beta = 1.0;
    cfg.nsub = 1;
    cfg.hh = 2;
    const CaseResult r = run_case(cfg);
    CHECK(r.converged);
    CHECK(r.iters == 0);
    CHECK(r.n_gamma == 0);
    CHECK(r.final_true_res <= 1e-9);
    CHECK(r.l2err_y < 0.5);
    CHECK(r.l2err_p < 0.5);
  }

  TEST_CASE("invalid experiment configurations are rejected") {
    ExperimentConfig cfg;
    cfg.k = 3;
    CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
    cfg.k = 1;
    cfg.nsub = 0;
    CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
    cfg.nsub = 2;
    cfg.hh = 0;
    CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
  }

  TEST_CASE("solution errors shrink under refinement") {
    ExperimentConfig cfg;
    cfg.test = 1;
    cfg.k = 1;
    cfg.beta = 1.0;
    cfg.nsub = 2;
    cfg.hh = 1;
    const CaseResult coarse = run_case(cfg);
    cfg.hh = 4;
    const CaseResult fine = run_case(cfg);
    CHECK(fine.l2err_y < 0.2 * coarse.l2err_y);
    CHECK(fine.l2err_p < 0.2 * coarse.l2err_p);
  }
}
