#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hdgbddc/diagnostics.hpp"
#include "hdgbddc/experiments.hpp"
#include "oracles.hpp"

using namespace hdgbddc;

namespace {

// Independent evaluation of the scaled boundary norms: loop the elements,
// integrate both trace fields with a fresh quadrature, subtract the
// per-element boundary mean for the centered variant.
std::pair<double, double> norms_oracle(const TraceSystem& ts, const Eigen::VectorXd& lambda,
                                       int subdomain) {
  const Mesh& mesh = *ts.mesh;
  const EdgeBasis eb(ts.k);
  const LineRule er = line_gauss(ts.k + 3);
  const Eigen::MatrixXd ev = eb.eval(er.t);
  double plain = 0.0, centered = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.tris.size()); ++t) {
    if (subdomain >= 0 && mesh.tris[t].subdomain != subdomain) continue;
    for (int f = 0; f < 2; ++f) {
      double mass = 0.0, mean = 0.0, perim = 0.0;
      std::array<Eigen::VectorXd, 3> vals;
      for (int le = 0; le < 3; ++le) {
        const int e = mesh.tris[t].edge[le];
        vals[le] = Eigen::VectorXd::Zero(er.n());
        if (ts.space.edge_offset[e] >= 0)
          for (int a = 0; a <= ts.k; ++a)
            vals[le] += lambda(ts.space.dof(e, a, f)) * ev.col(a);
        const double len = mesh.edges[e].length;
        perim += len;
        mean += len * er.w.dot(vals[le]);
        mass += len * vals[le].cwiseAbs2().dot(er.w);
      }
      mean /= perim;
      plain += mass;
      for (int le = 0; le < 3; ++le) {
        const double len = mesh.edges[mesh.tris[t].edge[le]].length;
        centered += len * (vals[le].array() - mean).square().matrix().dot(er.w);
      }
    }
  }
  const double scale = subdomain >= 0 ? mesh.H / 4.0 : 0.25;
  return {std::sqrt(scale * plain), std::sqrt(centered / scale)};
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("factor arithmetic at unit regularization") {
    // H/h = 6 with beta = 1 keeps every beta power equal to one, so each
    // factor reduces to elementary arithmetic.
    const double H = 0.25, h = 1.0 / 24.0;
    const BoundFactors f = bound_factors(1.0, H, h);
    const double lg = 1.0 + std::log(6.0);
    const double c0 = 1.0 + h;
    CHECK(f.c0 == doctest::Approx(c0).epsilon(1e-14));
    CHECK(f.C_ED == doctest::Approx(c0 * (1.0 + H) * lg).epsilon(1e-13));
    CHECK(f.C_EDM == doctest::Approx((1.0 + c0 * H) * c0 * (1.0 + H) * lg).epsilon(1e-13));
    CHECK(f.gamma1 == doctest::Approx(2.0 * c0).epsilon(1e-14));
    CHECK(f.alpha1 == doctest::Approx(H * (2.0 * c0 * c0 + 1.0)).epsilon(1e-13));
    CHECK(f.alpha2 == doctest::Approx(H * (2.0 * c0 * c0 + f.C_ED)).epsilon(1e-13));
    CHECK(f.c1 == doctest::Approx(c0 * H * f.C_ED).epsilon(1e-13));
    CHECK(f.c2 == doctest::Approx(f.gamma1 * f.alpha2).epsilon(1e-13));
    CHECK(f.c3 == doctest::Approx(2.0 * c0 * H).epsilon(1e-13));
    CHECK(f.c4 == doctest::Approx(f.gamma1 * f.alpha1).epsilon(1e-13));
    // The upper factor is the square of the chained embedding constant.
    const double cu = std::pow((1.0 + c0 * H) * c0 * (1.0 + H) * lg, 2);
    CHECK(std::abs(f.Cu - cu) <= 1e-12 * cu);
    CHECK(f.cl == doctest::Approx(1.0 - f.c2 * f.C_EDM - f.c3 * f.C_EDM * f.C_EDM).epsilon(1e-13));
  }

  TEST_CASE("factors grow as the regularization shrinks") {
    const double H = 0.25, h = 1.0 / 24.0;
    double prev = 0.0;
    for (const double beta : {1.0, 1e-2, 1e-4, 1e-6}) {
      const BoundFactors f = bound_factors(beta, H, h);
      CHECK(f.Cu > prev);
      CHECK(f.Cu > 0.0);
      CHECK(f.C_EDM > 0.0);
      prev = f.Cu;
    }
  }

  TEST_CASE("a fine well-regularized split admits a positive lower factor") {
    const BoundFactors f = bound_factors(1.0, 1.0 / 64.0, 1.0 / 128.0);
    CHECK(f.cl > 0.0);
    CHECK(f.cl < 1.0);
    // Predicted reduction factors decay monotonically from one.
    CHECK(predicted_rate(f, 0) == doctest::Approx(1.0));
    double prev = 1.0;
    for (const int m : {1, 2, 5, 10, 40}) {
      const double r = predicted_rate(f, m);
      CHECK(r > 0.0);
      CHECK(r < prev);
      prev = r;
    }
    // Halving the target squares the per-step factor exactly.
    CHECK(predicted_rate(f, 4) == doctest::Approx(std::pow(predicted_rate(f, 2), 2)).epsilon(1e-13));
  }

  TEST_CASE("invalid factor arguments are rejected") {
    CHECK_THROWS_AS(bound_factors(0.0, 0.25, 0.125), std::invalid_argument);
    CHECK_THROWS_AS(bound_factors(-1.0, 0.25, 0.125), std::invalid_argument);
    CHECK_THROWS_AS(bound_factors(1.0, 0.125, 0.25), std::invalid_argument);  // h > H
    CHECK_THROWS_AS(bound_factors(1.0, 0.25, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_factors(1.0, 0.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("csv output carries the header and one row per entry") {
    const BoundFactors a = bound_factors(1.0, 0.25, 1.0 / 24.0);
    const BoundFactors b = bound_factors(1e-4, 0.25, 1.0 / 24.0);
    const std::string csv = bound_factors_csv({a, b});
    std::istringstream is(csv);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "beta,H,h,c0,C_ED,C_EDM,Cu_factor,cl_factor");
    int rows = 0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      ++rows;
      double beta, H, h, c0;
      char comma;
      std::istringstream ls(line);
      ls >> beta >> comma >> H >> comma >> h >> comma >> c0;
      CHECK(H == doctest::Approx(0.25));
      CHECK(h == doctest::Approx(1.0 / 24.0));
    }
    CHECK(rows == 2);
  }

  TEST_CASE("boundary norms match an independent quadrature") {
    for (const int k : {1, 2}) {
      CAPTURE(k);
      const Mesh mesh = build_structured_mesh({2, 2});
      const TraceSystem ts = condense(mesh, k, make_problem(2, 1e-2));
      const Eigen::VectorXd lam = oracle::random_vector(ts.space.n_dofs, 61);
      for (const int sub : {-1, 0, 3}) {
        CAPTURE(sub);
        const auto [plain, centered] = norms_oracle(ts, lam, sub);
        CHECK(h_norm(ts, lam, sub) == doctest::Approx(plain).epsilon(1e-12));
        CHECK(triple_norm(ts, lam, sub) == doctest::Approx(centered).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("constant traces have zero centered norm away from the boundary") {
    // The middle subdomain of a 3x3 split touches no Dirichlet edge, so a
    // globally constant trace has no deviation from its element means there.
    const Mesh mesh = build_structured_mesh({3, 1});
    const TraceSystem ts = condense(mesh, 1, make_problem(1, 1.0));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ts.space.n_dofs);
    CHECK(triple_norm(ts, ones, 4) <= 1e-12);
    // Plain norm of the constant over that subdomain: two unit-one fields on
    // two triangles of perimeter (2 + sqrt(2)) H with scale H/4.
    const double expect = std::sqrt((2.0 + std::sqrt(2.0)) / 9.0);
    CHECK(h_norm(ts, ones, 4) == doctest::Approx(expect).epsilon(1e-13));
    // A triangle with a Dirichlet edge deviates from its mean: nonzero
    // centered norm over the whole domain.
    CHECK(triple_norm(ts, ones, -1) > 0.1);
  }

  TEST_CASE("single dof norm reduces to one edge basis integral") {
    // One first-field dof on an interior edge: the squared plain norm is
    // scale times twice (two incident elements) the integral of the squared
    // hat function, length / 3.
    const Mesh mesh = build_structured_mesh({1, 2});
    const TraceSystem ts = condense(mesh, 1, make_problem(1, 1.0));
    int pick = -1;
    for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e)
      if (mesh.edges[e].cls == EdgeClass::Interior &&
          std::abs(mesh.edges[e].normal[0]) < 1e-12) {
        pick = e;
        break;  // a horizontal interior edge, length 1/2
      }
    REQUIRE(pick >= 0);
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(ts.space.n_dofs);
    lam(ts.space.dof(pick, 0, 0)) = 1.0;
    const double expect = std::sqrt(0.25 * 2.0 * (0.5 / 3.0));
    CHECK(h_norm(ts, lam, -1) == doctest::Approx(expect).epsilon(1e-13));
  }
}
