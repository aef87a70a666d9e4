#pragma once

#include <string>
#include <vector>

#include "hdgbddc/condense.hpp"

namespace hdgbddc {

// Convergence-theory factors with all generic constants set to one.
struct BoundFactors {
  double beta = 1.0, H = 1.0, h = 1.0;
  double c0 = 0.0;
  double C_ED = 0.0;
  double C_EDM = 0.0;
  double gamma1 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double Cu = 0.0;
  double cl = 0.0;
};

BoundFactors bound_factors(double beta, double H, double h);

// Residual reduction factor (1 - cl^2/Cu^2)^(m/2) predicted after m steps.
double predicted_rate(const BoundFactors& f, int m);

std::string bound_factors_csv(const std::vector<BoundFactors>& rows);

// Scaled boundary norms of a paired trace function over the whole domain
// (subdomain = -1) or one subdomain.
double h_norm(const TraceSystem& ts, const Eigen::VectorXd& lambda, int subdomain = -1);
double triple_norm(const TraceSystem& ts, const Eigen::VectorXd& lambda, int subdomain = -1);

}  // namespace hdgbddc
