#pragma once

#include <functional>
#include <vector>

#include "petzlab/linalg.hpp"

namespace petzlab {

// Probability density on the real line used to average analytic families over
// the boundary of the unit strip. theta = 0 is the endpoint member
//   (pi/2) / (cosh(pi t) + 1),
// and for 0 < theta < 1
//   sin(pi theta) / (2 theta (cosh(pi t) + cos(pi theta))).
// Each integrates to 1; theta -> 0 recovers the endpoint density pointwise.
double beta_density(double theta, double t);

struct BetaWeight {
  double theta = 0.0;
  explicit BetaWeight(double th);
  double operator()(double t) const { return beta_density(theta, t); }
};

// Composite Gauss-Legendre rule on [-half_width, half_width] with
// nodes_per_unit points per unit-length panel.
struct QuadratureRule {
  double half_width = 12.0;
  int nodes_per_unit = 32;
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule make_quadrature(double half_width = 12.0, int nodes_per_unit = 32);

struct QuadratureOptions {
  double half_width = 12.0;
  int base_nodes_per_unit = 32;
  double rel_tol = 1e-9;
  int max_doublings = 4;
};

struct QuadratureInfo {
  int evaluations = 0;
  int doublings = 0;
  double last_delta = 0.0;
};

// integral of f(t) beta_theta(t) dt over the truncated line, refined by
// doubling the panel resolution until two successive estimates agree to
// rel_tol (relative to max(1, |I|)). Throws std::runtime_error when the
// refinement cap is hit without convergence.
double integrate_weighted(const std::function<double(double)>& f, double theta,
                          const QuadratureOptions& opts = {}, QuadratureInfo* info = nullptr);

// same contract for matrix-valued integrands, convergence in Frobenius norm
Matrix integrate_weighted_matrix(const std::function<Matrix(double)>& f, double theta,
                                 const QuadratureOptions& opts = {},
                                 QuadratureInfo* info = nullptr);

}  // namespace petzlab
