#pragma once

#include "petzlab/states.hpp"

namespace petzlab {

// Two-state weighted p-norm
//   || rho^{(1-w)/p} x eta^{w/p} ||_p
// with w in [0, 1] sliding the reference weight from left (w = 0) to right
// (w = 1). p = inf degrades the weight powers to support projectors and
// returns the operator norm of the compressed x.
double weighted_p_norm(const Matrix& x, const PsdMatrix& rho, const PsdMatrix& eta,
                       double p, double w);

// Umegaki relative entropy tr rho (ln rho - ln eta), evaluated through the
// eigensystems after projecting rho to the support of eta. Returns +inf when
// supp rho is not contained in supp eta.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                        double support_tol = 1e-10);

// Renyi divergence of order (alpha, z):
//   1/(alpha - 1) * ln tr (rho^{alpha/2z} eta^{(1-alpha)/z} rho^{alpha/2z})^z.
// alpha = z is the sandwiched family, z = 1 the non-sandwiched one. The
// default domain guard accepts alpha in (0,1) u (1,2] with
// z >= max(alpha - 1, alpha/2); pass unchecked = true to evaluate outside.
double alpha_z_renyi(const DensityMatrix& rho, const DensityMatrix& eta, double alpha,
                     double z, bool unchecked = false);

// || sqrt(x) sqrt(y) ||_p for PSD x, y (not necessarily normalized)
double p_fidelity(const PsdMatrix& x, const PsdMatrix& y, double p);
double p_fidelity(const DensityMatrix& x, const DensityMatrix& y, double p);

// ---- measured relative entropy ----

// sup over omega > 0 of tr(rho ln omega) + 1 - tr(eta omega), computed by
// gradient ascent in H = ln omega. The ascent value never exceeds the true
// supremum, so upper-bound comparisons stay one-sided.
struct MeasuredResult {
  double value = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  Matrix optimizer_h;  // in the compressed support basis of eta
};

MeasuredResult measured_relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                                         double grad_tol = 1e-9, int max_iterations = 500);

// objective and gradient on the compressed support space, exposed for the
// finite-difference tests
double measured_objective(const Matrix& rho_c, const Matrix& eta_c, const Matrix& h);
Matrix measured_gradient(const Matrix& rho_c, const Matrix& eta_c, const Matrix& h);

}  // namespace petzlab
