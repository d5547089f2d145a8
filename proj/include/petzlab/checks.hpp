#pragma once

#include <map>
#include <string>
#include <vector>

#include "petzlab/recovery.hpp"

namespace petzlab {

// Every checker computes both sides of one inequality (or identity) and
// reports the signed margin, oriented so that margin >= 0 means the claimed
// relation holds. pass tolerates a relative slack.
struct GapReport {
  std::string check_name;
  std::string instance_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double slack = 0.0;
  bool pass = false;
  std::map<std::string, double> diagnostics;
};

// 1e-7 * max(1, |lhs|, |rhs|)
double check_slack(double lhs, double rhs);

// fills margin, slack and pass from lhs/rhs already stored in the report
void finish_report(GapReport& rep);

// ---- trace inequalities ----

// ln || prod x_k^r ||_{p/r, w}  <=  r * integral beta_r(t) ln || prod x_k^{1+it} ||_{p, w} dt
// against the two-state weighted norm with states (rho, eta). r = 1 uses the
// degenerate point-mass convention and the two sides coincide by definition.
GapReport check_alt(const std::vector<PsdMatrix>& xs, const DensityMatrix& rho,
                    const DensityMatrix& eta, double p, double r, double w,
                    const QuadratureOptions& opts = {});

// ln || exp(H0/p + sum H_k) ||_p <= integral beta_0(t) ln || prod exp((1+it)H_k) rho^{1/p} ||_p dt
// with H0 = ln rho. Diagnostics carry the Trotter-product residuals at
// r in {1/4, 1/16, 1/64}.
GapReport check_gt(const std::vector<Matrix>& hs, const DensityMatrix& rho, double p,
                   const QuadratureOptions& opts = {});

// concavity of X -> || exp(H0/p + ln X) ||_p on the PD cone
GapReport check_lieb(const Matrix& h0, double p, const PsdMatrix& x1, const PsdMatrix& x2,
                     double lambda);

// ---- data processing ----

GapReport check_dpi_relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                                     const QuantumChannel& phi);
GapReport check_dpi_sandwiched(const DensityMatrix& rho, const DensityMatrix& eta,
                               const QuantumChannel& phi, double p);
GapReport check_dpi_p_fidelity(const DensityMatrix& rho, const DensityMatrix& eta,
                               const QuantumChannel& phi, double p);

// ---- recovery bounds ----

// entropy gap dominates the twirled fidelity-of-recovery integral scaled by 2p
GapReport check_recovery_p(const DensityMatrix& rho, const DensityMatrix& eta,
                           const QuantumChannel& phi, double p,
                           const QuadratureOptions& opts = {});

// -ln f_p of the 1/p powers of rho and its nonlinear recovery <= gap / 2p
GapReport check_universal_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                   const QuantumChannel& phi, double p,
                                   const QuadratureOptions& opts = {});

// gap dominates the measured relative entropy between rho and the
// universally recovered channel output. recover_reference recovers from
// Phi(eta) instead; the fixed point collapses that variant to
// D_M(rho || eta), which the gap does not dominate in general, so it is
// offered for comparison only and never enters ensemble runs.
GapReport check_measured_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                  const QuantumChannel& phi,
                                  const QuadratureOptions& opts = {},
                                  double optimizer_tol = 1e-9,
                                  bool recover_reference = false);

// || rho^{1/2} - R_{1/2}(rho_hat^{1/2}) ||_2^2 <= gap  and
// || rho - (R_{1/2}(rho_hat^{1/2}))^2 ||_1^2 <= 4 gap
GapReport check_quadratic(const DensityMatrix& rho, const DensityMatrix& eta,
                          const QuantumChannel& phi, const QuadratureOptions& opts = {});

// zero gap iff exact recovery, both directions at numerical resolution
GapReport check_petz_equality(const DensityMatrix& rho, const DensityMatrix& eta,
                              const QuantumChannel& phi, double equality_tol = 1e-9,
                              const QuadratureOptions& opts = {});

// ---- scalar engine checks ----

struct ExpTerm {
  Complex c;
  double a;
};

// log-convexity across the strip for g(z) = sum c_k exp(a_k z)
GapReport check_hirschman_scalar(const std::vector<ExpTerm>& terms, double theta,
                                 const QuadratureOptions& opts = {});

// Richardson-extrapolated derivative of the interpolation norm reproduces the
// entropy gap
GapReport check_entropy_derivative(const DensityMatrix& rho, const DensityMatrix& eta,
                                   const QuantumChannel& phi);

}  // namespace petzlab
