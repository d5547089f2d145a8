#pragma once

#include "petzlab/norms.hpp"
#include "petzlab/states.hpp"
#include "petzlab/weights.hpp"

namespace petzlab {

// Recovery maps for a fixed reference state eta and channel Phi, with
// eta_hat = Phi(eta). Everything is built from the rotated family
//   R_z(X) = eta^{conj(z)/2} Phi^dag( eta_hat^{-conj(z)/2} X eta_hat^{-z/2} ) eta^{z/2},
// which preserves Hermiticity and positivity for every z and reduces to the
// transpose-channel recovery at z = 1. Negative powers act on the support of
// eta_hat, so input mass outside that support is silently compressed; use
// support_leak to surface it in diagnostics.
class RecoveryContext {
 public:
  RecoveryContext(const DensityMatrix& eta, const QuantumChannel& phi);

  const PsdMatrix& eta() const { return eta_; }
  const PsdMatrix& eta_hat() const { return eta_hat_; }
  const QuantumChannel& channel() const { return *phi_; }

  Matrix petz(const Matrix& x_hat) const;
  // requires 0 < Re(z) <= 1
  Matrix rotated(Complex z, const Matrix& x_hat) const;
  // averaged rotated recovery at z = 1 + it against the endpoint weight
  Matrix universal(const Matrix& x_hat, const QuadratureOptions& opts = {}) const;
  // ( integral of R_{(1+it)/p}(x^{1/p}) d beta_0 )^p
  Matrix nonlinear_p(double p, const Matrix& x_hat_psd,
                     const QuadratureOptions& opts = {}) const;
  // eta^{1/4} Phi^dag(eta_hat^{-1/4} X eta_hat^{-1/4}) eta^{1/4}
  Matrix vector_half(const Matrix& x_hat) const;

 private:
  PsdMatrix eta_;
  PsdMatrix eta_hat_;
  const QuantumChannel* phi_;
};

// spec-level free functions

Matrix petz_apply(const DensityMatrix& eta, const QuantumChannel& phi, const Matrix& x_hat);
Matrix rotated_recovery_apply(const DensityMatrix& eta, const QuantumChannel& phi, Complex z,
                              const Matrix& x_hat);
Matrix universal_recovery_apply(const DensityMatrix& eta, const QuantumChannel& phi,
                                const Matrix& x_hat, const QuadratureOptions& opts = {});
Matrix nonlinear_recovery_p(const DensityMatrix& eta, const QuantumChannel& phi, double p,
                            const Matrix& x_hat_psd, const QuadratureOptions& opts = {});
Matrix vector_recover_half(const DensityMatrix& eta, const QuantumChannel& phi,
                           const Matrix& x_hat);

// trace mass of x outside the support projector p
double support_leak(const Matrix& x, const Matrix& support_projector);

// Interpolating family
//   G(z) = (rho_hat^{z/2} eta_hat^{-z/2} (x) 1_env) V eta^{z/2} rho^{-z/2}
// built on the Stinespring dilation V of the channel. On the line Re(z) = 0
// its operator norm never exceeds tr(rho); at z = theta + it its weighted
// norm ||G(z) rho^{theta}||_{1/theta} equals the recovery fidelity
// f_{1/theta}(rho^theta, R_z(rho_hat^theta)).
class Interpolant {
 public:
  Interpolant(const DensityMatrix& rho, const DensityMatrix& eta, const QuantumChannel& phi);

  Matrix g(Complex z) const;
  // || G(z) rho^{1/p} ||_p with p in [1, inf]
  double weighted_norm(Complex z, double p) const;
  // same with p tied to the vertical line through z: p = 1/Re(z), inf on the axis
  double weighted_norm_native(Complex z) const;

  const RecoveryContext& recovery() const { return ctx_; }
  const PsdMatrix& rho() const { return rho_; }
  const PsdMatrix& rho_hat() const { return rho_hat_; }

 private:
  PsdMatrix rho_;
  RecoveryContext ctx_;
  PsdMatrix rho_hat_;
  StinespringIsometry st_;
};

// -ln f_{1/theta}(rho^theta, R_z(Phi(rho)^theta)) with theta = Re(z) in (0, 1];
// +inf when the fidelity underflows
double log_fidelity_of_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                const QuantumChannel& phi, Complex z);
// variant reusing a prepared context and Phi(rho)
double log_fidelity_of_recovery(const RecoveryContext& ctx, const PsdMatrix& rho,
                                const PsdMatrix& rho_hat, Complex z);

}  // namespace petzlab
