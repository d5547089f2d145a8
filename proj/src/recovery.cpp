#include "petzlab/recovery.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace petzlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// clip tolerance for matrices assembled from products and quadrature sums
constexpr double kAssembledClip = 1e-10;

}  // namespace

RecoveryContext::RecoveryContext(const DensityMatrix& eta, const QuantumChannel& phi)
    : eta_(eta.psd()), eta_hat_([&] {
        Matrix eh = phi.apply(eta.matrix());
        return PsdMatrix(0.5 * (eh + eh.adjoint()), kAssembledClip);
      }()),
      phi_(&phi) {
  if (eta.dim() != phi.d_in()) {
    throw std::invalid_argument("RecoveryContext: eta dimension does not match channel input");
  }
}

Matrix RecoveryContext::rotated(Complex z, const Matrix& x_hat) const {
  const double theta = z.real();
  if (theta <= 0.0 || theta > 1.0) {
    throw std::invalid_argument("rotated recovery: Re(z) must lie in (0, 1]");
  }
  if (x_hat.rows() != phi_->d_out() || x_hat.cols() != phi_->d_out()) {
    throw std::invalid_argument("rotated recovery: dimension mismatch");
  }
  const Complex zc = std::conj(z);
  Matrix inner = eta_hat_.power(-zc / 2.0) * x_hat * eta_hat_.power(-z / 2.0);
  return eta_.power(zc / 2.0) * phi_->adjoint_apply(inner) * eta_.power(z / 2.0);
}

Matrix RecoveryContext::petz(const Matrix& x_hat) const {
  return rotated(Complex(1.0, 0.0), x_hat);
}

Matrix RecoveryContext::universal(const Matrix& x_hat, const QuadratureOptions& opts) const {
  Matrix out = integrate_weighted_matrix(
      [&](double t) { return rotated(Complex(1.0, t), x_hat); }, 0.0, opts);
  return 0.5 * (out + out.adjoint());
}

Matrix RecoveryContext::nonlinear_p(double p, const Matrix& x_hat_psd,
                                    const QuadratureOptions& opts) const {
  if (!(p >= 1.0) || std::isinf(p)) {
    throw std::invalid_argument("nonlinear recovery: p must be finite and >= 1");
  }
  PsdMatrix x(x_hat_psd, kAssembledClip);
  Matrix root = x.power(Complex(1.0 / p, 0.0));
  Matrix avg = integrate_weighted_matrix(
      [&](double t) { return rotated(Complex(1.0, t) / p, root); }, 0.0, opts);
  PsdMatrix avg_psd(0.5 * (avg + avg.adjoint()), kAssembledClip);
  return avg_psd.power(Complex(p, 0.0));
}

Matrix RecoveryContext::vector_half(const Matrix& x_hat) const {
  Matrix inner = eta_hat_.power(Complex(-0.25, 0.0)) * x_hat * eta_hat_.power(Complex(-0.25, 0.0));
  return eta_.power(Complex(0.25, 0.0)) * phi_->adjoint_apply(inner) *
         eta_.power(Complex(0.25, 0.0));
}

Matrix petz_apply(const DensityMatrix& eta, const QuantumChannel& phi, const Matrix& x_hat) {
  return RecoveryContext(eta, phi).petz(x_hat);
}

Matrix rotated_recovery_apply(const DensityMatrix& eta, const QuantumChannel& phi, Complex z,
                              const Matrix& x_hat) {
  return RecoveryContext(eta, phi).rotated(z, x_hat);
}

Matrix universal_recovery_apply(const DensityMatrix& eta, const QuantumChannel& phi,
                                const Matrix& x_hat, const QuadratureOptions& opts) {
  return RecoveryContext(eta, phi).universal(x_hat, opts);
}

Matrix nonlinear_recovery_p(const DensityMatrix& eta, const QuantumChannel& phi, double p,
                            const Matrix& x_hat_psd, const QuadratureOptions& opts) {
  return RecoveryContext(eta, phi).nonlinear_p(p, x_hat_psd, opts);
}

Matrix vector_recover_half(const DensityMatrix& eta, const QuantumChannel& phi,
                           const Matrix& x_hat) {
  return RecoveryContext(eta, phi).vector_half(x_hat);
}

double support_leak(const Matrix& x, const Matrix& support_projector) {
  const int d = static_cast<int>(x.rows());
  Matrix off = (Matrix::Identity(d, d) - support_projector);
  return std::abs((off * x).trace().real());
}

Interpolant::Interpolant(const DensityMatrix& rho, const DensityMatrix& eta,
                         const QuantumChannel& phi)
    : rho_(rho.psd()), ctx_(eta, phi), rho_hat_([&] {
        Matrix rh = phi.apply(rho.matrix());
        return PsdMatrix(0.5 * (rh + rh.adjoint()), kAssembledClip);
      }()),
      st_(phi.stinespring()) {}

Matrix Interpolant::g(Complex z) const {
  Matrix head = rho_hat_.power(z / 2.0) * ctx_.eta_hat().power(-z / 2.0);
  const int d_out = st_.d_out;
  const int d_env = st_.d_env;
  // (head (x) 1_env) V without materializing the Kronecker product
  Matrix hv(d_out * d_env, st_.d_in);
  for (int e = 0; e < d_env; ++e) {
    Matrix block(d_out, st_.d_in);
    for (int o = 0; o < d_out; ++o) block.row(o) = st_.v.row(o * d_env + e);
    Matrix mixed = head * block;
    for (int o = 0; o < d_out; ++o) hv.row(o * d_env + e) = mixed.row(o);
  }
  return hv * ctx_.eta().power(z / 2.0) * rho_.power(-z / 2.0);
}

double Interpolant::weighted_norm(Complex z, double p) const {
  Matrix gz = g(z);
  const double e = std::isinf(p) ? 0.0 : 1.0 / p;
  return schatten_norm(gz * rho_.power(Complex(e, 0.0)), p);
}

double Interpolant::weighted_norm_native(Complex z) const {
  const double theta = z.real();
  if (theta < 0.0 || theta > 1.0) {
    throw std::invalid_argument("Interpolant: Re(z) must lie in [0, 1]");
  }
  const double p = theta == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / theta;
  return weighted_norm(z, p);
}

double log_fidelity_of_recovery(const RecoveryContext& ctx, const PsdMatrix& rho,
                                const PsdMatrix& rho_hat, Complex z) {
  const double theta = z.real();
  if (theta <= 0.0 || theta > 1.0) {
    throw std::invalid_argument("log_fidelity_of_recovery: Re(z) must lie in (0, 1]");
  }
  Matrix recovered = ctx.rotated(z, rho_hat.power(Complex(theta, 0.0)));
  PsdMatrix rec(0.5 * (recovered + recovered.adjoint()), kAssembledClip);
  Matrix prod = rho.power(Complex(theta / 2.0, 0.0)) * rec.power(Complex(0.5, 0.0));
  double f = schatten_norm(prod, 1.0 / theta);
  if (f < 1e-300) return kInf;
  return -std::log(f);
}

double log_fidelity_of_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                const QuantumChannel& phi, Complex z) {
  RecoveryContext ctx(eta, phi);
  Matrix rh = phi.apply(rho.matrix());
  PsdMatrix rho_hat(0.5 * (rh + rh.adjoint()), kAssembledClip);
  return log_fidelity_of_recovery(ctx, rho.psd(), rho_hat, z);
}

}  // namespace petzlab
