#include "petzlab/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace petzlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool support_contained(const DensityMatrix& rho, const DensityMatrix& eta, double tol) {
  // mass of rho outside supp eta
  const Matrix p = eta.support_projector();
  const int d = eta.dim();
  double leak = ((Matrix::Identity(d, d) - p) * rho.matrix()).trace().real();
  return leak <= tol;
}

}  // namespace

double weighted_p_norm(const Matrix& x, const PsdMatrix& rho, const PsdMatrix& eta,
                       double p, double w) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("weighted_p_norm: p must be >= 1");
  }
  if (w < 0.0 || w > 1.0) {
    throw std::invalid_argument("weighted_p_norm: w must lie in [0, 1]");
  }
  if (x.rows() != rho.dim() || x.cols() != eta.dim()) {
    throw std::invalid_argument("weighted_p_norm: dimension mismatch");
  }
  const double le = std::isinf(p) ? 0.0 : (1.0 - w) / p;
  const double re = std::isinf(p) ? 0.0 : w / p;
  Matrix weighted = rho.power(Complex(le, 0.0)) * x * eta.power(Complex(re, 0.0));
  return schatten_norm(weighted, p);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                        double support_tol) {
  if (!support_contained(rho, eta, support_tol)) return kInf;
  const Matrix peta = eta.support_projector();
  Matrix rho_proj = peta * rho.matrix() * peta;
  PsdMatrix rp(0.5 * (rho_proj + rho_proj.adjoint()), 1e-10);
  double s = 0.0;  // tr rho ln rho
  for (int i = 0; i < rp.dim(); ++i) {
    double lam = rp.eigenvalues()[i];
    if (lam > 0.0) s += lam * std::log(lam);
  }
  double cross = (rp.matrix() * eta.log()).trace().real();
  return s - cross;
}

double alpha_z_renyi(const DensityMatrix& rho, const DensityMatrix& eta, double alpha,
                     double z, bool unchecked) {
  if (alpha <= 0.0 || alpha == 1.0) {
    throw std::invalid_argument("alpha_z_renyi: alpha must be positive and not 1");
  }
  if (z <= 0.0) {
    throw std::invalid_argument("alpha_z_renyi: z must be positive");
  }
  if (!unchecked) {
    const double z_floor = std::max(alpha - 1.0, alpha / 2.0);
    if (alpha > 2.0 || z < z_floor - 1e-12) {
      throw std::domain_error(
          "alpha_z_renyi: (alpha, z) outside the default domain; pass unchecked to force");
    }
  }
  if (alpha > 1.0 && !support_contained(rho, eta, 1e-10)) return kInf;
  Matrix rpow = rho.power(Complex(alpha / (2.0 * z), 0.0));
  Matrix epow = eta.power(Complex((1.0 - alpha) / z, 0.0));
  Matrix m = rpow * epow * rpow;
  PsdMatrix pm(0.5 * (m + m.adjoint()), 1e-10);
  double tv = 0.0;
  for (int i = 0; i < pm.dim(); ++i) {
    double mu = pm.eigenvalues()[i];
    if (mu > 0.0) tv += std::pow(mu, z);
  }
  if (tv <= 0.0) return kInf;
  return std::log(tv) / (alpha - 1.0);
}

double p_fidelity(const PsdMatrix& x, const PsdMatrix& y, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("p_fidelity: p must be >= 1");
  }
  return schatten_norm(x.sqrt() * y.sqrt(), p);
}

double p_fidelity(const DensityMatrix& x, const DensityMatrix& y, double p) {
  return p_fidelity(x.psd(), y.psd(), p);
}

double measured_objective(const Matrix& rho_c, const Matrix& eta_c, const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector& hv = es.eigenvalues();
  const Matrix& w = es.eigenvectors();
  Eigen::VectorXcd eh(hv.size());
  for (int i = 0; i < hv.size(); ++i) eh[i] = std::exp(hv[i]);
  Matrix exp_h = w * eh.asDiagonal() * w.adjoint();
  double lin = (rho_c * h).trace().real();
  double curv = (eta_c * exp_h).trace().real();
  return lin + 1.0 - curv;
}

Matrix measured_gradient(const Matrix& rho_c, const Matrix& eta_c, const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector& hv = es.eigenvalues();
  const Matrix& w = es.eigenvectors();
  const int d = static_cast<int>(hv.size());
  // first divided differences of exp over the eigenvalues of h
  Eigen::MatrixXd kernel(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double a = hv[i], b = hv[j];
      if (std::abs(a - b) < 1e-9) {
        kernel(i, j) = std::exp(0.5 * (a + b));
      } else {
        kernel(i, j) = (std::exp(a) - std::exp(b)) / (a - b);
      }
    }
  }
  Matrix eta_t = w.adjoint() * eta_c * w;
  Matrix scaled = eta_t.cwiseProduct(kernel.cast<Complex>());
  return rho_c - w * scaled * w.adjoint();
}

MeasuredResult measured_relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                                         double grad_tol, int max_iterations) {
  MeasuredResult res;
  if (!support_contained(rho, eta, 1e-10)) {
    res.value = kInf;
    return res;
  }
  // compress everything to the support of eta
  const PsdMatrix& ep = eta.psd();
  const int d = eta.dim();
  const int r = ep.support_rank();
  Matrix basis(d, r);
  Eigen::VectorXd evals(r);
  int col = 0;
  for (int i = 0; i < d; ++i) {
    if (ep.eigenvalues()[i] > 0.0) {
      basis.col(col) = ep.eigenvectors().col(i);
      evals[col] = ep.eigenvalues()[i];
      ++col;
    }
  }
  Matrix eta_c = evals.cast<Complex>().asDiagonal();
  Matrix rho_c = basis.adjoint() * rho.matrix() * basis;
  rho_c = 0.5 * (rho_c + rho_c.adjoint());

  // classical warm start ln rho - ln eta (pseudo-log on the support of rho)
  PsdMatrix rc(rho_c, 1e-10);
  Matrix log_eta = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) log_eta(i, i) = std::log(evals[i]);
  Matrix h = rc.log() - log_eta;

  double val = measured_objective(rho_c, eta_c, h);
  double step = 1.0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Matrix g = measured_gradient(rho_c, eta_c, h);
    double gn = g.norm();
    res.grad_norm = gn;
    res.iterations = iter;
    if (gn <= grad_tol) {
      res.converged = true;
      break;
    }
    double s = std::min(1.0, 2.0 * step);
    bool accepted = false;
    while (s >= 1e-14) {
      Matrix h2 = h + s * g;
      double v2 = measured_objective(rho_c, eta_c, h2);
      if (v2 >= val + 1e-4 * s * gn * gn) {
        h = std::move(h2);
        val = v2;
        step = s;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // stalled at rounding level
  }
  res.value = val;
  res.optimizer_h = h;
  return res;
}

}  // namespace petzlab
