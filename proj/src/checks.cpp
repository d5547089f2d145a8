#include "petzlab/checks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace petzlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAssembledClip = 1e-10;

DensityMatrix channel_output(const QuantumChannel& phi, const DensityMatrix& x) {
  Matrix out = phi.apply(x.matrix());
  return DensityMatrix(0.5 * (out + out.adjoint()), 1e-8, kAssembledClip);
}

double entropy_gap(const DensityMatrix& rho, const DensityMatrix& eta,
                   const QuantumChannel& phi) {
  double d_in = relative_entropy(rho, eta);
  double d_out = relative_entropy(channel_output(phi, rho), channel_output(phi, eta));
  return d_in - d_out;
}

Matrix hermitian_exp(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXcd e(es.eigenvalues().size());
  for (int i = 0; i < e.size(); ++i) e[i] = std::exp(es.eigenvalues()[i]);
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double check_slack(double lhs, double rhs) {
  return 1e-7 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void finish_report(GapReport& rep) {
  rep.margin = rep.rhs - rep.lhs;
  rep.slack = check_slack(rep.lhs, rep.rhs);
  rep.pass = rep.margin >= -rep.slack;
}

GapReport check_alt(const std::vector<PsdMatrix>& xs, const DensityMatrix& rho,
                    const DensityMatrix& eta, double p, double r, double w,
                    const QuadratureOptions& opts) {
  if (xs.empty()) throw std::invalid_argument("check_alt: empty factor list");
  if (!(p >= 1.0) || !(r > 0.0 && r <= 1.0)) {
    throw std::invalid_argument("check_alt: need p >= 1 and r in (0, 1]");
  }
  GapReport rep;
  rep.check_name = "alt";
  const DensityMatrix rho_r = rho.faithful() ? rho : regularize(rho, 1e-6);
  const DensityMatrix eta_r = eta.faithful() ? eta : regularize(eta, 1e-6);
  rep.diagnostics["delta_reg"] = (rho.faithful() && eta.faithful()) ? 0.0 : 1e-6;

  const int d = xs[0].dim();
  Matrix prod_r = Matrix::Identity(d, d);
  for (const auto& x : xs) prod_r = prod_r * x.power(Complex(r, 0.0));
  rep.lhs = std::log(weighted_p_norm(prod_r, rho_r.psd(), eta_r.psd(), p / r, w));

  if (r == 1.0) {
    // beta_r collapses to the point mass at t = 0 and the two sides agree
    rep.rhs = rep.lhs;
    rep.diagnostics["point_mass"] = 1.0;
  } else {
    QuadratureInfo info;
    double integral = integrate_weighted(
        [&](double t) {
          Matrix prod = Matrix::Identity(d, d);
          for (const auto& x : xs) prod = prod * x.power(Complex(1.0, t));
          return std::log(weighted_p_norm(prod, rho_r.psd(), eta_r.psd(), p, w));
        },
        r, opts, &info);
    rep.rhs = r * integral;
    rep.diagnostics["quadrature_evals"] = info.evaluations;
    rep.diagnostics["quadrature_delta"] = info.last_delta;
  }
  finish_report(rep);
  return rep;
}

GapReport check_gt(const std::vector<Matrix>& hs, const DensityMatrix& rho, double p,
                   const QuadratureOptions& opts) {
  if (hs.empty()) throw std::invalid_argument("check_gt: empty Hamiltonian list");
  if (!(p >= 1.0)) throw std::invalid_argument("check_gt: need p >= 1");
  GapReport rep;
  rep.check_name = "gt";
  const DensityMatrix rho_r = rho.faithful() ? rho : regularize(rho, 1e-6);
  rep.diagnostics["delta_reg"] = rho.faithful() ? 0.0 : 1e-6;
  const int d = rho_r.dim();
  const Matrix h0 = rho_r.log();

  Matrix total = h0 / p;
  std::vector<Eigensystem> sys;
  sys.reserve(hs.size());
  for (const auto& h : hs) {
    HermitianMatrix hm(h);
    total += hm.get();
    sys.push_back(eig_hermitian(hm));
  }
  const Matrix target = hermitian_exp(total);
  rep.lhs = std::log(schatten_norm(target, p));

  QuadratureInfo info;
  double integral = integrate_weighted(
      [&](double t) {
        Matrix prod = Matrix::Identity(d, d);
        for (const auto& es : sys) {
          Eigen::VectorXcd e(d);
          for (int i = 0; i < d; ++i) e[i] = std::exp(Complex(1.0, t) * es.values[i]);
          prod = prod * (es.vectors * e.asDiagonal() * es.vectors.adjoint());
        }
        return std::log(weighted_p_norm(prod, rho_r.psd(), rho_r.psd(), p, 1.0));
      },
      0.0, opts, &info);
  rep.rhs = integral;
  rep.diagnostics["quadrature_evals"] = info.evaluations;
  rep.diagnostics["quadrature_delta"] = info.last_delta;

  // Trotter diagnostic: the symmetrized product power approaches the target
  const double trotter_rs[] = {0.25, 0.0625, 0.015625};
  int ti = 0;
  for (double tr : trotter_rs) {
    Matrix inner = rho_r.psd().power(Complex(tr / (2.0 * p), 0.0));
    for (std::size_t k = 0; k + 1 < sys.size(); ++k) {
      const auto& es = sys[k];
      Eigen::VectorXcd e(d);
      for (int i = 0; i < d; ++i) e[i] = std::exp(0.5 * tr * es.values[i]);
      inner = inner * (es.vectors * e.asDiagonal() * es.vectors.adjoint());
    }
    {
      const auto& es = sys.back();
      Eigen::VectorXcd e(d);
      for (int i = 0; i < d; ++i) e[i] = std::exp(tr * es.values[i]);
      inner = inner * (es.vectors * e.asDiagonal() * es.vectors.adjoint());
    }
    for (std::size_t k = sys.size() - 1; k-- > 0;) {
      const auto& es = sys[k];
      Eigen::VectorXcd e(d);
      for (int i = 0; i < d; ++i) e[i] = std::exp(0.5 * tr * es.values[i]);
      inner = inner * (es.vectors * e.asDiagonal() * es.vectors.adjoint());
    }
    inner = inner * rho_r.psd().power(Complex(tr / (2.0 * p), 0.0));
    PsdMatrix alpha_r(0.5 * (inner + inner.adjoint()), kAssembledClip);
    Matrix approx = alpha_r.power(Complex(1.0 / tr, 0.0));
    rep.diagnostics["trotter_" + std::to_string(ti++)] = schatten_norm(approx - target, p);
  }
  finish_report(rep);
  return rep;
}

GapReport check_lieb(const Matrix& h0, double p, const PsdMatrix& x1, const PsdMatrix& x2,
                     double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("check_lieb: lambda must lie in [0, 1]");
  }
  if (x1.support_rank() != x1.dim() || x2.support_rank() != x2.dim()) {
    throw std::invalid_argument("check_lieb: factors must be strictly positive definite");
  }
  GapReport rep;
  rep.check_name = "lieb";
  const Matrix h = 0.5 * (h0 + h0.adjoint());
  auto f = [&](const PsdMatrix& x) {
    return schatten_norm(hermitian_exp(h / p + x.log()), p);
  };
  Matrix mix = lambda * x1.matrix() + (1.0 - lambda) * x2.matrix();
  rep.rhs = f(PsdMatrix(0.5 * (mix + mix.adjoint())));
  rep.lhs = lambda * f(x1) + (1.0 - lambda) * f(x2);
  finish_report(rep);
  return rep;
}

GapReport check_dpi_relative_entropy(const DensityMatrix& rho, const DensityMatrix& eta,
                                     const QuantumChannel& phi) {
  GapReport rep;
  rep.check_name = "dpi_rel_entropy";
  rep.rhs = relative_entropy(rho, eta);
  rep.lhs = relative_entropy(channel_output(phi, rho), channel_output(phi, eta));
  finish_report(rep);
  return rep;
}

GapReport check_dpi_sandwiched(const DensityMatrix& rho, const DensityMatrix& eta,
                               const QuantumChannel& phi, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("check_dpi_sandwiched: need p > 1");
  GapReport rep;
  rep.check_name = "dpi_sandwiched";
  const bool unchecked = p > 2.0;
  rep.rhs = alpha_z_renyi(rho, eta, p, p, unchecked);
  rep.lhs = alpha_z_renyi(channel_output(phi, rho), channel_output(phi, eta), p, p, unchecked);
  finish_report(rep);
  return rep;
}

GapReport check_dpi_p_fidelity(const DensityMatrix& rho, const DensityMatrix& eta,
                               const QuantumChannel& phi, double p) {
  GapReport rep;
  rep.check_name = "dpi_p_fidelity";
  // the contraction argument behind this bound compares the 1/p powers of the
  // densities, f_p(rho^{1/p}, eta^{1/p}); at p = 1 this is the plain fidelity
  DensityMatrix out_rho = channel_output(phi, rho);
  DensityMatrix out_eta = channel_output(phi, eta);
  const double q = 1.0 / p;
  rep.lhs = p_fidelity(PsdMatrix(rho.power(q)), PsdMatrix(eta.power(q)), p);
  rep.rhs = p_fidelity(PsdMatrix(out_rho.power(q)), PsdMatrix(out_eta.power(q)), p);
  finish_report(rep);
  return rep;
}

GapReport check_recovery_p(const DensityMatrix& rho, const DensityMatrix& eta,
                           const QuantumChannel& phi, double p,
                           const QuadratureOptions& opts) {
  if (!(p >= 1.0)) throw std::invalid_argument("check_recovery_p: need p >= 1");
  GapReport rep;
  rep.check_name = "recovery_p";
  RecoveryContext ctx(eta, phi);
  Matrix rh = phi.apply(rho.matrix());
  PsdMatrix rho_hat(0.5 * (rh + rh.adjoint()), kAssembledClip);

  rep.rhs = entropy_gap(rho, eta, phi);
  QuadratureInfo info;
  double integral = integrate_weighted(
      [&](double t) {
        return log_fidelity_of_recovery(ctx, rho.psd(), rho_hat, Complex(1.0, t) / p);
      },
      0.0, opts, &info);
  rep.lhs = 2.0 * p * integral;
  rep.diagnostics["fr_integral"] = integral;
  rep.diagnostics["quadrature_evals"] = info.evaluations;
  rep.diagnostics["p"] = p;
  finish_report(rep);
  return rep;
}

GapReport check_universal_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                   const QuantumChannel& phi, double p,
                                   const QuadratureOptions& opts) {
  GapReport rep;
  rep.check_name = "universal_recovery";
  RecoveryContext ctx(eta, phi);
  Matrix recovered = ctx.nonlinear_p(p, phi.apply(rho.matrix()), opts);
  PsdMatrix rec(0.5 * (recovered + recovered.adjoint()), kAssembledClip);
  // the fidelity compares the 1/p powers of the densities, as in the rotated
  // integrand; at perfect recovery both arguments coincide and the log is 0
  const double q = 1.0 / p;
  double f = p_fidelity(PsdMatrix(rho.power(q)), PsdMatrix(rec.power(q)), p);
  rep.lhs = (f < 1e-300) ? kInf : -std::log(f);
  rep.rhs = entropy_gap(rho, eta, phi) / (2.0 * p);
  rep.diagnostics["fidelity"] = f;
  rep.diagnostics["recovered_trace"] = rec.trace();
  rep.diagnostics["p"] = p;
  finish_report(rep);
  return rep;
}

GapReport check_measured_recovery(const DensityMatrix& rho, const DensityMatrix& eta,
                                  const QuantumChannel& phi, const QuadratureOptions& opts,
                                  double optimizer_tol, bool recover_reference) {
  GapReport rep;
  rep.check_name = "measured_recovery";
  RecoveryContext ctx(eta, phi);
  const DensityMatrix& source = recover_reference ? eta : rho;
  Matrix recovered = ctx.universal(phi.apply(source.matrix()), opts);
  Matrix sym = 0.5 * (recovered + recovered.adjoint());
  sym /= sym.trace().real();  // quadrature truncation nudges the trace
  DensityMatrix rec(sym, 1e-6, kAssembledClip);
  MeasuredResult mr = measured_relative_entropy(rho, rec, optimizer_tol);
  rep.lhs = mr.value;
  rep.rhs = entropy_gap(rho, eta, phi);
  rep.diagnostics["optimizer_iterations"] = mr.iterations;
  rep.diagnostics["optimizer_grad_norm"] = mr.grad_norm;
  rep.diagnostics["optimizer_converged"] = mr.converged ? 1.0 : 0.0;
  finish_report(rep);
  return rep;
}

GapReport check_quadratic(const DensityMatrix& rho, const DensityMatrix& eta,
                          const QuantumChannel& phi, const QuadratureOptions&) {
  GapReport rep;
  rep.check_name = "quadratic";
  RecoveryContext ctx(eta, phi);
  Matrix rh = phi.apply(rho.matrix());
  PsdMatrix rho_hat(0.5 * (rh + rh.adjoint()), kAssembledClip);
  const double gap = entropy_gap(rho, eta, phi);

  Matrix back = ctx.vector_half(rho_hat.power(Complex(0.5, 0.0)));
  double dist2 = schatten_norm(rho.psd().sqrt() - back, 2.0);
  double m1 = gap - dist2 * dist2;
  Matrix squared = back * back.adjoint();
  double dist1 = schatten_norm(rho.matrix() - squared, 1.0);
  double m2 = 4.0 * gap - dist1 * dist1;

  rep.lhs = dist2 * dist2;
  rep.rhs = gap;
  rep.diagnostics["margin_l2"] = m1;
  rep.diagnostics["margin_l1"] = m2;
  rep.diagnostics["l1_dist"] = dist1;
  rep.slack = check_slack(std::max(dist2 * dist2, dist1 * dist1), std::max(gap, 4.0 * gap));
  rep.margin = std::min(m1, m2);
  rep.pass = rep.margin >= -rep.slack;
  return rep;
}

GapReport check_petz_equality(const DensityMatrix& rho, const DensityMatrix& eta,
                              const QuantumChannel& phi, double equality_tol,
                              const QuadratureOptions& opts) {
  GapReport rep;
  rep.check_name = "petz_equality";
  RecoveryContext ctx(eta, phi);
  Matrix rh = phi.apply(rho.matrix());
  const double gap = entropy_gap(rho, eta, phi);
  const double petz_dist = schatten_norm(ctx.petz(rh) - rho.matrix(), 1.0);

  rep.diagnostics["gap"] = gap;
  rep.diagnostics["petz_dist"] = petz_dist;

  const double dist_budget = 10.0 * std::sqrt(equality_tol);
  double forward = 1.0;  // vacuous unless the gap closes
  if (gap <= equality_tol) {
    forward = dist_budget - petz_dist;
    for (double pp : {1.0, 2.0}) {
      Matrix nl = ctx.nonlinear_p(pp, rh, opts);
      double nd = schatten_norm(nl - rho.matrix(), 1.0);
      rep.diagnostics["nonlinear_dist_p" + std::to_string(static_cast<int>(pp))] = nd;
      forward = std::min(forward, 1e-6 - nd);
    }
  }
  double converse = 1.0;  // vacuous unless recovery is exact
  if (petz_dist <= equality_tol) {
    converse = 1e-7 - gap;
  }
  rep.lhs = petz_dist;
  rep.rhs = gap;
  rep.margin = std::min(forward, converse);
  rep.slack = check_slack(rep.lhs, rep.rhs);
  rep.pass = rep.margin >= -rep.slack;
  return rep;
}

GapReport check_hirschman_scalar(const std::vector<ExpTerm>& terms, double theta,
                                 const QuadratureOptions& opts) {
  if (terms.empty()) throw std::invalid_argument("check_hirschman_scalar: no terms");
  if (theta <= 0.0 || theta >= 1.0) {
    throw std::invalid_argument("check_hirschman_scalar: theta must lie in (0, 1)");
  }
  auto g_abs = [&](Complex z) {
    Complex acc = 0.0;
    for (const auto& term : terms) acc += term.c * std::exp(term.a * z);
    return std::abs(acc);
  };
  GapReport rep;
  rep.check_name = "hirschman";
  const double gt = g_abs(Complex(theta, 0.0));
  if (gt < 1e-12) {
    throw std::invalid_argument("check_hirschman_scalar: |g(theta)| below 1e-12");
  }
  rep.lhs = std::log(gt);
  QuadratureInfo i0, i1;
  double left = integrate_weighted(
      [&](double t) { return std::log(g_abs(Complex(0.0, t))); }, 1.0 - theta, opts, &i0);
  double right = integrate_weighted(
      [&](double t) { return std::log(g_abs(Complex(1.0, t))); }, theta, opts, &i1);
  rep.rhs = (1.0 - theta) * left + theta * right;
  rep.diagnostics["quadrature_evals"] = i0.evaluations + i1.evaluations;
  finish_report(rep);
  return rep;
}

GapReport check_entropy_derivative(const DensityMatrix& rho, const DensityMatrix& eta,
                                   const QuantumChannel& phi) {
  GapReport rep;
  rep.check_name = "entropy_derivative";
  RecoveryContext ctx(eta, phi);
  Matrix rh = phi.apply(rho.matrix());
  PsdMatrix rho_hat(0.5 * (rh + rh.adjoint()), kAssembledClip);
  const double gap = entropy_gap(rho, eta, phi);

  // derivative at theta -> 0 of the interpolation-norm family at fixed p;
  // the norm of rho^{1/2p} h(theta) rho^{1/2p} starts at tr(rho) = 1 and its
  // log slope is the negated entropy gap
  const double p = 2.0;
  auto estimate = [&](double theta) {
    Matrix core = ctx.rotated(Complex(theta, 0.0), rho_hat.power(Complex(theta, 0.0)));
    Matrix h = rho.psd().power(Complex(-theta / 2.0, 0.0)) * core *
               rho.psd().power(Complex(-theta / 2.0, 0.0));
    Matrix sandwich = rho.psd().power(Complex(1.0 / (2.0 * p), 0.0)) * h *
                      rho.psd().power(Complex(1.0 / (2.0 * p), 0.0));
    return -std::log(schatten_norm(sandwich, p)) / theta;
  };
  const double t1 = 1e-2, t2 = 1e-3, t3 = 1e-4;
  const double e1 = estimate(t1), e2 = estimate(t2), e3 = estimate(t3);
  // two-term Richardson: fit e(theta) = a0 + a1 theta + a2 theta^2 exactly
  const double a0 =
      e1 * (t2 * t3) / ((t1 - t2) * (t1 - t3)) + e2 * (t1 * t3) / ((t2 - t1) * (t2 - t3)) +
      e3 * (t1 * t2) / ((t3 - t1) * (t3 - t2));
  rep.diagnostics["estimate_1e2"] = e1;
  rep.diagnostics["estimate_1e3"] = e2;
  rep.diagnostics["estimate_1e4"] = e3;
  rep.diagnostics["extrapolant"] = a0;
  rep.diagnostics["gap"] = gap;
  rep.lhs = std::abs(a0 - gap);
  rep.rhs = 1e-3 * std::max(1.0, gap);
  finish_report(rep);
  return rep;
}

}  // namespace petzlab
