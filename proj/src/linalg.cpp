#include "petzlab/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace petzlab {

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel_tol * scale;
}

HermitianMatrix::HermitianMatrix(Matrix m, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianMatrix: input is not square");
  }
  if (!is_hermitian(m, rel_tol)) {
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
  }
  m_ = 0.5 * (m + m.adjoint());
}

Eigensystem eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.get());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdMatrix::PsdMatrix(const Matrix& m, double clip_tol) {
  HermitianMatrix h(m);  // validates shape and Hermiticity
  Eigensystem es = eig_hermitian(h);
  evals_ = es.values;
  evecs_ = es.vectors;
  const int d = static_cast<int>(evals_.size());
  double lmax = evals_.maxCoeff();
  if (lmax < 0.0) {
    // allow the all-zero matrix with rounding dust
    if (lmax < -clip_tol * std::abs(evals_.minCoeff())) {
      throw std::invalid_argument("PsdMatrix: matrix is negative definite");
    }
    lmax = 0.0;
  }
  cutoff_ = clip_tol * std::max(lmax, std::numeric_limits<double>::min());
  for (int i = 0; i < d; ++i) {
    if (evals_[i] < -cutoff_) {
      throw std::invalid_argument("PsdMatrix: eigenvalue below -cutoff, input not PSD");
    }
    if (evals_[i] < cutoff_) evals_[i] = 0.0;
  }
  support_rank_ = 0;
  for (int i = 0; i < d; ++i) {
    if (evals_[i] > 0.0) ++support_rank_;
  }
  mat_ = evecs_ * evals_.cast<Complex>().asDiagonal() * evecs_.adjoint();
}

Matrix PsdMatrix::power(Complex z) const {
  const int d = dim();
  Eigen::VectorXcd pw(d);
  for (int i = 0; i < d; ++i) {
    if (evals_[i] > 0.0) {
      pw[i] = std::exp(z * std::log(evals_[i]));
    } else {
      // kernel stays kernel for every z, so z = 0 lands on the projector
      pw[i] = Complex(0.0, 0.0);
    }
  }
  return evecs_ * pw.asDiagonal() * evecs_.adjoint();
}

Matrix PsdMatrix::log() const {
  const int d = dim();
  Eigen::VectorXcd lg = Eigen::VectorXcd::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (evals_[i] > 0.0) lg[i] = std::log(evals_[i]);
  }
  return evecs_ * lg.asDiagonal() * evecs_.adjoint();
}

Matrix PsdMatrix::support_projector() const {
  const int d = dim();
  Eigen::VectorXcd pr = Eigen::VectorXcd::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (evals_[i] > 0.0) pr[i] = 1.0;
  }
  return evecs_ * pr.asDiagonal() * evecs_.adjoint();
}

Eigen::VectorXd singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double schatten_norm(const Matrix& a, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("schatten_norm: p must be >= 1");
  }
  Eigen::VectorXd sv = singular_values(a);
  double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  if (std::isinf(p) || smax == 0.0) return smax;
  if (p == 1.0) return sv.sum();
  if (p == 2.0) return std::sqrt(sv.squaredNorm());
  // factor out the largest singular value so large p cannot underflow
  double acc = 0.0;
  for (int i = 0; i < sv.size(); ++i) {
    acc += std::pow(sv[i] / smax, p);
  }
  return smax * std::pow(acc, 1.0 / p);
}

Matrix matrix_power(const PsdMatrix& a, Complex z) { return a.power(z); }

Matrix support_projection(const PsdMatrix& a) { return a.support_projector(); }

}  // namespace petzlab
