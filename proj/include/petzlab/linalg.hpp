#pragma once

#include <Eigen/Dense>
#include <complex>

namespace petzlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// relative threshold below which eigenvalues count as numerically zero
inline constexpr double kSupportCutoff = 1e-12;

// relative tolerance for the Hermiticity test
inline constexpr double kHermitianTol = 1e-12;

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

bool is_hermitian(const Matrix& a, double rel_tol = kHermitianTol);

// Validated Hermitian matrix. Construction throws std::invalid_argument if
// the input deviates from its adjoint by more than rel_tol times the largest
// entry magnitude; the stored copy is symmetrized so downstream eigensolves
// see an exactly Hermitian input.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m, double rel_tol = kHermitianTol);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& get() const { return m_; }

 private:
  Matrix m_;
};

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns match values
};

Eigensystem eig_hermitian(const HermitianMatrix& a);

// Positive semidefinite matrix with cached eigensystem. Eigenvalues in
// [-cutoff, 0) are clipped to zero where cutoff = clip_tol * max eigenvalue;
// anything more negative is rejected. Powers with Re(z) < 0 act as zero on
// the kernel (pseudo-inverse convention), and z = 0 yields the support
// projector.
class PsdMatrix {
 public:
  explicit PsdMatrix(const Matrix& m, double clip_tol = kSupportCutoff);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  const RealVector& eigenvalues() const { return evals_; }
  const Matrix& eigenvectors() const { return evecs_; }
  double trace() const { return evals_.sum(); }
  int support_rank() const { return support_rank_; }
  double support_cutoff() const { return cutoff_; }

  Matrix power(Complex z) const;
  Matrix sqrt() const { return power(Complex(0.5, 0.0)); }
  // natural log on the support, zero elsewhere
  Matrix log() const;
  Matrix support_projector() const;

 private:
  Matrix mat_;
  RealVector evals_;
  Matrix evecs_;
  double cutoff_ = 0.0;
  int support_rank_ = 0;
};

// Schatten p-norm of a (possibly rectangular) matrix; p in [1, inf].
// Use std::numeric_limits<double>::infinity() for the operator norm.
double schatten_norm(const Matrix& a, double p);

Eigen::VectorXd singular_values(const Matrix& a);

Matrix matrix_power(const PsdMatrix& a, Complex z);
Matrix support_projection(const PsdMatrix& a);

}  // namespace petzlab
