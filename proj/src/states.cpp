#include "petzlab/states.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace petzlab {

DensityMatrix::DensityMatrix(const Matrix& m, double trace_tol, double clip_tol)
    : psd_(m, clip_tol) {
  double tr = psd_.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " deviates from 1 beyond tolerance";
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix regularize(const DensityMatrix& rho, double delta) {
  if (delta < 0.0 || delta > 1.0) {
    throw std::invalid_argument("regularize: delta must lie in [0, 1]");
  }
  const int d = rho.dim();
  Matrix m = (1.0 - delta) * rho.matrix() +
             (delta / d) * Matrix::Identity(d, d);
  return DensityMatrix(m);
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) {
    throw std::invalid_argument("QuantumChannel: empty Kraus list");
  }
  d_out_ = static_cast<int>(kraus_[0].rows());
  d_in_ = static_cast<int>(kraus_[0].cols());
  for (const auto& k : kraus_) {
    if (k.rows() != d_out_ || k.cols() != d_in_) {
      throw std::invalid_argument("QuantumChannel: inconsistent Kraus shapes");
    }
  }
}

Matrix QuantumChannel::apply(const Matrix& x) const {
  if (x.rows() != d_in_ || x.cols() != d_in_) {
    throw std::invalid_argument("QuantumChannel::apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(d_out_, d_out_);
  for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

Matrix QuantumChannel::adjoint_apply(const Matrix& y) const {
  if (y.rows() != d_out_ || y.cols() != d_out_) {
    throw std::invalid_argument("QuantumChannel::adjoint_apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(d_in_, d_in_);
  for (const auto& k : kraus_) out.noalias() += k.adjoint() * y * k;
  return out;
}

Matrix QuantumChannel::choi() const {
  const int n = d_in_ * d_out_;
  Matrix c = Matrix::Zero(n, n);
  for (const auto& k : kraus_) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < d_in_; ++i) {
      for (int o = 0; o < d_out_; ++o) v[i * d_out_ + o] = k(o, i);
    }
    c.noalias() += v * v.adjoint();
  }
  return c;
}

ChannelValidation QuantumChannel::validate(double tp_tol, double choi_tol) const {
  ChannelValidation res;
  Matrix acc = Matrix::Zero(d_in_, d_in_);
  for (const auto& k : kraus_) acc.noalias() += k.adjoint() * k;
  acc -= Matrix::Identity(d_in_, d_in_);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (acc + acc.adjoint()));
  res.tp_defect = es.eigenvalues().cwiseAbs().maxCoeff();
  Matrix c = choi();
  Eigen::SelfAdjointEigenSolver<Matrix> esc(0.5 * (c + c.adjoint()));
  res.choi_min_eig = esc.eigenvalues().minCoeff();
  res.ok = res.tp_defect <= tp_tol && res.choi_min_eig >= -choi_tol;
  return res;
}

StinespringIsometry QuantumChannel::stinespring() const {
  StinespringIsometry st;
  st.d_in = d_in_;
  st.d_out = d_out_;
  st.d_env = static_cast<int>(kraus_.size());
  st.v = Matrix::Zero(d_out_ * st.d_env, d_in_);
  for (int e = 0; e < st.d_env; ++e) {
    for (int o = 0; o < d_out_; ++o) {
      st.v.row(o * st.d_env + e) = kraus_[e].row(o);
    }
  }
  return st;
}

bool validate_channel(const QuantumChannel& ch, double tol) {
  ChannelValidation v = ch.validate(tol, tol);
  if (!v.ok) {
    std::ostringstream os;
    os << "validate_channel: tp_defect=" << v.tp_defect
       << " choi_min_eig=" << v.choi_min_eig << " tol=" << tol;
    throw std::invalid_argument(os.str());
  }
  return true;
}

QuantumChannel kraus_from_choi(const Matrix& choi, int d_in, int d_out, double clip_tol) {
  if (choi.rows() != d_in * d_out || choi.cols() != d_in * d_out) {
    throw std::invalid_argument("kraus_from_choi: dimension mismatch");
  }
  PsdMatrix c(choi, clip_tol);
  std::vector<Matrix> kraus;
  for (int m = 0; m < c.dim(); ++m) {
    double lam = c.eigenvalues()[m];
    if (lam <= 0.0) continue;
    Matrix k(d_out, d_in);
    const auto col = c.eigenvectors().col(m);
    for (int i = 0; i < d_in; ++i) {
      for (int o = 0; o < d_out; ++o) k(o, i) = std::sqrt(lam) * col[i * d_out + o];
    }
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) {
    throw std::invalid_argument("kraus_from_choi: zero channel");
  }
  return QuantumChannel(std::move(kraus));
}

Matrix trace_out_env(const Matrix& m, int d, int d_env) {
  if (m.rows() != d * d_env || m.cols() != d * d_env) {
    throw std::invalid_argument("trace_out_env: dimension mismatch");
  }
  Matrix out = Matrix::Zero(d, d);
  for (int o = 0; o < d; ++o) {
    for (int op = 0; op < d; ++op) {
      Complex acc = 0.0;
      for (int e = 0; e < d_env; ++e) acc += m(o * d_env + e, op * d_env + e);
      out(o, op) = acc;
    }
  }
  return out;
}

QuantumChannel make_identity_channel(int d) {
  return QuantumChannel({Matrix::Identity(d, d)});
}

QuantumChannel make_depolarizing_channel(int d, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("make_depolarizing_channel: lambda must lie in [0, 1]");
  }
  // Weyl shift/clock operators X^a Z^b give the standard unitary 1-design
  Matrix shift = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) shift((i + 1) % d, i) = 1.0;
  Matrix clock = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    clock(i, i) = std::exp(Complex(0.0, 2.0 * M_PI * i / d));
  }
  std::vector<Matrix> kraus;
  const double dd = static_cast<double>(d) * d;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix w = xa;
    for (int b = 0; b < d; ++b) {
      double coeff = (a == 0 && b == 0) ? 1.0 - lambda + lambda / dd : lambda / dd;
      if (coeff > 0.0) kraus.push_back(std::sqrt(coeff) * w);
      w = w * clock;
    }
    xa = shift * xa;
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel make_partial_trace_channel(int d_a, int d_b, int keep) {
  if (keep != 1 && keep != 2) {
    throw std::invalid_argument("make_partial_trace_channel: keep must be 1 or 2");
  }
  std::vector<Matrix> kraus;
  if (keep == 1) {
    for (int m = 0; m < d_b; ++m) {
      Matrix k = Matrix::Zero(d_a, d_a * d_b);
      for (int a = 0; a < d_a; ++a) k(a, a * d_b + m) = 1.0;
      kraus.push_back(std::move(k));
    }
  } else {
    for (int m = 0; m < d_a; ++m) {
      Matrix k = Matrix::Zero(d_b, d_a * d_b);
      for (int b = 0; b < d_b; ++b) k(b, m * d_b + b) = 1.0;
      kraus.push_back(std::move(k));
    }
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel make_pinching_channel(const std::vector<Matrix>& projectors) {
  if (projectors.empty()) {
    throw std::invalid_argument("make_pinching_channel: empty projector list");
  }
  const int d = static_cast<int>(projectors[0].rows());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& p : projectors) {
    if (p.rows() != d || p.cols() != d) {
      throw std::invalid_argument("make_pinching_channel: inconsistent shapes");
    }
    if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10 || !is_hermitian(p, 1e-10)) {
      throw std::invalid_argument("make_pinching_channel: not an orthogonal projector");
    }
    sum += p;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("make_pinching_channel: projectors do not resolve identity");
  }
  return QuantumChannel(projectors);
}

namespace {

std::vector<Matrix> block_projectors(const std::vector<int>& block_sizes, const Matrix* basis) {
  if (block_sizes.empty()) {
    throw std::invalid_argument("block partition is empty");
  }
  int d = 0;
  for (int b : block_sizes) {
    if (b <= 0) throw std::invalid_argument("block sizes must be positive");
    d += b;
  }
  std::vector<Matrix> projectors;
  int off = 0;
  for (int b : block_sizes) {
    Matrix p = Matrix::Zero(d, d);
    p.block(off, off, b, b) = Matrix::Identity(b, b);
    if (basis) p = (*basis) * p * basis->adjoint();
    projectors.push_back(std::move(p));
    off += b;
  }
  return projectors;
}

}  // namespace

QuantumChannel make_block_pinching_channel(const std::vector<int>& block_sizes,
                                           const Matrix* basis) {
  return make_pinching_channel(block_projectors(block_sizes, basis));
}

QuantumChannel make_conditional_expectation_channel(const std::vector<int>& block_sizes,
                                                    const Matrix* basis) {
  int d = 0;
  for (int b : block_sizes) d += b;
  std::vector<Matrix> kraus;
  int off = 0;
  for (int b : block_sizes) {
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(b));
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < b; ++j) {
        Matrix k = Matrix::Zero(d, d);
        k(off + i, off + j) = inv_sqrt;
        if (basis) k = (*basis) * k * basis->adjoint();
        kraus.push_back(std::move(k));
      }
    }
    off += b;
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel make_unitary_channel(const Matrix& u) {
  if ((u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("make_unitary_channel: input is not unitary");
  }
  return QuantumChannel({u});
}

QuantumChannel make_random_isometry_channel(int d_in, int d_out, int d_env, SplitRng& rng) {
  if (d_out * d_env < d_in) {
    throw std::invalid_argument("make_random_isometry_channel: d_out * d_env < d_in");
  }
  Matrix g = random_ginibre(d_out * d_env, d_in, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d_out * d_env, d_in);
  // fix column phases so the factorization is unique
  Matrix r = qr.matrixQR().topRows(d_in).triangularView<Eigen::Upper>();
  for (int j = 0; j < d_in; ++j) {
    Complex rij = r(j, j);
    if (std::abs(rij) > 0.0) q.col(j) *= rij / std::abs(rij);
  }
  std::vector<Matrix> kraus;
  kraus.reserve(d_env);
  for (int e = 0; e < d_env; ++e) {
    Matrix k(d_out, d_in);
    for (int o = 0; o < d_out; ++o) k.row(o) = q.row(o * d_env + e);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(std::move(kraus));
}

Matrix random_ginibre(int rows, int cols, SplitRng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  }
  return g;
}

Matrix random_unitary(int d, SplitRng& rng) {
  Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

Matrix random_hermitian(int d, SplitRng& rng, double scale) {
  Matrix g = random_ginibre(d, d, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  double top = h.cwiseAbs().maxCoeff();
  if (top > 0.0) h *= scale / top;
  return h;
}

Matrix random_posdef(int d, SplitRng& rng, double lo, double hi) {
  if (!(0.0 < lo && lo <= hi)) {
    throw std::invalid_argument("random_posdef: need 0 < lo <= hi");
  }
  Matrix u = random_unitary(d, rng);
  Eigen::VectorXcd ev(d);
  for (int i = 0; i < d; ++i) ev[i] = rng.uniform(lo, hi);
  return u * ev.asDiagonal() * u.adjoint();
}

DensityMatrix random_pure_state(int d, SplitRng& rng) {
  Eigen::VectorXcd psi(d);
  for (int i = 0; i < d; ++i) psi[i] = rng.cnormal();
  psi.normalize();
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix random_mixed_state(int d, SplitRng& rng) {
  Matrix g = random_ginibre(d, d, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(w);
}

DensityMatrix random_near_degenerate_state(int d, SplitRng& rng, double spread) {
  Matrix u = random_unitary(d, rng);
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam[i] = 1.0 + spread * rng.uniform(-1.0, 1.0);
  lam /= lam.sum();
  return DensityMatrix(u * lam.cast<Complex>().asDiagonal() * u.adjoint());
}

DensityMatrix random_comparable_state(const DensityMatrix& eta, double delta, SplitRng& rng) {
  if (delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("random_comparable_state: delta must lie in (0, 1)");
  }
  const int d = eta.dim();
  // rho = eta^{1/2} A eta^{1/2} / tr with spec(A) in [1-c, 1+c]; then
  // (1-c)/(1+c) eta <= rho <= (1+c)/(1-c) eta, and c is sized so both
  // bounds clear delta with a little room.
  const double c = 0.9 * (1.0 - delta) / (1.0 + delta);
  Matrix b = random_hermitian(d, rng, 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  double bnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (bnorm > 0.0) b *= c / bnorm;
  Matrix a = Matrix::Identity(d, d) + b;
  Matrix half = eta.psd().sqrt();
  Matrix m = half * a * half;
  m /= m.trace().real();
  return DensityMatrix(m);
}

}  // namespace petzlab
