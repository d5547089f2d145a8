#pragma once

#include <vector>

#include "petzlab/linalg.hpp"
#include "petzlab/rng.hpp"

namespace petzlab {

// Density matrix: PSD with unit trace. The PSD eigensystem is cached so
// repeated fractional powers cost two small matrix products each.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m, double trace_tol = 1e-10,
                         double clip_tol = kSupportCutoff);

  int dim() const { return psd_.dim(); }
  const Matrix& matrix() const { return psd_.matrix(); }
  const PsdMatrix& psd() const { return psd_; }
  Matrix power(Complex z) const { return psd_.power(z); }
  Matrix log() const { return psd_.log(); }
  Matrix support_projector() const { return psd_.support_projector(); }
  int support_rank() const { return psd_.support_rank(); }
  bool faithful() const { return psd_.support_rank() == psd_.dim(); }

 private:
  PsdMatrix psd_;
};

// (1 - delta) rho + delta I/d, the standard full-support regularization
DensityMatrix regularize(const DensityMatrix& rho, double delta);

struct ChannelValidation {
  double tp_defect = 0.0;     // spectral norm of sum K^dag K - I
  double choi_min_eig = 0.0;  // most negative Choi eigenvalue
  bool ok = false;
};

struct StinespringIsometry {
  Matrix v;  // (d_out * d_env) x d_in, system factor first: out (x) env
  int d_in = 0;
  int d_out = 0;
  int d_env = 0;
};

// CPTP map in Kraus form. All Kraus operators are d_out x d_in.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus);

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& x) const;          // sum K x K^dag
  Matrix adjoint_apply(const Matrix& y) const;  // sum K^dag y K

  // Choi matrix with the same system-first ordering used everywhere else:
  // row index i * d_out + o for input i, output o.
  Matrix choi() const;

  ChannelValidation validate(double tp_tol = 1e-10, double choi_tol = 1e-10) const;

  StinespringIsometry stinespring() const;

 private:
  std::vector<Matrix> kraus_;
  int d_in_ = 0;
  int d_out_ = 0;
};

// throws std::invalid_argument with the defect sizes when validation fails
bool validate_channel(const QuantumChannel& ch, double tol = 1e-10);

QuantumChannel kraus_from_choi(const Matrix& choi, int d_in, int d_out,
                               double clip_tol = 1e-12);

// trace over the environment (second tensor factor) of a (d * d_env) square matrix
Matrix trace_out_env(const Matrix& m, int d, int d_env);

// ---- channel constructors ----

QuantumChannel make_identity_channel(int d);
// (1 - lambda) rho + lambda tr(rho) I/d via the Weyl shift/clock Kraus set
QuantumChannel make_depolarizing_channel(int d, double lambda);
// composite index a * d_b + b; keep = 1 keeps the first factor, 2 the second
QuantumChannel make_partial_trace_channel(int d_a, int d_b, int keep);
QuantumChannel make_pinching_channel(const std::vector<Matrix>& projectors);
// pinching onto coordinate blocks of the given sizes, rotated by basis (optional)
QuantumChannel make_block_pinching_channel(const std::vector<int>& block_sizes,
                                           const Matrix* basis = nullptr);
// trace out each block to a scalar: X -> sum_b tr(P_b X)/m_b P_b
QuantumChannel make_conditional_expectation_channel(const std::vector<int>& block_sizes,
                                                    const Matrix* basis = nullptr);
QuantumChannel make_unitary_channel(const Matrix& u);
QuantumChannel make_random_isometry_channel(int d_in, int d_out, int d_env, SplitRng& rng);

// ---- random objects ----

Matrix random_ginibre(int rows, int cols, SplitRng& rng);
Matrix random_unitary(int d, SplitRng& rng);
Matrix random_hermitian(int d, SplitRng& rng, double scale = 1.0);
// Hermitian PD with spectrum inside [lo, hi]
Matrix random_posdef(int d, SplitRng& rng, double lo, double hi);

DensityMatrix random_pure_state(int d, SplitRng& rng);
DensityMatrix random_mixed_state(int d, SplitRng& rng);
// eigenvalues within spread of 1/d, Haar random basis
DensityMatrix random_near_degenerate_state(int d, SplitRng& rng, double spread = 1e-3);
// rho with delta * eta <= rho <= eta / delta, guaranteed by construction
DensityMatrix random_comparable_state(const DensityMatrix& eta, double delta, SplitRng& rng);

}  // namespace petzlab
