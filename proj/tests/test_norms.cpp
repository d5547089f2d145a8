// Tests for weighted p-norms, entropies, and p-fidelities.
//
// Oracles used here are independent of the implementation under test:
// classical (diagonal) formulas evaluated with scalar std functions, an
// Eigen matrix inverse for the alpha=2 divergence, and a dense Bloch-sphere
// grid search for the measured relative entropy on qubits.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "petzlab/norms.hpp"
#include "petzlab/rng.hpp"
#include "petzlab/states.hpp"

using namespace petzlab;

namespace {

// tr[rho log rho] - tr[rho log eta] for the fixed classical anchor pair
// diag(0.75, 0.25) vs diag(0.5, 0.5): 0.75 ln 1.5 + 0.25 ln 0.5.
constexpr double kAnchorKL = 0.13081203594113695;

DensityMatrix diag_state(std::initializer_list<double> probs) {
  const int d = static_cast<int>(probs.size());
  Matrix m = Matrix::Zero(d, d);
  int i = 0;
  for (double p : probs) {
    m(i, i) = p;
    ++i;
  }
  return DensityMatrix(m);
}

DensityMatrix anchor_rho() { return diag_state({0.75, 0.25}); }
DensityMatrix anchor_eta() { return diag_state({0.5, 0.5}); }

// Classical KL divergence of two-outcome distributions.
double kl2(double p, double q) {
  auto term = [](double a, double b) { return a <= 0.0 ? 0.0 : a * std::log(a / b); };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

}  // namespace

TEST_CASE("relative entropy matches the classical anchor and basic laws") {
  const DensityMatrix rho = anchor_rho();
  const DensityMatrix eta = anchor_eta();
  CHECK(relative_entropy(rho, eta) == doctest::Approx(kAnchorKL).epsilon(1e-12));

  // the divergence vanishes exactly on the diagonal of the state space
  SplitRng rng(41, 0);
  for (int d = 2; d <= 4; ++d) {
    DensityMatrix s = random_mixed_state(d, rng);
    CHECK(std::abs(relative_entropy(s, s)) < 1e-10);
  }

  // nonnegativity on random faithful pairs
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    DensityMatrix a = random_mixed_state(d, rng);
    DensityMatrix b = random_mixed_state(d, rng);
    CHECK(relative_entropy(a, b) >= -1e-10);
  }

  // support violation: a state with mass outside supp(eta) diverges
  DensityMatrix pure0 = diag_state({1.0, 0.0});
  CHECK(std::isinf(relative_entropy(anchor_eta(), pure0)));
  CHECK(relative_entropy(pure0, anchor_eta()) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("weighted p-norm reproduces scalar formulas on diagonal data") {
  // rho = diag(r), eta = diag(e), x = diag(v) all commute, so the norm is
  // the classical weighted l_p norm (sum_i |r_i^{(1-w)/p} v_i e_i^{w/p}|^p)^{1/p}.
  SplitRng rng(42, 0);
  const int d = 3;
  Eigen::VectorXd r(d), e(d), v(d);
  for (int i = 0; i < d; ++i) {
    r[i] = rng.uniform(0.2, 1.0);
    e[i] = rng.uniform(0.2, 1.0);
    v[i] = rng.uniform(-1.0, 1.0);
  }
  r /= r.sum();
  e /= e.sum();
  Matrix x = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) x(i, i) = v[i];
  PsdMatrix rp(r.cast<Complex>().asDiagonal());
  PsdMatrix ep(e.cast<Complex>().asDiagonal());

  for (double p : {1.0, 2.0, 3.0, 7.5}) {
    for (double w : {0.0, 0.25, 0.5, 1.0}) {
      double expect = 0.0;
      for (int i = 0; i < d; ++i) {
        expect += std::pow(std::pow(r[i], (1.0 - w) / p) * std::abs(v[i]) *
                               std::pow(e[i], w / p),
                           p);
      }
      expect = std::pow(expect, 1.0 / p);
      CHECK(weighted_p_norm(x, rp, ep, p, w) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  // hand-checked value: rho = eta = I/2, x = diag(1, 0), p = 1 gives 1/2
  PsdMatrix half(Matrix(0.5 * Matrix::Identity(2, 2)));
  Matrix e00 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  CHECK(weighted_p_norm(e00, half, half, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("weighted p-norm invariants on non-commuting data") {
  SplitRng rng(43, 0);
  for (int d = 2; d <= 4; ++d) {
    PsdMatrix rho(random_mixed_state(d, rng).matrix());
    PsdMatrix eta(random_mixed_state(d, rng).matrix());
    Matrix x = random_ginibre(d, d, rng);

    // the identity has unit norm against any single trace-one weight
    for (double p : {1.0, 2.0, 4.0}) {
      for (double w : {0.0, 0.5, 1.0}) {
        CHECK(weighted_p_norm(Matrix::Identity(d, d), rho, rho, p, w) ==
              doctest::Approx(1.0).epsilon(1e-10));
      }
    }

    // taking adjoints swaps the two weights and reflects w -> 1 - w
    for (double p : {1.0, 2.0, 3.0}) {
      for (double w : {0.0, 0.3, 1.0}) {
        CHECK(weighted_p_norm(x, rho, eta, p, w) ==
              doctest::Approx(weighted_p_norm(x.adjoint(), eta, rho, p, 1.0 - w))
                  .epsilon(1e-10));
      }
    }

    // p = infinity with faithful weights is the plain operator norm
    const double pinf = std::numeric_limits<double>::infinity();
    CHECK(weighted_p_norm(x, rho, eta, pinf, 0.5) ==
          doctest::Approx(schatten_norm(x, pinf)).epsilon(1e-12));
  }

  PsdMatrix q(Matrix(0.5 * Matrix::Identity(2, 2)));
  CHECK_THROWS_AS(weighted_p_norm(Matrix::Identity(2, 2), q, q, 0.5, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_p_norm(Matrix::Identity(2, 2), q, q, 2.0, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_p_norm(Matrix::Identity(3, 3), q, q, 2.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("alpha-z divergence: classical reduction, z-independence, limits") {
  const DensityMatrix rho = anchor_rho();
  const DensityMatrix eta = anchor_eta();

  // commuting inputs collapse to the classical Renyi divergence for every z
  for (double alpha : {0.5, 1.5, 2.0}) {
    const double classical =
        std::log(std::pow(0.75, alpha) * std::pow(0.5, 1.0 - alpha) +
                 std::pow(0.25, alpha) * std::pow(0.5, 1.0 - alpha)) /
        (alpha - 1.0);
    for (double z : {1.0, 2.0}) {
      if (z < std::max(alpha - 1.0, alpha / 2.0)) continue;
      CHECK(alpha_z_renyi(rho, eta, alpha, z) == doctest::Approx(classical).epsilon(1e-10));
    }
    CHECK(alpha_z_renyi(rho, eta, alpha, 5.0, /*unchecked=*/true) ==
          doctest::Approx(classical).epsilon(1e-10));
  }

  // alpha -> 1 recovers the relative entropy
  CHECK(alpha_z_renyi(rho, eta, 1.0 + 1e-6, 1.0) == doctest::Approx(kAnchorKL).epsilon(1e-5));
  CHECK(alpha_z_renyi(rho, eta, 1.0 - 1e-6, 1.0) == doctest::Approx(kAnchorKL).epsilon(1e-5));

  // alpha = 2, z = 1 equals ln tr(rho^2 eta^{-1}); oracle via a direct inverse
  SplitRng rng(44, 0);
  for (int d = 2; d <= 4; ++d) {
    DensityMatrix a = random_mixed_state(d, rng);
    DensityMatrix b = random_mixed_state(d, rng);
    const double direct =
        std::log((a.matrix() * a.matrix() * b.matrix().inverse()).trace().real());
    CHECK(alpha_z_renyi(a, b, 2.0, 1.0) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("alpha-z divergence: domain guard and support behaviour") {
  const DensityMatrix rho = anchor_rho();
  const DensityMatrix eta = anchor_eta();

  CHECK_THROWS_AS(alpha_z_renyi(rho, eta, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_z_renyi(rho, eta, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_z_renyi(rho, eta, 1.5, 0.0), std::invalid_argument);
  // outside alpha in (0,1) u (1,2] with z >= max(alpha-1, alpha/2)
  CHECK_THROWS_AS(alpha_z_renyi(rho, eta, 3.0, 3.0), std::domain_error);
  CHECK_THROWS_AS(alpha_z_renyi(rho, eta, 1.5, 0.5), std::domain_error);
  CHECK_NOTHROW(alpha_z_renyi(rho, eta, 1.5, 0.75));
  CHECK_NOTHROW(alpha_z_renyi(rho, eta, 3.0, 3.0, /*unchecked=*/true));

  // mass outside supp(eta) diverges for alpha > 1 but stays finite below 1
  DensityMatrix pure0 = diag_state({1.0, 0.0});
  CHECK(std::isinf(alpha_z_renyi(eta, pure0, 1.5, 1.0)));
  CHECK(std::isfinite(alpha_z_renyi(eta, pure0, 0.5, 1.0)));
}

TEST_CASE("p-fidelity: classical values, pure states, and overloads") {
  // diagonal pair: f_p = (sum_i (x_i y_i)^{p/2})^{1/p}
  const DensityMatrix rho = anchor_rho();
  const DensityMatrix eta = anchor_eta();
  for (double p : {1.0, 2.0, 4.0}) {
    const double classical = std::pow(std::pow(std::sqrt(0.75 * 0.5), p) +
                                          std::pow(std::sqrt(0.25 * 0.5), p),
                                      1.0 / p);
    CHECK(p_fidelity(rho, eta, p) == doctest::Approx(classical).epsilon(1e-12));
  }

  SplitRng rng(45, 0);
  for (int d = 2; d <= 4; ++d) {
    DensityMatrix a = random_mixed_state(d, rng);
    DensityMatrix b = random_mixed_state(d, rng);

    // self-fidelity at p = 1 is the trace; general p gives the Schatten norm
    CHECK(p_fidelity(a, a, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p_fidelity(a, a, 2.0) ==
          doctest::Approx(schatten_norm(a.matrix(), 2.0)).epsilon(1e-10));

    // symmetry and monotone decrease in p
    for (double p : {1.0, 2.0, 4.0}) {
      CHECK(p_fidelity(a, b, p) == doctest::Approx(p_fidelity(b, a, p)).epsilon(1e-10));
    }
    CHECK(p_fidelity(a, b, 1.0) >= p_fidelity(a, b, 2.0) - 1e-12);
    CHECK(p_fidelity(a, b, 2.0) >= p_fidelity(a, b, 4.0) - 1e-12);

    // the density overload is the psd overload
    CHECK(p_fidelity(a, b, 2.0) == doctest::Approx(p_fidelity(a.psd(), b.psd(), 2.0)));

    // f_1 against a pure state is sqrt of the overlap
    DensityMatrix psi = random_pure_state(d, rng);
    const double overlap = (psi.matrix() * a.matrix()).trace().real();
    CHECK(p_fidelity(psi, a, 1.0) == doctest::Approx(std::sqrt(overlap)).epsilon(1e-9));
  }

  // orthogonal pure states have zero fidelity
  CHECK(p_fidelity(diag_state({1.0, 0.0}), diag_state({0.0, 1.0}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(p_fidelity(rho, eta, 0.5), std::invalid_argument);
}

TEST_CASE("measured relative entropy: commuting anchor and global bounds") {
  MeasuredResult anchor = measured_relative_entropy(anchor_rho(), anchor_eta());
  CHECK(anchor.converged);
  // commuting pair: measuring in the joint eigenbasis already saturates
  CHECK(anchor.value == doctest::Approx(kAnchorKL).epsilon(1e-6));

  SplitRng rng(46, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    DensityMatrix a = random_mixed_state(d, rng);
    DensityMatrix b = random_mixed_state(d, rng);
    MeasuredResult m = measured_relative_entropy(a, b);
    // data processing: no measurement can see more than the full divergence
    CHECK(m.value <= relative_entropy(a, b) + 1e-9);
    CHECK(m.value >= -1e-8);
    // measuring a state against itself reveals nothing
    MeasuredResult same = measured_relative_entropy(a, a);
    CHECK(std::abs(same.value) < 1e-9);
  }

  // support violation propagates
  MeasuredResult inf_case = measured_relative_entropy(anchor_eta(), diag_state({1.0, 0.0}));
  CHECK(std::isinf(inf_case.value));
}

TEST_CASE("measured relative entropy matches a Bloch-sphere grid search") {
  // Independent oracle: on qubits the optimal measurement is a two-outcome
  // projective one, so a dense sweep over Bloch directions brackets the value.
  SplitRng rng(47, 0);
  for (int trial = 0; trial < 3; ++trial) {
    DensityMatrix a = random_mixed_state(2, rng);
    DensityMatrix b = random_mixed_state(2, rng);

    auto bloch = [](const DensityMatrix& s) {
      const Matrix& m = s.matrix();
      Eigen::Vector3d v;
      v[0] = 2.0 * m(0, 1).real();
      v[1] = -2.0 * m(0, 1).imag();
      v[2] = (m(0, 0) - m(1, 1)).real();
      return v;
    };
    const Eigen::Vector3d ra = bloch(a);
    const Eigen::Vector3d rb = bloch(b);

    double best = 0.0;
    const double step = 0.01;
    for (double th = 0.0; th <= M_PI + 1e-12; th += step) {
      for (double ph = 0.0; ph < 2.0 * M_PI; ph += step) {
        Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                          std::cos(th));
        const double p = 0.5 * (1.0 + ra.dot(n));
        const double q = 0.5 * (1.0 + rb.dot(n));
        if (q <= 1e-12 || q >= 1.0 - 1e-12) continue;
        best = std::max(best, kl2(p, q));
      }
    }

    MeasuredResult m = measured_relative_entropy(a, b);
    // the ascent may hit the iteration cap with the gradient still a few
    // orders above the strict tolerance; the value is what is certified
    CHECK(m.grad_norm < 1e-6);
    // the optimizer must dominate every explicit measurement...
    CHECK(m.value >= best - 1e-6);
    // ...and the grid is fine enough to pin the optimum from below
    CHECK(m.value <= best + 2e-3);
  }
}

TEST_CASE("measured objective gradient agrees with central differences") {
  SplitRng rng(48, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 2;
    Matrix rho_c = random_mixed_state(d, rng).matrix();
    Matrix eta_c = random_mixed_state(d, rng).matrix();
    Matrix h = random_hermitian(d, rng, 0.7);
    Matrix dir = random_hermitian(d, rng, 1.0);

    const Matrix g = measured_gradient(rho_c, eta_c, h);
    CHECK((g - g.adjoint()).norm() < 1e-12);

    const double eps = 1e-5;
    const double fd = (measured_objective(rho_c, eta_c, h + eps * dir) -
                       measured_objective(rho_c, eta_c, h - eps * dir)) /
                      (2.0 * eps);
    const double analytic = (g * dir).trace().real();
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-5));
  }
}
