#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "petzlab/rng.hpp"
#include "petzlab/states.hpp"

using namespace petzlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix haar_unitary(int d, std::uint64_t stream) {
  SplitRng rng(999, stream);
  return random_unitary(d, rng);
}

}  // namespace

TEST_CASE("hermiticity predicate and validated wrapper") {
  Matrix h = pauli_y();
  CHECK(is_hermitian(h));
  CHECK((dagger(h) - h).norm() == doctest::Approx(0.0));

  Matrix skew = h;
  skew(0, 1) += Complex(1e-3, 0.0);
  CHECK_FALSE(is_hermitian(skew));
  CHECK_THROWS_AS(HermitianMatrix{skew}, std::invalid_argument);

  // deviations inside the tolerance are symmetrized away
  Matrix nearly = h;
  nearly(0, 1) += Complex(1e-14, 0.0);
  HermitianMatrix wrapped(nearly);
  CHECK((wrapped.get() - dagger(wrapped.get())).norm() == 0.0);
}

TEST_CASE("hermitian eigendecomposition reconstructs and sorts ascending") {
  SplitRng rng(3, 1);
  Matrix a = random_hermitian(4, rng);
  Eigensystem es = eig_hermitian(HermitianMatrix(a));
  Matrix rebuilt =
      es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  CHECK((rebuilt - a).norm() < 1e-12);
  for (int i = 1; i < es.values.size(); ++i) CHECK(es.values[i] >= es.values[i - 1]);
  CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("psd wrapper clips round-off but rejects real negativity") {
  Matrix d2 = Matrix::Zero(2, 2);
  d2(0, 0) = 1.0;
  d2(1, 1) = -1e-14;
  PsdMatrix ok(d2);
  CHECK(ok.eigenvalues().minCoeff() == 0.0);
  CHECK(ok.support_rank() == 1);

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = -1e-6;
  CHECK_THROWS_AS(PsdMatrix{bad}, std::invalid_argument);
}

TEST_CASE("psd powers follow the pseudo-inverse convention") {
  Matrix u = haar_unitary(3, 5);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = 0.5;  // rank 2: third eigenvalue exactly zero
  PsdMatrix x(u * d * u.adjoint());

  CHECK(x.support_rank() == 2);
  CHECK((x.sqrt() * x.sqrt() - x.matrix()).norm() < 1e-12);

  // z = 0 and negative powers act only on the support
  Matrix proj = x.support_projector();
  CHECK((x.power(Complex(0.0, 0.0)) - proj).norm() < 1e-12);
  CHECK((proj * proj - proj).norm() < 1e-12);
  CHECK((x.power(Complex(-1.0, 0.0)) * x.matrix() - proj).norm() < 1e-12);

  // purely imaginary powers are partial isometries on the support
  Matrix rot = x.power(Complex(0.0, 0.7));
  CHECK((rot.adjoint() * rot - proj).norm() < 1e-12);

  // log lives on the support: exp(log x) restores x there
  Eigensystem es = eig_hermitian(HermitianMatrix(x.log()));
  Matrix expd = Matrix::Zero(3, 3);
  Matrix back = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    back += std::exp(es.values[i]) * es.vectors.col(i) * es.vectors.col(i).adjoint();
  }
  // the kernel direction exponentiates to 1, matching 1 - proj
  CHECK((back - (x.matrix() + Matrix::Identity(3, 3) - proj)).norm() < 1e-10);

  // free function aliases
  CHECK((matrix_power(x, Complex(0.5, 0.0)) - x.sqrt()).norm() == 0.0);
  CHECK((support_projection(x) - proj).norm() == 0.0);
}

TEST_CASE("schatten norms against hand values") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;  // singular values 4, 3
  CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0));
  CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(d, 3.0) == doctest::Approx(std::pow(91.0, 1.0 / 3.0)));
  CHECK(schatten_norm(d, kInf) == doctest::Approx(4.0));
  CHECK_THROWS_AS(schatten_norm(d, 0.5), std::invalid_argument);

  Eigen::VectorXd sv = singular_values(d);
  CHECK(sv.maxCoeff() == doctest::Approx(4.0));
  CHECK(sv.minCoeff() == doctest::Approx(3.0));
}

TEST_CASE("schatten norm properties on random matrices") {
  SplitRng rng(3, 2);
  Matrix a = random_ginibre(3, 3, rng);
  Matrix u = haar_unitary(3, 6);
  Matrix v = haar_unitary(3, 7);

  // unitary invariance
  CHECK(schatten_norm(u * a * v, 1.7) == doctest::Approx(schatten_norm(a, 1.7)));
  // monotone nonincreasing in p
  double prev = schatten_norm(a, 1.0);
  for (double p : {1.5, 2.0, 3.0, 10.0}) {
    double cur = schatten_norm(a, p);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  CHECK(schatten_norm(a, kInf) <= prev + 1e-12);
  // triangle inequality
  Matrix b = random_ginibre(3, 3, rng);
  CHECK(schatten_norm(a + b, 2.5) <=
        schatten_norm(a, 2.5) + schatten_norm(b, 2.5) + 1e-12);
  // rectangular blocks work too
  Matrix rect = random_ginibre(2, 4, rng);
  CHECK(schatten_norm(rect, 2.0) == doctest::Approx(rect.norm()));
}

TEST_CASE("large p does not underflow") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1e-8;
  d(1, 1) = 2e-8;
  double n = schatten_norm(d, 400.0);
  CHECK(std::isfinite(n));
  CHECK(n == doctest::Approx(2e-8).epsilon(1e-6));
}

TEST_CASE("split rng streams are independent and deterministic") {
  SplitRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 16; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  // different stream gives a different sequence
  SplitRng a2(42, 7);
  bool differs = false;
  for (int i = 0; i < 16; ++i) differs |= (a2.next_u64() != c.next_u64());
  CHECK(differs);

  SplitRng u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
