#include <doctest.h>

#include <cmath>

#include "jc/numerics.hpp"
#include "jc/rng.hpp"

using namespace jc;

namespace {

DenseMatrix random_symmetric(int n, Rng& rng) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
  return m;
}

DenseMatrix random_matrix(int rows, int cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

DenseMatrix random_orthogonal(int n, Rng& rng) {
  DenseMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s(i, j) = rng.normal();
      s(j, i) = -s(i, j);
    }
  return mat_exp(s);
}

double reconstruction_error(const DenseMatrix& m, const SymEig& eig) {
  DenseMatrix lam(m.rows(), m.rows());
  for (int i = 0; i < m.rows(); ++i) lam(i, i) = eig.values[i];
  return (m - eig.vectors * lam * eig.vectors.transposed()).frobenius_norm();
}

}  // namespace

TEST_CASE("sym_eig identity and diagonal cases") {
  const SymEig id = sym_eig(DenseMatrix::identity(3));
  for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  const SymEig diag = sym_eig(DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 3.0}}));
  CHECK(diag.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(diag.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  // dominant column of the top eigenvector must be the second coordinate
  CHECK(std::abs(diag.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig random reconstruction and orthonormality") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 10;
    const DenseMatrix m = random_symmetric(n, rng);
    const SymEig eig = sym_eig(m);
    CHECK(reconstruction_error(m, eig) <= 1e-10 * (1.0 + m.frobenius_norm()));
    CHECK((eig.vectors.transposed() * eig.vectors - DenseMatrix::identity(n)).frobenius_norm() <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(eig.values[i - 1] >= eig.values[i]);
  }
}

TEST_CASE("sym_eig eigenvalues invariant under orthogonal similarity") {
  Rng rng(11);
  const DenseMatrix m = random_symmetric(6, rng);
  const DenseMatrix q = random_orthogonal(6, rng);
  const SymEig a = sym_eig(m);
  const SymEig b = sym_eig(q * m * q.transposed());
  for (int i = 0; i < 6; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
}

TEST_CASE("sym_eig rejects asymmetric and non-finite input") {
  CHECK_THROWS_AS(sym_eig(DenseMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), NonSymmetricError);
  DenseMatrix nan(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(sym_eig(nan), NonFiniteError);
  CHECK_THROWS_AS(sym_eig(DenseMatrix(2, 3)), DimensionMismatchError);
}

TEST_CASE("svd zero and diagonal cases") {
  const Svd z = svd(DenseMatrix(2, 3));
  REQUIRE(z.sigma.size() == 2);
  CHECK(z.sigma[0] == 0.0);
  CHECK(z.sigma[1] == 0.0);
  CHECK((z.u.transposed() * z.u - DenseMatrix::identity(2)).frobenius_norm() <= 1e-12);
  CHECK((z.v.transposed() * z.v - DenseMatrix::identity(3)).frobenius_norm() <= 1e-12);

  const Svd d = svd(DenseMatrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}));
  CHECK(d.sigma[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd reconstruction and cross-check against sym_eig of m^T m") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 2 + trial % 5;
    const int cols = 2 + (trial / 2) % 5;
    const DenseMatrix m = random_matrix(rows, cols, rng);
    const Svd s = svd(m);

    DenseMatrix sig(rows, cols);
    for (std::size_t k = 0; k < s.sigma.size(); ++k) sig(static_cast<int>(k), static_cast<int>(k)) = s.sigma[k];
    CHECK((m - s.u * sig * s.v.transposed()).frobenius_norm() <= 1e-10 * (1.0 + m.frobenius_norm()));
    CHECK((s.u.transposed() * s.u - DenseMatrix::identity(rows)).frobenius_norm() <= 1e-10);
    CHECK((s.v.transposed() * s.v - DenseMatrix::identity(cols)).frobenius_norm() <= 1e-10);

    // sigma_i^2 equal the eigenvalues of m^T m
    const SymEig gram = sym_eig(m.transposed() * m);
    for (std::size_t k = 0; k < s.sigma.size(); ++k)
      CHECK(s.sigma[k] * s.sigma[k] == doctest::Approx(gram.values[k]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("svd singular values invariant under orthogonal factors") {
  Rng rng(17);
  const DenseMatrix m = random_matrix(3, 4, rng);
  const DenseMatrix qu = random_orthogonal(3, rng);
  const DenseMatrix qv = random_orthogonal(4, rng);
  const Svd a = svd(m);
  const Svd b = svd(qu * m * qv);
  for (std::size_t k = 0; k < a.sigma.size(); ++k)
    CHECK(a.sigma[k] == doctest::Approx(b.sigma[k]).epsilon(1e-9));
}

TEST_CASE("mat_exp basic cases") {
  CHECK((mat_exp(DenseMatrix(3, 3)) - DenseMatrix::identity(3)).frobenius_norm() == 0.0);

  const DenseMatrix d = mat_exp(DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 2.0}}));
  CHECK(d(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(d(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
  CHECK(std::abs(d(0, 1)) <= 1e-14);

  const double theta = 1.5707963267948966;  // pi/2
  const DenseMatrix r = mat_exp(DenseMatrix::from_rows({{0.0, theta}, {-theta, 0.0}}));
  CHECK(std::abs(r(0, 0)) <= 1e-10);
  CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r(1, 0) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("mat_exp inverse identity") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    DenseMatrix m = random_matrix(n, n, rng);
    m *= rng.uniform(0.1, 5.0) / m.frobenius_norm();
    DenseMatrix neg = m;
    neg *= -1.0;
    CHECK((mat_exp(m) * mat_exp(neg) - DenseMatrix::identity(n)).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("solve_linear recovers solutions and flags singularity") {
  Rng rng(23);
  const DenseMatrix a = random_matrix(5, 5, rng);
  std::vector<double> x_true(5);
  for (double& v : x_true) v = rng.normal();
  const std::vector<double> b = a * x_true;
  std::vector<double> x;
  REQUIRE(solve_linear(a, b, x));
  for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));

  DenseMatrix singular(2, 2);
  singular(0, 0) = 1.0;
  singular(1, 0) = 1.0;  // rank 1
  singular(0, 1) = 2.0;
  singular(1, 1) = 2.0;
  CHECK_FALSE(solve_linear(singular, {1.0, 0.0}, x));
}
