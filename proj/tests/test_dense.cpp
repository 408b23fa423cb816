#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "fdsylv/dense.hpp"

using namespace fdsylv;

namespace {

MatrixX<double> random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss;
  MatrixX<double> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

}  // namespace

TEST_CASE("frobenius norm") {
  MatrixX<double> a(2, 2);
  a << 3.0, 0.0, 0.0, 4.0;
  CHECK(frobenius_norm(a) == doctest::Approx(5.0));
}

TEST_CASE("schur form of a plane rotation") {
  MatrixX<double> a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const auto form = real_schur(a);
  CHECK((form.q * form.t * form.q.transpose() - a).norm() <= 1e-14);
  CHECK((form.q.transpose() * form.q -
         MatrixX<double>::Identity(2, 2)).norm() <= 1e-14);
  REQUIRE(form.eigenvalues.size() == 2);
  std::vector<double> imag = {form.eigenvalues[0].imag(),
                              form.eigenvalues[1].imag()};
  std::sort(imag.begin(), imag.end());
  CHECK(imag[0] == doctest::Approx(-1.0));
  CHECK(imag[1] == doctest::Approx(1.0));
  CHECK(form.eigenvalues[0].real() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("schur form of a diagonal matrix") {
  MatrixX<double> a = MatrixX<double>::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = -1.0;
  a(2, 2) = 5.0;
  const auto form = real_schur(a);
  std::vector<double> real;
  for (const auto& ev : form.eigenvalues) {
    CHECK(ev.imag() == 0.0);
    real.push_back(ev.real());
  }
  std::sort(real.begin(), real.end());
  CHECK(real[0] == doctest::Approx(-1.0));
  CHECK(real[1] == doctest::Approx(2.0));
  CHECK(real[2] == doctest::Approx(5.0));
}

TEST_CASE("schur hygiene on seeded matrices") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> dim(1, 16);
    const Index n = dim(rng);
    const MatrixX<double> a = random_matrix(rng, n, n);
    const auto form = real_schur(a);

    const double scale = std::max(a.norm(), 1.0);
    CHECK((form.q * form.t * form.q.transpose() - a).norm() <= 1e-9 * scale);
    CHECK((form.q.transpose() * form.q - MatrixX<double>::Identity(n, n))
              .norm() <= 1e-9 * double(n));

    // Below the first subdiagonal the factor is exactly zero.
    for (Index j = 0; j + 2 < n; ++j)
      CHECK(form.t.col(j).tail(n - j - 2).norm() == 0.0);

    // The eigenvalue list carries the trace.
    std::complex<double> sum = 0.0;
    for (const auto& ev : form.eigenvalues) sum += ev;
    CHECK(sum.real() == doctest::Approx(a.trace()).epsilon(1e-9));
    CHECK(sum.imag() == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("schur iteration cap") {
  std::mt19937_64 rng(99);
  const MatrixX<double> a = random_matrix(rng, 8, 8);
  SchurOptions<double> opts;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(real_schur(a, opts), ConvergenceError);
}

TEST_CASE("svd of fixed matrices") {
  MatrixX<double> rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  const auto f = svd(rot);
  CHECK(f.sigma[0] == doctest::Approx(1.0));
  CHECK(f.sigma[1] == doctest::Approx(1.0));

  MatrixX<double> d = MatrixX<double>::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -2.0;
  const auto fd = svd(d);
  CHECK(fd.sigma[0] == doctest::Approx(3.0));
  CHECK(fd.sigma[1] == doctest::Approx(2.0));
}

TEST_CASE("svd hygiene on seeded matrices") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_int_distribution<Index> dim(1, 16);
    const Index m = dim(rng);
    const Index n = dim(rng);
    const MatrixX<double> a = random_matrix(rng, m, n);
    const auto f = svd(a);

    MatrixX<double> s = MatrixX<double>::Zero(m, n);
    for (Index k = 0; k < std::min(m, n); ++k) s(k, k) = f.sigma[k];
    const double scale = std::max(a.norm(), 1.0);
    CHECK((f.u_left * s * f.v_right.transpose() - a).norm() <= 1e-9 * scale);
    CHECK((f.u_left.transpose() * f.u_left -
           MatrixX<double>::Identity(m, m)).norm() <= 1e-9 * double(m));
    CHECK((f.v_right.transpose() * f.v_right -
           MatrixX<double>::Identity(n, n)).norm() <= 1e-9 * double(n));
    for (Index k = 0; k + 1 < f.sigma.size(); ++k)
      CHECK(f.sigma[k] >= f.sigma[k + 1]);
    CHECK(f.sigma[f.sigma.size() - 1] >= 0.0);
  }
}

TEST_CASE("svd flags rank deficiency") {
  std::mt19937_64 rng(5);
  const MatrixX<double> u = random_matrix(rng, 6, 1);
  const MatrixX<double> v = random_matrix(rng, 4, 1);
  const MatrixX<double> a = u * v.transpose();
  const auto f = svd(a);
  CHECK(f.sigma[0] > 0.0);
  for (Index k = 1; k < f.sigma.size(); ++k)
    CHECK(f.sigma[k] <= 1e-12 * f.sigma[0]);
}

TEST_CASE("tridiagonal determinant recurrence") {
  CHECK(tridiag_det(2.0, 1.0, 1.0, 3) == doctest::Approx(4.0));
  CHECK(tridiag_det(2.0, 1.0, 1.0, 4) == doctest::Approx(5.0));
  // Zero diagonal collapses to powers of the off-diagonal product.
  CHECK(tridiag_det(0.0, 2.0, 3.0, 4) == doctest::Approx(36.0));
  CHECK(tridiag_det(0.0, 2.0, 3.0, 3) == doctest::Approx(0.0));

  // The recurrence agrees with a dense determinant.
  for (Index k = 1; k <= 6; ++k) {
    const MatrixX<double> t = tridiag_toeplitz(1.3, -0.7, 0.4, k);
    CHECK(tridiag_det(1.3, -0.7, 0.4, k) ==
          doctest::Approx(t.determinant()).epsilon(1e-12));
  }
}

TEST_CASE("tridiagonal toeplitz builder") {
  const MatrixX<double> t = tridiag_toeplitz(2.0, 3.0, 5.0, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      if (i == j)
        CHECK(t(i, j) == 2.0);
      else if (j == i + 1)
        CHECK(t(i, j) == 3.0);
      else if (j + 1 == i)
        CHECK(t(i, j) == 5.0);
      else
        CHECK(t(i, j) == 0.0);
    }
}

TEST_CASE("dense linear solve") {
  std::mt19937_64 rng(17);
  const MatrixX<double> a =
      random_matrix(rng, 6, 6) + 10.0 * MatrixX<double>::Identity(6, 6);
  const MatrixX<double> b = random_matrix(rng, 6, 2);
  const MatrixX<double> x = solve_linear(a, b);
  CHECK((a * x - b).norm() <= 1e-10 * b.norm());

  MatrixX<double> singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  MatrixX<double> rhs(2, 1);
  rhs << 1.0, 0.0;
  CHECK_THROWS_AS(solve_linear(singular, rhs), SingularMatrixError);
}
