#pragma once

// Dense factorizations and small helpers shared by the solver and analysis
// layers. Factorizations delegate to Eigen; each wrapper re-verifies the
// advertised invariants so a silent quality loss surfaces as an error here
// rather than as a wrong answer downstream.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdsylv/errors.hpp"
#include "fdsylv/scheme.hpp"

namespace fdsylv {

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

// Real Schur form a = q t q^T with q orthogonal and t quasi-upper-triangular:
// 1x1 diagonal blocks carry real eigenvalues, 2x2 blocks complex-conjugate
// pairs. Entries below the first subdiagonal of t are exactly zero.
template <typename Scalar>
struct SchurForm {
  MatrixX<Scalar> q;
  MatrixX<Scalar> t;
  std::vector<std::complex<Scalar>> eigenvalues;
};

namespace detail {

// Reads the eigenvalues off the quasi-triangular diagonal. A nonzero
// subdiagonal entry marks a 2x2 block; its eigenvalues come from the
// trace/determinant quadratic.
template <typename Scalar>
std::vector<std::complex<Scalar>> quasi_triangular_eigenvalues(
    const MatrixX<Scalar>& t) {
  std::vector<std::complex<Scalar>> ev;
  const Index n = t.rows();
  ev.reserve(static_cast<std::size_t>(n));
  Index k = 0;
  while (k < n) {
    if (k + 1 == n || t(k + 1, k) == Scalar(0)) {
      ev.emplace_back(t(k, k), Scalar(0));
      ++k;
      continue;
    }
    const Scalar mean = (t(k, k) + t(k + 1, k + 1)) / Scalar(2);
    const Scalar det = t(k, k) * t(k + 1, k + 1) - t(k, k + 1) * t(k + 1, k);
    const Scalar disc = mean * mean - det;
    if (disc < Scalar(0)) {
      const Scalar im = std::sqrt(-disc);
      ev.emplace_back(mean, im);
      ev.emplace_back(mean, -im);
    } else {
      // A 2x2 block with real roots; split it.
      const Scalar root = std::sqrt(disc);
      ev.emplace_back(mean + root, Scalar(0));
      ev.emplace_back(mean - root, Scalar(0));
    }
    k += 2;
  }
  return ev;
}

}  // namespace detail

// tol bounds the accepted relative residuals of q^T q - I and q t q^T - a;
// max_iterations caps the QR sweeps (0 picks the default 100 per row).
template <typename Scalar>
struct SchurOptions {
  Index max_iterations = 0;
  Scalar tol = Scalar(1e-12);
};

template <typename Scalar>
SchurForm<Scalar> real_schur(const MatrixX<Scalar>& a,
                             SchurOptions<Scalar> opts = {}) {
  if (a.rows() != a.cols()) throw DimensionError("real_schur: matrix not square");
  if (a.size() == 0) throw DimensionError("real_schur: empty matrix");

  Eigen::RealSchur<MatrixX<Scalar>> schur;
  const Index total_iterations =
      opts.max_iterations > 0 ? opts.max_iterations : 100 * a.rows();
  schur.setMaxIterations(total_iterations);
  schur.compute(a, /*computeU=*/true);

  SchurForm<Scalar> form;
  form.q = schur.matrixU();
  form.t = schur.matrixT();
  // Clear roundoff residue below the first subdiagonal so block detection
  // can test against exact zero.
  const Index n = form.t.rows();
  for (Index j = 0; j + 2 < n; ++j)
    form.t.col(j).tail(n - j - 2).setZero();

  const Scalar scale = std::max(a.norm(), Scalar(1e-300));
  const Scalar residual = (form.q * form.t * form.q.transpose() - a).norm();
  if (schur.info() != Eigen::Success)
    throw ConvergenceError("real_schur: QR iteration did not converge",
                           static_cast<double>(residual / scale));
  const Scalar ortho =
      (form.q.transpose() * form.q - MatrixX<Scalar>::Identity(n, n)).norm();
  if (residual > opts.tol * scale || ortho > opts.tol * Scalar(n))
    throw ConvergenceError("real_schur: factorization quality below tolerance",
                           static_cast<double>(residual / scale));

  form.eigenvalues = detail::quasi_triangular_eigenvalues(form.t);
  return form;
}

// Full SVD a = u diag(sigma) v^T with u (m x m), v (n x n) orthogonal and
// sigma descending.
template <typename Scalar>
struct SvdForm {
  MatrixX<Scalar> u_left;
  VectorX<Scalar> sigma;
  MatrixX<Scalar> v_right;
};

template <typename Scalar>
SvdForm<Scalar> svd(const MatrixX<Scalar>& a, Scalar tol = Scalar(1e-12)) {
  if (a.size() == 0) throw DimensionError("svd: empty matrix");
  Eigen::JacobiSVD<MatrixX<Scalar>> jsvd(a,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdForm<Scalar> form{jsvd.matrixU(), jsvd.singularValues(), jsvd.matrixV()};

  const Index m = a.rows();
  const Index n = a.cols();
  MatrixX<Scalar> sig = MatrixX<Scalar>::Zero(m, n);
  sig.diagonal() = form.sigma;
  const Scalar scale = std::max(a.norm(), Scalar(1e-300));
  const Scalar residual =
      (form.u_left * sig * form.v_right.transpose() - a).norm();
  if (residual > tol * scale)
    throw ConvergenceError("svd: factorization quality below tolerance",
                           static_cast<double>(residual / scale));
  return form;
}

// Determinant of the k x k tridiagonal Toeplitz matrix with `diag` on the
// diagonal, `upper` on the superdiagonal and `lower` on the subdiagonal,
// via the three-term minor recurrence
//   D_0 = 1, D_1 = diag, D_k = diag D_{k-1} - upper lower D_{k-2}.
template <typename Scalar>
Scalar tridiag_det(Scalar diag, Scalar upper, Scalar lower, Index k) {
  if (k < 1) throw DimensionError("tridiag_det: size must be >= 1");
  Scalar prev = Scalar(1);
  Scalar cur = diag;
  for (Index i = 2; i <= k; ++i) {
    const Scalar next = diag * cur - upper * lower * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Assembles the matrix the recurrence above describes; used as its
// independent cross-check and by the spectra reports.
template <typename Scalar>
MatrixX<Scalar> tridiag_toeplitz(Scalar diag, Scalar upper, Scalar lower,
                                 Index k) {
  if (k < 1) throw DimensionError("tridiag_toeplitz: size must be >= 1");
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(k, k);
  m.diagonal().setConstant(diag);
  if (k > 1) {
    m.diagonal(1).setConstant(upper);
    m.diagonal(-1).setConstant(lower);
  }
  return m;
}

// x with a x = b via partially pivoted LU. A vanishing pivot relative to the
// largest one raises a singularity error instead of returning garbage.
template <typename Scalar, typename Rhs>
MatrixX<Scalar> solve_linear(const MatrixX<Scalar>& a,
                             const Eigen::MatrixBase<Rhs>& b,
                             Scalar pivot_tol = Scalar(1e-13)) {
  if (a.rows() != a.cols()) throw DimensionError("solve_linear: matrix not square");
  if (a.rows() != b.rows())
    throw DimensionError("solve_linear: right-hand side row count mismatch");

  Eigen::PartialPivLU<MatrixX<Scalar>> lu(a);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const Scalar largest = diag.maxCoeff();
  if (largest == Scalar(0) || diag.minCoeff() <= pivot_tol * largest)
    throw SingularMatrixError("solve_linear: matrix is singular to working precision");
  return lu.solve(b.derived());
}

}  // namespace fdsylv
