#pragma once

// Solvers and structural diagnostics for the two-sided linear matrix
// equation a x + x b = c produced by the assembly layer.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fdsylv/assembly.hpp"
#include "fdsylv/dense.hpp"
#include "fdsylv/errors.hpp"

namespace fdsylv {

namespace detail {

// Start offsets and sizes of the 1x1/2x2 diagonal blocks of a
// quasi-triangular matrix. Relies on exact zeros from real_schur.
template <typename Scalar>
std::vector<std::pair<Index, Index>> diagonal_blocks(const MatrixX<Scalar>& t) {
  std::vector<std::pair<Index, Index>> blocks;
  const Index n = t.rows();
  Index k = 0;
  while (k < n) {
    const Index size = (k + 1 < n && t(k + 1, k) != Scalar(0)) ? 2 : 1;
    blocks.emplace_back(k, size);
    k += size;
  }
  return blocks;
}

// Smallest |lambda_a + lambda_b| over the two spectra: the distance of the
// equation's vectorized operator from singularity.
template <typename Scalar>
Scalar spectra_gap(const std::vector<std::complex<Scalar>>& ev_a,
                   const std::vector<std::complex<Scalar>>& ev_b) {
  Scalar gap = std::numeric_limits<Scalar>::infinity();
  for (const auto& la : ev_a)
    for (const auto& lb : ev_b) gap = std::min(gap, std::abs(la + lb));
  return gap;
}

template <typename Scalar>
Scalar spectral_scale(const std::vector<std::complex<Scalar>>& ev_a,
                      const std::vector<std::complex<Scalar>>& ev_b) {
  Scalar scale = Scalar(0);
  for (const auto& la : ev_a) scale = std::max(scale, std::abs(la));
  for (const auto& lb : ev_b) scale = std::max(scale, std::abs(lb));
  return scale;
}

// Solves the small coupled system t_a y + y t_b = r for one (<=2) x (<=2)
// block pair by direct elimination of its vectorized form.
template <typename Scalar>
MatrixX<Scalar> solve_block_pair(const MatrixX<Scalar>& t_a,
                                 const MatrixX<Scalar>& t_b,
                                 const MatrixX<Scalar>& r) {
  const Index p = t_a.rows();
  const Index q = t_b.rows();
  MatrixX<Scalar> k = MatrixX<Scalar>::Zero(p * q, p * q);
  for (Index c1 = 0; c1 < q; ++c1)
    for (Index r1 = 0; r1 < p; ++r1)
      for (Index c2 = 0; c2 < q; ++c2)
        for (Index r2 = 0; r2 < p; ++r2) {
          Scalar v = Scalar(0);
          if (c1 == c2) v += t_a(r1, r2);
          if (r1 == r2) v += t_b(c2, c1);
          k(c1 * p + r1, c2 * p + r2) = v;
        }
  VectorX<Scalar> rhs(p * q);
  for (Index c = 0; c < q; ++c) rhs.segment(c * p, p) = r.col(c);

  Eigen::PartialPivLU<MatrixX<Scalar>> lu(k);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (diag.maxCoeff() == Scalar(0) ||
      diag.minCoeff() <= Scalar(1e-14) * diag.maxCoeff())
    throw NonUniqueError("sylvester: degenerate diagonal block pair", 0.0);
  VectorX<Scalar> y = lu.solve(rhs);

  MatrixX<Scalar> out(p, q);
  for (Index c = 0; c < q; ++c) out.col(c) = y.segment(c * p, p);
  return out;
}

}  // namespace detail

template <typename Scalar>
struct SylvesterSolveReport {
  MatrixX<Scalar> x;
  Scalar residual_norm;
  Scalar spectra_gap;
};

template <typename Scalar>
struct SolveOptions {
  Scalar gap_tol_rel = Scalar(1e-8);
};

// Schur-reduce both coefficient matrices, back-substitute over their
// diagonal block structure, rotate back.
template <typename Scalar>
SylvesterSolveReport<Scalar> solve_bartels_stewart(const MatrixX<Scalar>& a,
                                                   const MatrixX<Scalar>& b,
                                                   const MatrixX<Scalar>& c,
                                                   SolveOptions<Scalar> opts = {}) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw DimensionError("sylvester: coefficient matrices must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionError("sylvester: right-hand side shape mismatch");

  const SchurForm<Scalar> sa = real_schur(a);
  const SchurForm<Scalar> sb = real_schur(b);
  const Scalar gap = detail::spectra_gap(sa.eigenvalues, sb.eigenvalues);
  const Scalar scale =
      std::max(detail::spectral_scale(sa.eigenvalues, sb.eigenvalues),
               Scalar(1e-300));
  if (gap < opts.gap_tol_rel * scale)
    throw NonUniqueError("sylvester: spectra of a and -b nearly intersect",
                         static_cast<double>(gap));

  const Index m = a.rows();
  const Index n = b.rows();
  const MatrixX<Scalar> ct = sa.q.transpose() * c * sb.q;
  const auto blocks_a = detail::diagonal_blocks(sa.t);
  const auto blocks_b = detail::diagonal_blocks(sb.t);

  // Column blocks left to right (t_b upper: later columns see earlier ones),
  // row blocks bottom to top (t_a upper: upper rows see lower ones).
  MatrixX<Scalar> y = MatrixX<Scalar>::Zero(m, n);
  for (const auto& [j0, jsz] : blocks_b) {
    MatrixX<Scalar> r = ct.block(0, j0, m, jsz);
    if (j0 > 0)
      r -= y.leftCols(j0) * sb.t.block(0, j0, j0, jsz);
    for (auto it = blocks_a.rbegin(); it != blocks_a.rend(); ++it) {
      const auto [i0, isz] = *it;
      MatrixX<Scalar> rhs = r.block(i0, 0, isz, jsz);
      const Index below = i0 + isz;
      if (below < m)
        rhs -= sa.t.block(i0, below, isz, m - below) *
               y.block(below, j0, m - below, jsz);
      y.block(i0, j0, isz, jsz) = detail::solve_block_pair(
          MatrixX<Scalar>(sa.t.block(i0, i0, isz, isz)),
          MatrixX<Scalar>(sb.t.block(j0, j0, jsz, jsz)), rhs);
    }
  }

  SylvesterSolveReport<Scalar> report;
  report.x = sa.q * y * sb.q.transpose();
  report.residual_norm = (a * report.x + report.x * b - c).norm();
  report.spectra_gap = gap;
  return report;
}

// Independent oracle: stack the equation into ((I (x) a) + (b^T (x) I))
// vec(x) = vec(c) and solve by full-pivot elimination. Exercised against
// solve_bartels_stewart; the two routes share no factorization code.
template <typename Scalar>
MatrixX<Scalar> kronecker_solve(const MatrixX<Scalar>& a,
                                const MatrixX<Scalar>& b,
                                const MatrixX<Scalar>& c) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw DimensionError("kronecker_solve: coefficient matrices must be square");
  if (c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionError("kronecker_solve: right-hand side shape mismatch");
  const Index m = a.rows();
  const Index n = b.rows();
  if (m * n > 4096)
    throw ValidationError("kronecker_solve: stacked system limited to 4096 unknowns");

  MatrixX<Scalar> k = MatrixX<Scalar>::Zero(m * n, m * n);
  for (Index c1 = 0; c1 < n; ++c1)
    for (Index r1 = 0; r1 < m; ++r1)
      for (Index c2 = 0; c2 < n; ++c2)
        for (Index r2 = 0; r2 < m; ++r2) {
          Scalar v = Scalar(0);
          if (c1 == c2) v += a(r1, r2);
          if (r1 == r2) v += b(c2, c1);
          if (v != Scalar(0)) k(c1 * m + r1, c2 * m + r2) = v;
        }
  VectorX<Scalar> rhs(m * n);
  for (Index j = 0; j < n; ++j) rhs.segment(j * m, m) = c.col(j);

  Eigen::FullPivLU<MatrixX<Scalar>> lu(k);
  if (!lu.isInvertible())
    throw NonUniqueError("kronecker_solve: stacked matrix is singular", 0.0);
  const VectorX<Scalar> xv = lu.solve(rhs);
  MatrixX<Scalar> x(m, n);
  for (Index j = 0; j < n; ++j) x.col(j) = xv.segment(j * m, m);
  return x;
}

enum class Uniqueness { unique, non_unique };

inline const char* to_string(Uniqueness u) {
  return u == Uniqueness::unique ? "unique" : "non-unique";
}

// Two verdicts on solvability, reported side by side.
//
// The closed-form route evaluates the characteristic-polynomial roots the
// block pairing predicts: beta +- sqrt(delta epsilon) for m1 and
// +-sqrt(alpha gamma) for m2, each as complex numbers, and flags a
// collision of the two root sets. (The m2 set is symmetric about zero, so
// comparing roots of m2 or of -m2 is the same test.)
//
// The spectral route computes both spectra and measures the smallest
// |lambda_1 + lambda_2|, the actual distance from singularity. The two
// verdicts genuinely disagree on some grids; both are evidence.
template <typename Scalar>
struct UniquenessReport {
  Uniqueness formula_verdict;
  Uniqueness spectral_verdict;
  std::array<std::complex<Scalar>, 2> formula_roots_m1;
  std::array<std::complex<Scalar>, 2> formula_roots_m2;
  Index root_multiplicity_m1;
  Index root_multiplicity_m2;
  Scalar formula_gap;
  Scalar spectral_gap;
  std::vector<std::complex<Scalar>> spectrum_m1;
  std::vector<std::complex<Scalar>> spectrum_m2;
};

template <typename Scalar>
UniquenessReport<Scalar> uniqueness_check(const SylvesterSystem<Scalar>& sys,
                                          Scalar tol_rel = Scalar(1e-8)) {
  const auto& w = sys.coefficients;
  UniquenessReport<Scalar> rep;

  const std::complex<Scalar> s1 =
      std::sqrt(std::complex<Scalar>(w.delta * w.epsilon));
  const std::complex<Scalar> s2 =
      std::sqrt(std::complex<Scalar>(w.alpha * w.gamma));
  rep.formula_roots_m1 = {std::complex<Scalar>(w.beta) + s1,
                          std::complex<Scalar>(w.beta) - s1};
  rep.formula_roots_m2 = {s2, -s2};
  rep.root_multiplicity_m1 = sys.grid.interior() / 2;
  rep.root_multiplicity_m2 = sys.grid.n_t / 2;

  Scalar gap = std::numeric_limits<Scalar>::infinity();
  Scalar scale = Scalar(0);
  for (const auto& r1 : rep.formula_roots_m1) {
    scale = std::max(scale, std::abs(r1));
    for (const auto& r2 : rep.formula_roots_m2)
      gap = std::min(gap, std::abs(r1 - r2));
  }
  for (const auto& r2 : rep.formula_roots_m2) scale = std::max(scale, std::abs(r2));
  rep.formula_gap = gap;
  rep.formula_verdict = gap < tol_rel * std::max(scale, Scalar(1e-300))
                            ? Uniqueness::non_unique
                            : Uniqueness::unique;

  rep.spectrum_m1 = real_schur(sys.m1).eigenvalues;
  rep.spectrum_m2 = real_schur(sys.m2).eigenvalues;
  rep.spectral_gap = detail::spectra_gap(rep.spectrum_m1, rep.spectrum_m2);
  const Scalar sscale =
      detail::spectral_scale(rep.spectrum_m1, rep.spectrum_m2);
  rep.spectral_verdict =
      rep.spectral_gap < tol_rel * std::max(sscale, Scalar(1e-300))
          ? Uniqueness::non_unique
          : Uniqueness::unique;
  return rep;
}

// Determinant of m1 two ways: the closed form (beta^2 - delta epsilon) to
// the power (n_x-1)/2 predicted by the block pairing, and the tridiagonal
// minor recurrence. They disagree for beta != 0 on widths >= 4; the report
// carries both and never reconciles them. Verdicts come from determinants
// of the max-weight-scaled matrix so the threshold is size-independent.
template <typename Scalar>
struct InvertibilityReport {
  Scalar closed_form_det;
  Scalar recurrence_det;
  Scalar closed_form_det_scaled;
  Scalar recurrence_det_scaled;
  bool closed_form_invertible;
  bool recurrence_invertible;
  // For the second-order upwind row: left side beta^2, right side
  // delta*epsilon; invertibility requires they differ.
  struct SecondOrderCondition {
    Scalar lhs;
    Scalar rhs;
    bool satisfied;
  };
  std::optional<SecondOrderCondition> lax_wendroff_condition;
};

template <typename Scalar>
InvertibilityReport<Scalar> invertibility_check_m1(
    const SylvesterSystem<Scalar>& sys, Scalar det_tol = Scalar(1e-12)) {
  const auto& w = sys.coefficients;
  const Index k = sys.grid.interior();
  InvertibilityReport<Scalar> rep;

  const Scalar pair = w.beta * w.beta - w.delta * w.epsilon;
  rep.closed_form_det = std::pow(pair, Scalar(k / 2));
  rep.recurrence_det = tridiag_det(w.beta, w.delta, w.epsilon, k);

  const Scalar s = std::max({std::abs(w.beta), std::abs(w.delta),
                             std::abs(w.epsilon)});
  if (s == Scalar(0)) {
    rep.closed_form_det_scaled = Scalar(0);
    rep.recurrence_det_scaled = Scalar(0);
  } else {
    const Scalar bs = w.beta / s;
    const Scalar ds = w.delta / s;
    const Scalar es = w.epsilon / s;
    rep.closed_form_det_scaled = std::pow(bs * bs - ds * es, Scalar(k / 2));
    rep.recurrence_det_scaled = tridiag_det(bs, ds, es, k);
  }
  rep.closed_form_invertible = std::abs(rep.closed_form_det_scaled) > det_tol;
  rep.recurrence_invertible = std::abs(rep.recurrence_det_scaled) > det_tol;

  if (w.id == SchemeId::lax_wendroff) {
    const Scalar lhs = w.beta * w.beta;
    const Scalar rhs = w.delta * w.epsilon;
    const Scalar cscale = std::max({lhs, std::abs(rhs), Scalar(1e-300)});
    rep.lax_wendroff_condition = {
        lhs, rhs, std::abs(lhs - rhs) > det_tol * cscale};
  }
  return rep;
}

// m2 decomposes as alpha S + gamma S^T with S the down-shift. With exactly
// one of the two weights zero, m2 is a scaled one-sided shift and dies at
// the n_t-th power; with both zero it is already zero; with both nonzero it
// is not nilpotent (its square has alpha gamma on the diagonal).
template <typename Scalar>
struct NilpotencyReport {
  enum class Kind { none, nilpotent, degenerate };
  Kind kind = Kind::none;
  Index order = 0;
  bool decomposition_exact = false;
};

template <typename Scalar>
NilpotencyReport<Scalar> nilpotency_order(const SylvesterSystem<Scalar>& sys) {
  const auto& w = sys.coefficients;
  const Index n = sys.grid.n_t;
  NilpotencyReport<Scalar> rep;

  MatrixX<Scalar> recomposed = MatrixX<Scalar>::Zero(n, n);
  recomposed.diagonal(-1).setConstant(w.alpha);
  recomposed.diagonal(1).setConstant(w.gamma);
  rep.decomposition_exact = (recomposed.array() == sys.m2.array()).all();

  if (w.alpha == Scalar(0) && w.gamma == Scalar(0)) {
    rep.kind = NilpotencyReport<Scalar>::Kind::degenerate;
    rep.order = 1;
    return rep;
  }
  if (w.alpha != Scalar(0) && w.gamma != Scalar(0)) {
    rep.kind = NilpotencyReport<Scalar>::Kind::none;
    return rep;
  }

  // Power the unit-weight pattern so large weights cannot overflow.
  const Scalar unit = w.alpha != Scalar(0) ? w.alpha : w.gamma;
  const MatrixX<Scalar> pattern = sys.m2 / unit;
  MatrixX<Scalar> power = pattern;
  Index order = 1;
  while (order < n && !(power.array() == Scalar(0)).all()) {
    power = power * pattern;
    ++order;
  }
  if ((power.array() == Scalar(0)).all()) {
    rep.kind = NilpotencyReport<Scalar>::Kind::nilpotent;
    rep.order = order;
  }
  return rep;
}

// Final-column shortcut for gamma = 0: multiplying the matrix equation by
// m2^{n_t - 1} kills all but the last column of U, so that column equals
// m1^{-1} times the first column of m0 m2^{n_t-1}, divided by
// alpha^{n_t-1}. The power is taken on m2 / alpha, which absorbs the
// division.
template <typename Scalar>
VectorX<Scalar> final_time_fast_path(const SylvesterSystem<Scalar>& sys) {
  const auto& w = sys.coefficients;
  if (w.gamma != Scalar(0))
    throw ValidationError("final_time_fast_path: needs gamma = 0");
  if (w.alpha == Scalar(0))
    throw ValidationError("final_time_fast_path: needs alpha != 0");
  const auto inv = invertibility_check_m1(sys);
  if (!inv.recurrence_invertible)
    throw SingularMatrixError("final_time_fast_path: m1 is singular");

  const MatrixX<Scalar> pattern = sys.m2 / w.alpha;
  MatrixX<Scalar> power = MatrixX<Scalar>::Identity(sys.grid.n_t, sys.grid.n_t);
  for (Index k = 0; k + 1 < sys.grid.n_t; ++k) power = power * pattern;
  const MatrixX<Scalar> projected = sys.m0 * power;
  return solve_linear(sys.m1, projected.col(0));
}

}  // namespace fdsylv
