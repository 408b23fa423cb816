#pragma once

// Reformulates the nine-weight update relation over the whole space-time
// grid as one linear matrix equation
//
//   m1 U + U m2 + L(U) = m0
//
// for the interior field U (rows i = 1..n_x-1, columns n = 1..n_t):
//
//   m1: (n_x-1)^2 tridiagonal, beta on the diagonal, delta above, epsilon
//       below; m1 U collects the same-level spatial terms.
//   m2: n_t^2 with gamma on the superdiagonal and alpha on the subdiagonal;
//       U m2 collects the same-row temporal terms. Its last column has no
//       alpha entry, so the relation's final time level necessarily drops
//       the u^{n_t+1} term; residual() exposes the consequence.
//   L:  the four diagonal-neighbor weights (zeta, eta, theta, vartheta),
//       applied only where both shifted indices stay interior.
//   m0: every update term that falls on known data (boundary columns or the
//       initial row) moves to the right-hand side, negated. One uniform
//       rule generates all corner and edge entries.

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "fdsylv/dense.hpp"
#include "fdsylv/errors.hpp"
#include "fdsylv/scheme.hpp"

namespace fdsylv {

enum class FieldRole { numeric, exact, error, residual };

template <typename Scalar>
struct FieldMatrix {
  MatrixX<Scalar> values;
  FieldRole role = FieldRole::numeric;
};

template <typename Scalar>
MatrixX<Scalar> make_m1(const SchemeCoefficients<Scalar>& w,
                        const Grid<Scalar>& grid) {
  return tridiag_toeplitz(w.beta, w.delta, w.epsilon, grid.interior());
}

template <typename Scalar>
MatrixX<Scalar> make_m2(const SchemeCoefficients<Scalar>& w,
                        const Grid<Scalar>& grid) {
  MatrixX<Scalar> m2 = MatrixX<Scalar>::Zero(grid.n_t, grid.n_t);
  if (grid.n_t > 1) {
    m2.diagonal(1).setConstant(w.gamma);
    m2.diagonal(-1).setConstant(w.alpha);
  }
  return m2;
}

template <typename Scalar>
struct SylvesterSystem {
  MatrixX<Scalar> m1;
  MatrixX<Scalar> m2;
  MatrixX<Scalar> m0;
  SchemeCoefficients<Scalar> coefficients;
  Grid<Scalar> grid;
};

namespace detail {

// The nine terms of the update relation as (weight, space shift, time
// shift), in declaration order. Keeping one canonical order makes m0
// accumulation reproducible bit for bit.
template <typename Scalar>
struct StencilTerm {
  Scalar weight;
  int di;
  int dn;
};

template <typename Scalar>
std::array<StencilTerm<Scalar>, 9> stencil_terms(
    const SchemeCoefficients<Scalar>& w) {
  return {{{w.alpha, 0, +1},
           {w.beta, 0, 0},
           {w.gamma, 0, -1},
           {w.delta, +1, 0},
           {w.epsilon, -1, 0},
           {w.zeta, +1, +1},
           {w.eta, -1, -1},
           {w.theta, -1, +1},
           {w.vartheta, +1, -1}}};
}

// Known datum at grid point (l, m): a boundary column when l is 0 or n_x,
// the initial row when m is 0. Corners agree by the boundary invariant.
template <typename Scalar>
Scalar known_datum(const BoundaryData<Scalar>& b, const Grid<Scalar>& grid,
                   Index l, Index m) {
  if (l == 0) return b.left[m];
  if (l == grid.n_x) return b.right[m];
  return b.initial[l];
}

}  // namespace detail

template <typename Scalar>
SylvesterSystem<Scalar> assemble_system(const SchemeCoefficients<Scalar>& w,
                                        const Grid<Scalar>& grid,
                                        const BoundaryData<Scalar>& boundary) {
  grid.validate();
  w.validate();
  boundary.validate(grid);
  require_even_dims(grid, "assemble_system");
  if (w.gamma != Scalar(0) && !boundary.startup)
    throw StartupError("assemble_system: three-level scheme without startup row");

  SylvesterSystem<Scalar> sys{make_m1(w, grid), make_m2(w, grid),
                              MatrixX<Scalar>::Zero(grid.interior(), grid.n_t),
                              w, grid};

  // Sweep every relation (i, n) and every term. Targets beyond the final
  // time level have no column in U and no datum either: the relation's last
  // column simply omits them. Everything else that leaves the interior is
  // known data and lands in m0 with flipped sign.
  const auto terms = detail::stencil_terms(w);
  for (Index i = 1; i <= grid.interior(); ++i) {
    for (Index n = 1; n <= grid.n_t; ++n) {
      for (const auto& term : terms) {
        const Index l = i + term.di;
        const Index m = n + term.dn;
        if (m > grid.n_t) continue;
        if (l == 0 || l == grid.n_x || m == 0)
          sys.m0(i - 1, n - 1) -=
              term.weight * detail::known_datum(boundary, grid, l, m);
      }
    }
  }
  return sys;
}

template <typename Scalar>
SylvesterSystem<Scalar> assemble_system(const SchemeCoefficients<Scalar>& w,
                                        const Grid<Scalar>& grid,
                                        const SignalSpec<Scalar>& signal) {
  return assemble_system(w, grid,
                         BoundaryData<Scalar>::sample_exact(signal, grid));
}

// L(U): the four diagonal-neighbor terms, dropped wherever a shifted index
// leaves the interior (those contributions live in m0 instead).
template <typename Scalar, typename Derived>
MatrixX<Scalar> apply_cross_weights(const SchemeCoefficients<Scalar>& w,
                                    const Eigen::MatrixBase<Derived>& u) {
  const Index rows = u.rows();
  const Index cols = u.cols();
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(rows, cols);
  if (rows < 2 || cols < 2) return out;
  const Index rb = rows - 1;
  const Index cb = cols - 1;
  // zeta u_{i+1}^{n+1}
  out.block(0, 0, rb, cb) += w.zeta * u.block(1, 1, rb, cb);
  // eta u_{i-1}^{n-1}
  out.block(1, 1, rb, cb) += w.eta * u.block(0, 0, rb, cb);
  // theta u_{i-1}^{n+1}
  out.block(1, 0, rb, cb) += w.theta * u.block(0, 1, rb, cb);
  // vartheta u_{i+1}^{n-1}
  out.block(0, 1, rb, cb) += w.vartheta * u.block(1, 0, rb, cb);
  return out;
}

template <typename Scalar>
FieldMatrix<Scalar> apply_cross_operator(const SylvesterSystem<Scalar>& sys,
                                         const FieldMatrix<Scalar>& u) {
  if (u.values.rows() != sys.grid.interior() || u.values.cols() != sys.grid.n_t)
    throw DimensionError("apply_cross_operator: field/grid shape mismatch");
  return {apply_cross_weights(sys.coefficients, u.values), u.role};
}

// m1 u + u m2 + L(u) - m0. Zero wherever u satisfies the update relation;
// the final column reports the horizon truncation of any time-marched field.
template <typename Scalar>
FieldMatrix<Scalar> residual(const SylvesterSystem<Scalar>& sys,
                             const FieldMatrix<Scalar>& u) {
  if (u.values.rows() != sys.grid.interior() || u.values.cols() != sys.grid.n_t)
    throw DimensionError("residual: field/grid shape mismatch");
  MatrixX<Scalar> r = sys.m1 * u.values + u.values * sys.m2 +
                      apply_cross_weights(sys.coefficients, u.values) - sys.m0;
  return {std::move(r), FieldRole::residual};
}

// Scale for relative residual comparisons.
template <typename Scalar>
Scalar residual_scale(const SylvesterSystem<Scalar>& sys,
                      const FieldMatrix<Scalar>& u) {
  return sys.m0.norm() + u.values.norm() * (sys.m1.norm() + sys.m2.norm());
}

// Classical time marching, the reference the matrix-equation solutions are
// judged against. Solves each relation for its level-(n+1) terms:
//
//   (alpha I + zeta S^T + theta S) u^{n+1} = -(all lower-level terms)
//
// with S the down-shift. Explicit rows invert the scalar alpha; rows with
// zeta or theta solve the (constant) tridiagonal step matrix per level.
template <typename Scalar>
FieldMatrix<Scalar> reference_timestep(const SchemeCoefficients<Scalar>& w,
                                       const Grid<Scalar>& grid,
                                       const BoundaryData<Scalar>& boundary) {
  grid.validate();
  w.validate();
  boundary.validate(grid);
  if (w.three_level() && !boundary.startup)
    throw StartupError("reference_timestep: three-level scheme without startup row");
  if (w.alpha == Scalar(0) && !w.implicit_advance())
    throw AdvanceError("reference_timestep: no weight on the next time level");

  const Index ni = grid.interior();
  MatrixX<Scalar> u(ni, grid.n_t);

  // Field value at (i, level), drawing on boundary columns, the initial
  // row, and already-computed columns of u as appropriate.
  const auto at = [&](Index level, Index i) -> Scalar {
    if (i == 0) return boundary.left[level];
    if (i == grid.n_x) return boundary.right[level];
    if (level == 0) return boundary.initial[i];
    return u(i - 1, level - 1);
  };

  std::optional<Eigen::PartialPivLU<MatrixX<Scalar>>> step_lu;
  if (w.implicit_advance()) {
    MatrixX<Scalar> step =
        tridiag_toeplitz(w.alpha, w.zeta, w.theta, ni);
    Eigen::PartialPivLU<MatrixX<Scalar>> lu(step);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    if (diag.maxCoeff() == Scalar(0) ||
        diag.minCoeff() <= Scalar(1e-13) * diag.maxCoeff())
      throw SingularMatrixError("reference_timestep: singular step matrix");
    step_lu.emplace(std::move(lu));
  }

  // Advances one level: reads levels n and n-1 (n-1 unused for two-level
  // rows), writes level n+1 into column n of u.
  const auto advance = [&](Index n) {
    VectorX<Scalar> rhs(ni);
    for (Index i = 1; i <= ni; ++i) {
      Scalar s = w.beta * at(n, i) + w.delta * at(n, i + 1) +
                 w.epsilon * at(n, i - 1);
      if (w.three_level())
        s += w.gamma * at(n - 1, i) + w.eta * at(n - 1, i - 1) +
             w.vartheta * at(n - 1, i + 1);
      // Known boundary values of the implicit level move to the right side.
      if (i == 1) s += w.theta * boundary.left[n + 1];
      if (i == ni) s += w.zeta * boundary.right[n + 1];
      rhs[i - 1] = -s;
    }
    if (step_lu)
      u.col(n) = step_lu->solve(rhs);
    else
      u.col(n) = rhs / w.alpha;
  };

  // Three-level rows take their first column from the startup row;
  // two-level rows produce it from the initial row (the n = 0 relation).
  Index first = 0;
  if (w.three_level()) {
    u.col(0) = boundary.startup->segment(1, ni);
    first = 1;
  }
  for (Index n = first; n < grid.n_t; ++n) advance(n);
  return {std::move(u), FieldRole::numeric};
}

// The exact signal sampled on the interior unknowns.
template <typename Scalar>
FieldMatrix<Scalar> exact_matrix(const SignalSpec<Scalar>& signal,
                                 const Grid<Scalar>& grid) {
  grid.validate();
  signal.validate();
  MatrixX<Scalar> u(grid.interior(), grid.n_t);
  for (Index i = 1; i <= grid.interior(); ++i)
    for (Index n = 1; n <= grid.n_t; ++n)
      u(i - 1, n - 1) =
          exact_field(signal, grid, grid.h * Scalar(i), grid.tau * Scalar(n));
  return {std::move(u), FieldRole::exact};
}

// E = u - u_exact and the truncation field F = m1 u_exact + u_exact m2 +
// L(u_exact) - m0. Because the relation is affine in the field, any u that
// solves it exactly forces m1 E + E m2 + L(E) = -F; identity_residual is
// m1 E + E m2 + L(E) + F, which equals residual(u) and so vanishes together
// with it.
template <typename Scalar>
struct ErrorSplit {
  FieldMatrix<Scalar> error;
  FieldMatrix<Scalar> truncation;
  MatrixX<Scalar> identity_residual;
};

template <typename Scalar>
ErrorSplit<Scalar> error_and_truncation(const SylvesterSystem<Scalar>& sys,
                                        const FieldMatrix<Scalar>& u,
                                        const FieldMatrix<Scalar>& u_exact) {
  if (u.values.rows() != u_exact.values.rows() ||
      u.values.cols() != u_exact.values.cols())
    throw DimensionError("error_and_truncation: field shape mismatch");
  ErrorSplit<Scalar> split;
  split.error = {u.values - u_exact.values, FieldRole::error};
  split.truncation = residual(sys, u_exact);
  const MatrixX<Scalar>& e = split.error.values;
  split.identity_residual = sys.m1 * e + e * sys.m2 +
                            apply_cross_weights(sys.coefficients, e) +
                            split.truncation.values;
  return split;
}

}  // namespace fdsylv
