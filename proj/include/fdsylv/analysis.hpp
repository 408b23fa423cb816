#pragma once

// Error analysis for the matrix-equation formulation: closed-form spectra
// of the coefficient matrices, the componentwise minimum-norm solution of
// the error equation in singular-vector coordinates, the a-priori bound it
// yields, and the CFL-number bound for the neighbor-averaging scheme.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fdsylv/assembly.hpp"
#include "fdsylv/dense.hpp"
#include "fdsylv/errors.hpp"

namespace fdsylv {

// 2x2 blocks whose eigenvalues the block pairing assigns to the Gram
// matrices m1 m1^T and m2 m2^T.
template <typename Scalar>
struct GramBlocks {
  Eigen::Matrix<Scalar, 2, 2> m1_block;
  Eigen::Matrix<Scalar, 2, 2> m2_block;
};

template <typename Scalar>
GramBlocks<Scalar> gram_blocks_closed_form(const SchemeCoefficients<Scalar>& w) {
  GramBlocks<Scalar> g;
  const Scalar b2 = w.beta * w.beta;
  g.m1_block << b2 + w.delta * w.delta, w.beta * (w.delta + w.epsilon),
      w.beta * (w.delta + w.epsilon), w.epsilon * w.epsilon + b2;
  g.m2_block << w.gamma * w.gamma, Scalar(0), Scalar(0), w.alpha * w.alpha;
  return g;
}

// The closed-form values are eigenvalues of the Gram blocks, i.e. squared
// singular values; the comparison therefore squares the computed sigma.
// Agreement is exact for width 2 and for delta = epsilon = 0 and drifts on
// wider grids, where the band coupling the block pairing ignores kicks in.
template <typename Scalar>
struct SingularValueComparison {
  Scalar m1_minus;  // branch subtracting (delta+epsilon) sqrt(...)
  Scalar m1_plus;
  Index m1_multiplicity;
  Scalar m2_gamma_sq;
  Scalar m2_alpha_sq;
  Index m2_multiplicity;
  VectorX<Scalar> exact_sigma_m1;
  VectorX<Scalar> exact_sigma_m2;
  Scalar max_deviation_m1;  // closed-form multiset vs sigma^2 multiset
  Scalar max_deviation_m2;
};

template <typename Scalar>
SingularValueComparison<Scalar> singular_values_closed_form(
    const SchemeCoefficients<Scalar>& w, const Grid<Scalar>& grid) {
  grid.validate();
  require_even_dims(grid, "singular_values_closed_form");
  SingularValueComparison<Scalar> cmp;

  const Scalar t = Scalar(2) * w.beta * w.beta + w.delta * w.delta +
                   w.epsilon * w.epsilon;
  const Scalar root = std::sqrt(Scalar(4) * w.beta * w.beta +
                                (w.delta - w.epsilon) * (w.delta - w.epsilon));
  const Scalar spread = (w.delta + w.epsilon) * root;
  cmp.m1_minus = (t - spread) / Scalar(2);
  cmp.m1_plus = (t + spread) / Scalar(2);
  cmp.m1_multiplicity = grid.interior() / 2;
  cmp.m2_gamma_sq = w.gamma * w.gamma;
  cmp.m2_alpha_sq = w.alpha * w.alpha;
  cmp.m2_multiplicity = grid.n_t / 2;

  cmp.exact_sigma_m1 = svd(make_m1(w, grid)).sigma;
  cmp.exact_sigma_m2 = svd(make_m2(w, grid)).sigma;

  const auto multiset_deviation = [](Scalar lo, Scalar hi, Index mult,
                                     const VectorX<Scalar>& sigma) {
    std::vector<Scalar> closed;
    closed.reserve(static_cast<std::size_t>(2 * mult));
    for (Index k = 0; k < mult; ++k) {
      closed.push_back(lo);
      closed.push_back(hi);
    }
    std::vector<Scalar> squared(sigma.size());
    for (Index k = 0; k < sigma.size(); ++k)
      squared[static_cast<std::size_t>(k)] = sigma[k] * sigma[k];
    std::sort(closed.begin(), closed.end());
    std::sort(squared.begin(), squared.end());
    Scalar dev = Scalar(0);
    for (std::size_t k = 0; k < closed.size(); ++k)
      dev = std::max(dev, std::abs(closed[k] - squared[k]));
    return dev;
  };
  cmp.max_deviation_m1 =
      multiset_deviation(std::min(cmp.m1_minus, cmp.m1_plus),
                         std::max(cmp.m1_minus, cmp.m1_plus),
                         cmp.m1_multiplicity, cmp.exact_sigma_m1);
  cmp.max_deviation_m2 =
      multiset_deviation(std::min(cmp.m2_gamma_sq, cmp.m2_alpha_sq),
                         std::max(cmp.m2_gamma_sq, cmp.m2_alpha_sq),
                         cmp.m2_multiplicity, cmp.exact_sigma_m2);
  return cmp;
}

// One cell of the constrained minimum: over the line s1 e + s2 g = f the
// squared norm e^2 + g^2 is smallest at the orthogonal projection
//   e = s1 f / (s1^2 + s2^2),  g = s2 f / (s1^2 + s2^2).
template <typename Scalar>
std::pair<Scalar, Scalar> min_norm_cell(Scalar s1, Scalar s2, Scalar f,
                                        Index i = -1, Index j = -1) {
  const Scalar denom = s1 * s1 + s2 * s2;
  if (denom == Scalar(0))
    throw DegeneratePairError("min_norm_cell: both weights are zero",
                              static_cast<long>(i), static_cast<long>(j));
  return {s1 * f / denom, s2 * f / denom};
}

// Minimum-norm solve of m1 E + E m2 = f in singular-vector coordinates.
// With m1 = U1 S1 V1^T and m2 = U2 S2 V2^T, writing the unknown in two
// bases, Ev = V1^T E V2 and Eu = U1^T E U2, and f as U1^T f V2, the
// equation splits by numerical rank (r1, r2) into
//
//   S1 Ev_11 + Eu_11 S2 = f_11   (cellwise, minimized per cell)
//   S1 Ev_12            = f_12
//              Eu_21 S2 = f_21
//
// f_22 is untouched by any unknown, and the remaining blocks of Ev and Eu
// are unconstrained; the minimum-norm choice zeroes them.
template <typename Scalar>
struct MinNormSolution {
  SvdForm<Scalar> svd_m1;
  SvdForm<Scalar> svd_m2;
  Index rank1;
  Index rank2;
  MatrixX<Scalar> f11, f12, f21, f22;
  // Blocks of Ev (right-singular-vector coordinates).
  MatrixX<Scalar> ev11, ev12, ev21, ev22;
  // Blocks of Eu (left-singular-vector coordinates).
  MatrixX<Scalar> eu11, eu12, eu21, eu22;
  Scalar achieved_norm;
};

template <typename Scalar>
MinNormSolution<Scalar> min_norm_split(const MatrixX<Scalar>& m1,
                                       const MatrixX<Scalar>& m2,
                                       const MatrixX<Scalar>& f,
                                       Scalar rank_tol_rel = Scalar(1e-12)) {
  if (m1.rows() != m1.cols() || m2.rows() != m2.cols())
    throw DimensionError("min_norm_split: coefficient matrices must be square");
  if (f.rows() != m1.rows() || f.cols() != m2.rows())
    throw DimensionError("min_norm_split: right-hand side shape mismatch");

  MinNormSolution<Scalar> sol;
  sol.svd_m1 = svd(m1);
  sol.svd_m2 = svd(m2);

  const auto rank_of = [&](const VectorX<Scalar>& sigma) {
    if (sigma.size() == 0) return Index(0);
    const Scalar cut = rank_tol_rel * sigma[0];
    Index r = 0;
    while (r < sigma.size() && sigma[r] > cut) ++r;
    return r;
  };
  sol.rank1 = rank_of(sol.svd_m1.sigma);
  sol.rank2 = rank_of(sol.svd_m2.sigma);
  const Index p = m1.rows();
  const Index q = m2.rows();
  const Index r1 = sol.rank1;
  const Index r2 = sol.rank2;

  const MatrixX<Scalar> ft =
      sol.svd_m1.u_left.transpose() * f * sol.svd_m2.v_right;
  sol.f11 = ft.block(0, 0, r1, r2);
  sol.f12 = ft.block(0, r2, r1, q - r2);
  sol.f21 = ft.block(r1, 0, p - r1, r2);
  sol.f22 = ft.block(r1, r2, p - r1, q - r2);

  sol.ev11.resize(r1, r2);
  sol.eu11.resize(r1, r2);
  for (Index i = 0; i < r1; ++i)
    for (Index j = 0; j < r2; ++j) {
      const auto [e, g] = min_norm_cell(sol.svd_m1.sigma[i],
                                        sol.svd_m2.sigma[j], sol.f11(i, j), i, j);
      sol.ev11(i, j) = e;
      sol.eu11(i, j) = g;
    }

  sol.ev12 = sol.f12;
  for (Index i = 0; i < r1; ++i) sol.ev12.row(i) /= sol.svd_m1.sigma[i];
  sol.eu21 = sol.f21;
  for (Index j = 0; j < r2; ++j) sol.eu21.col(j) /= sol.svd_m2.sigma[j];

  sol.ev21 = MatrixX<Scalar>::Zero(p - r1, r2);
  sol.ev22 = MatrixX<Scalar>::Zero(p - r1, q - r2);
  sol.eu12 = MatrixX<Scalar>::Zero(r1, q - r2);
  sol.eu22 = MatrixX<Scalar>::Zero(p - r1, q - r2);

  sol.achieved_norm = std::sqrt(
      sol.ev11.squaredNorm() + sol.eu11.squaredNorm() +
      sol.ev12.squaredNorm() + sol.eu21.squaredNorm());
  return sol;
}

// A-priori inequality for the truncation field in singular coordinates:
// with the closed-form norm surrogates
//   |m1|^2 -> (n_x-1)/2 (2 beta^2 + delta^2 + epsilon^2)
//   |m2|^2 -> n_t/2 (alpha^2 + gamma^2)
// the rank block of U1^T F V2 obeys
//   |f_11| <= sqrt(n_t (n_x-1)) (|u_exact| (|m1| + |m2|) + |m0|).
// The exact Frobenius norms ride along for comparison; the surrogates
// drive the right-hand side.
template <typename Scalar>
struct BoundReport {
  Scalar lhs;
  Scalar rhs;
  Scalar u1_norm_sq;  // squared Frobenius norm of the full left basis
  Scalar v2_norm_sq;
  Scalar m1_norm_sq_closed;
  Scalar m2_norm_sq_closed;
  Scalar m1_norm_sq_exact;
  Scalar m2_norm_sq_exact;
  Scalar m0_norm;
  Scalar u_exact_norm;
  bool holds;
};

template <typename Scalar>
BoundReport<Scalar> error_bound(const SylvesterSystem<Scalar>& sys,
                                const FieldMatrix<Scalar>& u_exact) {
  const auto& w = sys.coefficients;
  if (w.has_cross_terms())
    throw ValidationError("error_bound: derived for cross-free rows only");
  if (u_exact.values.rows() != sys.grid.interior() ||
      u_exact.values.cols() != sys.grid.n_t)
    throw DimensionError("error_bound: field/grid shape mismatch");

  const Scalar nx1 = Scalar(sys.grid.interior());
  const Scalar nt = Scalar(sys.grid.n_t);
  BoundReport<Scalar> rep;
  rep.u1_norm_sq = nx1;
  rep.v2_norm_sq = nt;
  rep.m1_norm_sq_closed =
      nx1 / Scalar(2) *
      (Scalar(2) * w.beta * w.beta + w.delta * w.delta + w.epsilon * w.epsilon);
  rep.m2_norm_sq_closed =
      nt / Scalar(2) * (w.alpha * w.alpha + w.gamma * w.gamma);
  rep.m1_norm_sq_exact = sys.m1.squaredNorm();
  rep.m2_norm_sq_exact = sys.m2.squaredNorm();
  rep.m0_norm = sys.m0.norm();
  rep.u_exact_norm = u_exact.values.norm();

  const MatrixX<Scalar> f = sys.m1 * u_exact.values +
                            u_exact.values * sys.m2 - sys.m0;
  const auto split = min_norm_split(sys.m1, sys.m2, f);
  rep.lhs = split.f11.norm();
  rep.rhs = std::sqrt(nt * nx1) *
            (rep.u_exact_norm * (std::sqrt(rep.m1_norm_sq_closed) +
                                 std::sqrt(rep.m2_norm_sq_closed)) +
             rep.m0_norm);
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

// CFL-number bound for the neighbor-averaging scheme after normalizing the
// weights by h, with unit signal amplitude and constant Dirichlet levels
// u0 (left) and uL (right). Kept exactly in its derived shape; it mixes a
// squared leading pair with unsquared tail terms, and its only use is
// locating the minimizing CFL number, which is 1.
template <typename Scalar>
Scalar lax_bound(Scalar cfl, Index n_x, Index n_t, Scalar u0, Scalar uL) {
  if (!(cfl > Scalar(0)))
    throw ValidationError("lax_bound: cfl must be positive");
  if (n_x < 3 || n_t < 1) throw DimensionError("lax_bound: grid too small");
  const Scalar p = Scalar(0.5) + Scalar(1) / (Scalar(2) * cfl);
  const Scalar q = Scalar(0.5) - Scalar(1) / (Scalar(2) * cfl);
  const Scalar nt = Scalar(n_t);
  return p * p * nt * nt * u0 * u0 + q * q * nt * nt * uL * uL +
         std::sqrt(Scalar(n_x - 1) / Scalar(2)) * std::sqrt(p * p + q * q) +
         std::sqrt(nt) / (std::sqrt(Scalar(2)) * cfl);
}

// Rescales a two-level cross-free row by h, so the weights lose their 1/h
// dimension, and verifies the boundary-sum form of the rescaled data norm:
// the only nonzero rows of m0 carry -epsilon u_0^n and -delta u_{n_x}^n.
template <typename Scalar>
struct NormalizedLax {
  SchemeCoefficients<Scalar> coefficients;
  MatrixX<Scalar> m0;
  Scalar norm_sq_boundary_sum;
  Scalar norm_sq_actual;
};

template <typename Scalar>
NormalizedLax<Scalar> normalize_lax(const SylvesterSystem<Scalar>& sys,
                                    const BoundaryData<Scalar>& boundary) {
  const auto& w = sys.coefficients;
  if (w.gamma != Scalar(0) || w.has_cross_terms())
    throw ValidationError("normalize_lax: needs a two-level cross-free row");
  boundary.validate(sys.grid);

  const Scalar h = sys.grid.h;
  NormalizedLax<Scalar> out;
  out.coefficients = w;
  out.coefficients.alpha = h * w.alpha;
  out.coefficients.beta = h * w.beta;
  out.coefficients.delta = h * w.delta;
  out.coefficients.epsilon = h * w.epsilon;
  out.m0 = h * sys.m0;

  Scalar left_sq = Scalar(0);
  Scalar right_sq = Scalar(0);
  for (Index n = 1; n <= sys.grid.n_t; ++n) {
    left_sq += boundary.left[n] * boundary.left[n];
    right_sq += boundary.right[n] * boundary.right[n];
  }
  out.norm_sq_boundary_sum =
      out.coefficients.delta * out.coefficients.delta * right_sq +
      out.coefficients.epsilon * out.coefficients.epsilon * left_sq;
  out.norm_sq_actual = out.m0.squaredNorm();
  return out;
}

}  // namespace fdsylv
