#pragma once

// Finite-difference schemes for the 1-D transport equation u_t + c u_x = 0
// on [0, L] x [0, T], written as one nine-weight update relation
//
//   alpha u_i^{n+1} + beta u_i^n + gamma u_i^{n-1}
//     + delta u_{i+1}^n + epsilon u_{i-1}^n
//     + zeta u_{i+1}^{n+1} + eta u_{i-1}^{n-1}
//     + theta u_{i-1}^{n+1} + vartheta u_{i+1}^{n-1} = 0.
//
// Each classical scheme is one row of weights; everything downstream
// (assembly, solvers, analysis) consumes only the weights and the grid.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "fdsylv/errors.hpp"

namespace fdsylv {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

enum class SchemeId { leapfrog, lax, lax_wendroff, crank_nicolson, custom };

inline const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::leapfrog: return "leapfrog";
    case SchemeId::lax: return "lax";
    case SchemeId::lax_wendroff: return "lax-wendroff";
    case SchemeId::crank_nicolson: return "crank-nicolson";
    case SchemeId::custom: return "custom";
  }
  return "unknown";
}

// Uniform space-time grid: x_i = i h (i = 0..n_x), t_n = n tau (n = 0..n_t).
// The interior unknowns form an (n_x - 1) x n_t field, one column per time
// level 1..n_t. Construction validates positivity and minimum sizes; the
// even-dimension restriction needed by the matrix-equation analysis is
// checked where that analysis begins (see assembly.hpp), so march-only uses
// such as the CFL sweep may pick any n_x.
template <typename Scalar>
struct Grid {
  Scalar h = Scalar(0);
  Scalar tau = Scalar(0);
  Scalar c = Scalar(0);
  Index n_x = 0;
  Index n_t = 0;

  static Grid from_steps(Scalar h, Scalar tau, Scalar c, Index n_x, Index n_t) {
    Grid g{h, tau, c, n_x, n_t};
    g.validate();
    return g;
  }

  static Grid from_domain(Scalar length, Scalar horizon, Scalar c, Index n_x,
                          Index n_t) {
    if (!(length > Scalar(0)) || !(horizon > Scalar(0)))
      throw ValidationError("grid: domain lengths must be positive");
    if (n_x < 3 || n_t < 2) throw DimensionError("grid: n_x >= 3, n_t >= 2 required");
    return from_steps(length / Scalar(n_x), horizon / Scalar(n_t), c, n_x, n_t);
  }

  void validate() const {
    if (!(h > Scalar(0)) || !(tau > Scalar(0)))
      throw ValidationError("grid: step sizes must be positive");
    if (!std::isfinite(static_cast<double>(c)))
      throw ValidationError("grid: wave speed must be finite");
    if (n_x < 3 || n_t < 2) throw DimensionError("grid: n_x >= 3, n_t >= 2 required");
  }

  Scalar length() const { return h * Scalar(n_x); }
  Scalar horizon() const { return tau * Scalar(n_t); }
  Scalar cfl() const { return c * tau / h; }
  Index interior() const { return n_x - 1; }

  // The block-pairing arguments downstream need an even interior width and
  // an even number of time levels.
  bool even_dims() const { return interior() % 2 == 0 && n_t % 2 == 0; }
};

template <typename Scalar>
inline void require_even_dims(const Grid<Scalar>& g, const char* where) {
  if (!g.even_dims())
    throw DimensionError(std::string(where) +
                         ": n_x - 1 and n_t must both be even");
}

// One row of update weights. Named rows come from build_coefficients;
// custom rows are aggregate-initialized directly.
template <typename Scalar>
struct SchemeCoefficients {
  SchemeId id = SchemeId::custom;
  Scalar alpha = Scalar(0);
  Scalar beta = Scalar(0);
  Scalar gamma = Scalar(0);
  Scalar delta = Scalar(0);
  Scalar epsilon = Scalar(0);
  Scalar zeta = Scalar(0);
  Scalar eta = Scalar(0);
  Scalar theta = Scalar(0);
  Scalar vartheta = Scalar(0);

  // Any weight on a time level n-1 makes the scheme three-level: it cannot
  // produce its own first step.
  bool three_level() const {
    return gamma != Scalar(0) || eta != Scalar(0) || vartheta != Scalar(0);
  }
  // Any weight on a spatial neighbor at level n+1 makes the advance implicit.
  bool implicit_advance() const {
    return zeta != Scalar(0) || theta != Scalar(0);
  }
  bool has_cross_terms() const {
    return zeta != Scalar(0) || eta != Scalar(0) || theta != Scalar(0) ||
           vartheta != Scalar(0);
  }

  void validate() const {
    const Scalar w[9] = {alpha, beta,  gamma, delta,   epsilon,
                         zeta,  eta,   theta, vartheta};
    bool all_zero = true;
    for (Scalar v : w) {
      if (!std::isfinite(static_cast<double>(v)))
        throw ValidationError("coefficients: weights must be finite");
      if (v != Scalar(0)) all_zero = false;
    }
    if (all_zero)
      throw ValidationError("coefficients: all nine weights are zero");
    // Named rows carry structural guarantees the assembly relies on.
    if (id == SchemeId::lax || id == SchemeId::lax_wendroff ||
        id == SchemeId::crank_nicolson) {
      if (gamma != Scalar(0))
        throw ValidationError("coefficients: named two-level row has gamma != 0");
    }
    if (id != SchemeId::crank_nicolson && id != SchemeId::custom) {
      if (has_cross_terms())
        throw ValidationError(
            "coefficients: named row has unexpected cross weights");
    }
  }
};

// The classical weight rows. sigma = c tau / h is the CFL number.
template <typename Scalar>
SchemeCoefficients<Scalar> build_coefficients(SchemeId id,
                                              const Grid<Scalar>& grid) {
  grid.validate();
  const Scalar h = grid.h;
  const Scalar tau = grid.tau;
  const Scalar c = grid.c;
  const Scalar sigma = grid.cfl();

  SchemeCoefficients<Scalar> w;
  w.id = id;
  switch (id) {
    case SchemeId::leapfrog:
      // Centered in both time and space.
      w.alpha = Scalar(1) / (Scalar(2) * tau);
      w.gamma = -Scalar(1) / (Scalar(2) * tau);
      w.delta = c / (Scalar(2) * h);
      w.epsilon = -c / (Scalar(2) * h);
      break;
    case SchemeId::lax:
      // Forward time, centered space, with the neighbor average replacing
      // u_i^n.
      w.alpha = Scalar(1) / tau;
      w.delta = -Scalar(1) / (Scalar(2) * tau) + c / (Scalar(2) * h);
      w.epsilon = -Scalar(1) / (Scalar(2) * tau) - c / (Scalar(2) * h);
      break;
    case SchemeId::lax_wendroff:
      // Second order in space and time via the sigma-weighted neighbors.
      w.alpha = Scalar(1) / tau;
      w.beta = -Scalar(1) / tau + c * c * tau / (h * h);
      w.delta = (Scalar(1) - sigma) * c / (Scalar(2) * h);
      w.epsilon = -(Scalar(1) + sigma) * c / (Scalar(2) * h);
      break;
    case SchemeId::crank_nicolson:
      w.alpha = Scalar(1) / tau + c / (h * h);
      w.beta = -Scalar(1) / tau + c / (h * h);
      w.delta = -c / (h * h);
      w.epsilon = -c / (h * h);
      w.eta = -c / (h * h);
      w.theta = -c / (h * h);
      break;
    case SchemeId::custom:
      throw ValidationError(
          "build_coefficients: custom rows are constructed directly");
  }
  w.validate();
  return w;
}

// Traveling cosine used as the manufactured exact solution:
// u(x, t) = cos(2 pi / wavelength * (x - c t)), amplitude fixed at one.
template <typename Scalar>
struct SignalSpec {
  Scalar wavelength = Scalar(1);

  void validate() const {
    if (!(wavelength > Scalar(0)))
      throw ValidationError("signal: wavelength must be positive");
  }
};

template <typename Scalar>
Scalar exact_field(const SignalSpec<Scalar>& signal, const Grid<Scalar>& grid,
                   Scalar x, Scalar t) {
  signal.validate();
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  return std::cos(two_pi / signal.wavelength * (x - grid.c * t));
}

// Dirichlet boundary columns, the initial row, and (optionally) the first
// interior time level for schemes that cannot self-start.
//   left[n]  = u_0^n,     n = 0..n_t
//   right[n] = u_{n_x}^n, n = 0..n_t
//   initial[i] = u_i^0,   i = 0..n_x
//   startup[i] = u_i^1,   i = 0..n_x (includes its boundary endpoints)
template <typename Scalar>
struct BoundaryData {
  VectorX<Scalar> left;
  VectorX<Scalar> right;
  VectorX<Scalar> initial;
  std::optional<VectorX<Scalar>> startup;

  void validate(const Grid<Scalar>& grid) const {
    if (left.size() != grid.n_t + 1 || right.size() != grid.n_t + 1)
      throw DimensionError("boundary: left/right need n_t + 1 samples");
    if (initial.size() != grid.n_x + 1)
      throw DimensionError("boundary: initial row needs n_x + 1 samples");
    if (startup && startup->size() != grid.n_x + 1)
      throw DimensionError("boundary: startup row needs n_x + 1 samples");
    // The grid corners are shared samples and must agree exactly.
    if (left[0] != initial[0] || right[0] != initial[grid.n_x])
      throw ValidationError("boundary: corner samples disagree with initial row");
    if (startup &&
        ((*startup)[0] != left[1] || (*startup)[grid.n_x] != right[1]))
      throw ValidationError("boundary: startup endpoints disagree with columns");
  }

  // Samples every line from the exact signal, startup included, so any
  // scheme can run on it unchanged.
  static BoundaryData sample_exact(const SignalSpec<Scalar>& signal,
                                   const Grid<Scalar>& grid) {
    grid.validate();
    signal.validate();
    BoundaryData b;
    b.left.resize(grid.n_t + 1);
    b.right.resize(grid.n_t + 1);
    for (Index n = 0; n <= grid.n_t; ++n) {
      const Scalar t = grid.tau * Scalar(n);
      b.left[n] = exact_field(signal, grid, Scalar(0), t);
      b.right[n] = exact_field(signal, grid, grid.length(), t);
    }
    b.initial.resize(grid.n_x + 1);
    VectorX<Scalar> first(grid.n_x + 1);
    for (Index i = 0; i <= grid.n_x; ++i) {
      const Scalar x = grid.h * Scalar(i);
      b.initial[i] = exact_field(signal, grid, x, Scalar(0));
      first[i] = exact_field(signal, grid, x, grid.tau);
    }
    b.startup = std::move(first);
    return b;
  }

  static BoundaryData zero(const Grid<Scalar>& grid) {
    grid.validate();
    BoundaryData b;
    b.left = VectorX<Scalar>::Zero(grid.n_t + 1);
    b.right = VectorX<Scalar>::Zero(grid.n_t + 1);
    b.initial = VectorX<Scalar>::Zero(grid.n_x + 1);
    b.startup = VectorX<Scalar>::Zero(grid.n_x + 1);
    return b;
  }
};

}  // namespace fdsylv
