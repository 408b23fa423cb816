// Command-line front end: assemble and solve the matrix form of a
// difference scheme, analyze its coefficient matrices, sweep the CFL
// number, evaluate the CFL bound, and cross-check the Sylvester solver
// against the vectorized oracle. Exit codes: 0 success, 1 bad
// configuration, 2 mathematical degeneracy.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdsylv/analysis.hpp"
#include "fdsylv/assembly.hpp"
#include "fdsylv/dense.hpp"
#include "fdsylv/errors.hpp"
#include "fdsylv/scheme.hpp"
#include "fdsylv/sylvester.hpp"

namespace {

using namespace fdsylv;

// All floats are printed with 17 significant digits so reruns are
// byte-identical and round-trip exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(const std::complex<double>& z) {
  return "(" + fmt17(z.real()) + ", " + fmt17(z.imag()) + ")";
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  return out;
}

struct ProblemFlags {
  long long n_x = 0;
  long long n_t = 0;
  double length = 0.0;
  double horizon = 0.0;
  double step_h = 0.0;
  double step_tau = 0.0;
  double c = 1.0;
  double wavelength = 1.0;
  double tol = 1e-8;
  std::string scheme = "lax";
  bool zero_data = false;
  std::string out;
  std::array<double, 9> weights{};
  CLI::Option* opt_length = nullptr;
  CLI::Option* opt_horizon = nullptr;
  CLI::Option* opt_h = nullptr;
  CLI::Option* opt_tau = nullptr;
  std::array<CLI::Option*, 9> weight_opts{};
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f, bool out_required) {
  // The spatial-step flag is spelled --h, so help stays long-form only
  // here; the default -h short form would collide.
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--scheme", f.scheme, "update rule")
      ->check(CLI::IsMember({"leapfrog", "lax", "lax-wendroff",
                             "crank-nicolson", "custom"}))
      ->capture_default_str();
  cmd->add_option("--nx", f.n_x, "number of spatial steps")->required();
  cmd->add_option("--nt", f.n_t, "number of time levels")->required();
  f.opt_length = cmd->add_option("--length", f.length, "domain length");
  f.opt_horizon = cmd->add_option("--horizon", f.horizon, "final time");
  f.opt_h = cmd->add_option("--h", f.step_h, "spatial step");
  f.opt_tau = cmd->add_option("--tau", f.step_tau, "time step");
  cmd->add_option("--c", f.c, "transport speed")->capture_default_str();
  cmd->add_option("--wavelength", f.wavelength, "signal wavelength")
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "relative spectra-gap tolerance")
      ->capture_default_str();
  cmd->add_flag("--zero-data", f.zero_data,
                "zero boundary and initial data instead of the sampled signal");
  auto* out = cmd->add_option("--out", f.out, "CSV output path");
  if (out_required) out->required();
  const std::array<const char*, 9> names = {
      "--alpha", "--beta", "--gamma",    "--delta", "--epsilon",
      "--zeta",  "--eta",  "--theta",    "--vartheta"};
  for (std::size_t k = 0; k < names.size(); ++k)
    f.weight_opts[k] = cmd->add_option(
        names[k], f.weights[k], "custom stencil weight (with --scheme custom)");
}

Grid<double> make_grid(const ProblemFlags& f) {
  const bool domain = f.opt_length->count() > 0 || f.opt_horizon->count() > 0;
  const bool steps = f.opt_h->count() > 0 || f.opt_tau->count() > 0;
  if (domain == steps)
    throw ValidationError(
        "give exactly one of --length/--horizon or --h/--tau");
  if (domain) {
    if (f.opt_length->count() == 0 || f.opt_horizon->count() == 0)
      throw ValidationError("--length and --horizon go together");
    return Grid<double>::from_domain(f.length, f.horizon, f.c,
                                     static_cast<Index>(f.n_x),
                                     static_cast<Index>(f.n_t));
  }
  if (f.opt_h->count() == 0 || f.opt_tau->count() == 0)
    throw ValidationError("--h and --tau go together");
  return Grid<double>::from_steps(f.step_h, f.step_tau, f.c,
                                  static_cast<Index>(f.n_x),
                                  static_cast<Index>(f.n_t));
}

SchemeId scheme_from_name(const std::string& name) {
  if (name == "leapfrog") return SchemeId::leapfrog;
  if (name == "lax") return SchemeId::lax;
  if (name == "lax-wendroff") return SchemeId::lax_wendroff;
  if (name == "crank-nicolson") return SchemeId::crank_nicolson;
  return SchemeId::custom;
}

SchemeCoefficients<double> make_weights(const ProblemFlags& f,
                                        const Grid<double>& grid) {
  bool any_weight = false;
  for (const auto* opt : f.weight_opts) any_weight |= opt->count() > 0;
  if (f.scheme == "custom") {
    SchemeCoefficients<double> w;
    w.id = SchemeId::custom;
    w.alpha = f.weights[0];
    w.beta = f.weights[1];
    w.gamma = f.weights[2];
    w.delta = f.weights[3];
    w.epsilon = f.weights[4];
    w.zeta = f.weights[5];
    w.eta = f.weights[6];
    w.theta = f.weights[7];
    w.vartheta = f.weights[8];
    w.validate();
    return w;
  }
  if (any_weight)
    throw ValidationError("stencil weight flags need --scheme custom");
  return build_coefficients(scheme_from_name(f.scheme), grid);
}

BoundaryData<double> make_boundary(const ProblemFlags& f,
                                   const SignalSpec<double>& signal,
                                   const Grid<double>& grid) {
  return f.zero_data ? BoundaryData<double>::zero(grid)
                     : BoundaryData<double>::sample_exact(signal, grid);
}

int run_solve(const ProblemFlags& f) {
  const Grid<double> grid = make_grid(f);
  const auto w = make_weights(f, grid);
  const SignalSpec<double> signal{f.wavelength};
  const auto boundary = make_boundary(f, signal, grid);
  const auto sys = assemble_system(w, grid, boundary);

  const auto uq = uniqueness_check(sys, f.tol);
  std::cout << "uniqueness: closed-form " << to_string(uq.formula_verdict)
            << " (gap " << fmt17(uq.formula_gap) << "), spectral "
            << to_string(uq.spectral_verdict) << " (gap "
            << fmt17(uq.spectral_gap) << ")\n";
  if (uq.formula_verdict == Uniqueness::non_unique ||
      uq.spectral_verdict == Uniqueness::non_unique) {
    std::cout << "the matrix equation has no unique solution; not solving\n";
    return 2;
  }

  SolveOptions<double> opts;
  opts.gap_tol_rel = f.tol;
  const auto rep = solve_bartels_stewart(sys.m1, sys.m2, sys.m0, opts);
  const auto reference = reference_timestep(w, grid, boundary);
  const MatrixX<double> diff = rep.x - reference.values;
  const double solution_residual =
      residual(sys, FieldMatrix<double>{rep.x, FieldRole::numeric})
          .values.norm();
  const double reference_residual = residual(sys, reference).values.norm();

  auto csv = open_csv(f.out);
  csv << "record,i,n,value\n";
  const auto block = [&](const char* name, const MatrixX<double>& m) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index n = 0; n < m.cols(); ++n)
        csv << name << ',' << i + 1 << ',' << n + 1 << ','
            << fmt17(m(i, n)) << '\n';
  };
  block("solution", rep.x);
  block("reference", reference.values);
  block("difference", diff);
  csv << "residual_norm_solution,0,0," << fmt17(solution_residual) << '\n';
  csv << "residual_norm_reference,0,0," << fmt17(reference_residual) << '\n';
  csv << "spectra_gap,0,0," << fmt17(rep.spectra_gap) << '\n';

  std::cout << "solution residual " << fmt17(solution_residual)
            << ", reference residual " << fmt17(reference_residual)
            << ", field difference " << fmt17(diff.norm()) << "\n";
  std::cout << "wrote " << f.out << "\n";
  return 0;
}

int run_analyze(const ProblemFlags& f) {
  const Grid<double> grid = make_grid(f);
  const auto w = make_weights(f, grid);
  const SignalSpec<double> signal{f.wavelength};
  const auto boundary = make_boundary(f, signal, grid);
  const auto sys = assemble_system(w, grid, boundary);

  const auto uq = uniqueness_check(sys, f.tol);
  const auto inv = invertibility_check_m1(sys);
  const auto nil = nilpotency_order(sys);
  const auto sv = singular_values_closed_form(w, grid);

  std::cout << "scheme " << f.scheme << ", n_x " << grid.n_x << ", n_t "
            << grid.n_t << ", h " << fmt17(grid.h) << ", tau "
            << fmt17(grid.tau) << ", c " << fmt17(grid.c) << ", cfl "
            << fmt17(grid.cfl()) << "\n";

  std::cout << "uniqueness\n";
  std::cout << "  closed-form verdict " << to_string(uq.formula_verdict)
            << ", roots m1 " << fmt_complex(uq.formula_roots_m1[0]) << " "
            << fmt_complex(uq.formula_roots_m1[1]) << ", roots m2 "
            << fmt_complex(uq.formula_roots_m2[0]) << " "
            << fmt_complex(uq.formula_roots_m2[1]) << ", gap "
            << fmt17(uq.formula_gap) << "\n";
  std::cout << "  spectral verdict " << to_string(uq.spectral_verdict)
            << ", gap " << fmt17(uq.spectral_gap) << "\n";

  std::cout << "invertibility of m1\n";
  std::cout << "  determinant closed form " << fmt17(inv.closed_form_det)
            << " (" << (inv.closed_form_invertible ? "invertible" : "singular")
            << "), recurrence " << fmt17(inv.recurrence_det) << " ("
            << (inv.recurrence_invertible ? "invertible" : "singular")
            << ")\n";
  if (inv.lax_wendroff_condition) {
    const auto& cond = *inv.lax_wendroff_condition;
    std::cout << "  second-order condition beta^2 " << fmt17(cond.lhs)
              << " vs delta*epsilon " << fmt17(cond.rhs) << " -> "
              << (cond.satisfied ? "satisfied" : "violated") << "\n";
  }

  std::cout << "nilpotency of m2\n";
  const char* kind = nil.kind == NilpotencyReport<double>::Kind::nilpotent
                         ? "nilpotent"
                         : (nil.kind == NilpotencyReport<double>::Kind::degenerate
                                ? "degenerate"
                                : "none");
  std::cout << "  kind " << kind << ", order " << nil.order
            << ", decomposition exact "
            << (nil.decomposition_exact ? "yes" : "no") << "\n";

  std::cout << "singular values (squared closed form vs computed sigma)\n";
  std::cout << "  m1 closed pair " << fmt17(sv.m1_minus) << " / "
            << fmt17(sv.m1_plus) << " (multiplicity " << sv.m1_multiplicity
            << "), max deviation " << fmt17(sv.max_deviation_m1) << "\n";
  std::cout << "  m2 closed pair " << fmt17(sv.m2_gamma_sq) << " / "
            << fmt17(sv.m2_alpha_sq) << " (multiplicity " << sv.m2_multiplicity
            << "), max deviation " << fmt17(sv.max_deviation_m2) << "\n";
  std::cout << "  sigma m1";
  for (Index k = 0; k < sv.exact_sigma_m1.size(); ++k)
    std::cout << ' ' << fmt17(sv.exact_sigma_m1[k]);
  std::cout << "\n  sigma m2";
  for (Index k = 0; k < sv.exact_sigma_m2.size(); ++k)
    std::cout << ' ' << fmt17(sv.exact_sigma_m2[k]);
  std::cout << "\n";

  const bool with_bound = !w.has_cross_terms();
  BoundReport<double> bnd{};
  if (with_bound) {
    bnd = error_bound(sys, exact_matrix(signal, grid));
    std::cout << "truncation bound\n";
    std::cout << "  lhs " << fmt17(bnd.lhs) << " <= rhs " << fmt17(bnd.rhs)
              << " -> " << (bnd.holds ? "holds" : "violated") << "\n";
    std::cout << "  |m1|^2 closed " << fmt17(bnd.m1_norm_sq_closed)
              << " exact " << fmt17(bnd.m1_norm_sq_exact) << ", |m2|^2 closed "
              << fmt17(bnd.m2_norm_sq_closed) << " exact "
              << fmt17(bnd.m2_norm_sq_exact) << "\n";
  } else {
    std::cout << "truncation bound skipped: cross weights present\n";
  }

  if (!f.out.empty()) {
    auto csv = open_csv(f.out);
    csv << "key,value\n";
    const auto row = [&](const std::string& key, const std::string& value) {
      csv << key << ',' << value << '\n';
    };
    const auto num = [&](const std::string& key, double value) {
      row(key, fmt17(value));
    };
    row("scheme", f.scheme);
    num("n_x", static_cast<double>(grid.n_x));
    num("n_t", static_cast<double>(grid.n_t));
    num("h", grid.h);
    num("tau", grid.tau);
    num("c", grid.c);
    num("cfl", grid.cfl());
    row("uniqueness_closed_form", to_string(uq.formula_verdict));
    row("uniqueness_spectral", to_string(uq.spectral_verdict));
    for (int k = 0; k < 2; ++k) {
      num("root_m1_" + std::to_string(k) + "_re", uq.formula_roots_m1[k].real());
      num("root_m1_" + std::to_string(k) + "_im", uq.formula_roots_m1[k].imag());
      num("root_m2_" + std::to_string(k) + "_re", uq.formula_roots_m2[k].real());
      num("root_m2_" + std::to_string(k) + "_im", uq.formula_roots_m2[k].imag());
    }
    num("gap_closed_form", uq.formula_gap);
    num("gap_spectral", uq.spectral_gap);
    num("det_m1_closed_form", inv.closed_form_det);
    num("det_m1_recurrence", inv.recurrence_det);
    num("det_m1_closed_form_scaled", inv.closed_form_det_scaled);
    num("det_m1_recurrence_scaled", inv.recurrence_det_scaled);
    row("m1_invertible_closed_form",
        inv.closed_form_invertible ? "yes" : "no");
    row("m1_invertible_recurrence",
        inv.recurrence_invertible ? "yes" : "no");
    if (inv.lax_wendroff_condition) {
      num("second_order_lhs", inv.lax_wendroff_condition->lhs);
      num("second_order_rhs", inv.lax_wendroff_condition->rhs);
      row("second_order_satisfied",
          inv.lax_wendroff_condition->satisfied ? "yes" : "no");
    }
    row("nilpotency_kind", kind);
    num("nilpotency_order", static_cast<double>(nil.order));
    row("nilpotency_decomposition_exact",
        nil.decomposition_exact ? "yes" : "no");
    num("sv_m1_closed_minus", sv.m1_minus);
    num("sv_m1_closed_plus", sv.m1_plus);
    num("sv_m1_multiplicity", static_cast<double>(sv.m1_multiplicity));
    num("sv_m2_closed_gamma_sq", sv.m2_gamma_sq);
    num("sv_m2_closed_alpha_sq", sv.m2_alpha_sq);
    num("sv_m2_multiplicity", static_cast<double>(sv.m2_multiplicity));
    num("sv_m1_max_deviation", sv.max_deviation_m1);
    num("sv_m2_max_deviation", sv.max_deviation_m2);
    for (Index k = 0; k < sv.exact_sigma_m1.size(); ++k)
      num("sigma_m1_" + std::to_string(k), sv.exact_sigma_m1[k]);
    for (Index k = 0; k < sv.exact_sigma_m2.size(); ++k)
      num("sigma_m2_" + std::to_string(k), sv.exact_sigma_m2[k]);
    for (Index k = 0; k < static_cast<Index>(uq.spectrum_m1.size()); ++k) {
      num("lambda_m1_" + std::to_string(k) + "_re",
          uq.spectrum_m1[static_cast<std::size_t>(k)].real());
      num("lambda_m1_" + std::to_string(k) + "_im",
          uq.spectrum_m1[static_cast<std::size_t>(k)].imag());
    }
    for (Index k = 0; k < static_cast<Index>(uq.spectrum_m2.size()); ++k) {
      num("lambda_m2_" + std::to_string(k) + "_re",
          uq.spectrum_m2[static_cast<std::size_t>(k)].real());
      num("lambda_m2_" + std::to_string(k) + "_im",
          uq.spectrum_m2[static_cast<std::size_t>(k)].imag());
    }
    if (with_bound) {
      num("bound_lhs", bnd.lhs);
      num("bound_rhs", bnd.rhs);
      row("bound_holds", bnd.holds ? "yes" : "no");
      num("m1_norm_sq_closed", bnd.m1_norm_sq_closed);
      num("m1_norm_sq_exact", bnd.m1_norm_sq_exact);
      num("m2_norm_sq_closed", bnd.m2_norm_sq_closed);
      num("m2_norm_sq_exact", bnd.m2_norm_sq_exact);
      num("m0_norm", bnd.m0_norm);
      num("u_exact_norm", bnd.u_exact_norm);
    }
    std::cout << "wrote " << f.out << "\n";
  }
  return 0;
}

struct SweepFlags {
  long long n_x = 64;
  long long n_t = 50;
  double length = 1.0;
  double wavelength = 1.0;
  double c = 1.0;
  std::vector<double> cfl = {0.7, 0.9, 1.0};
  std::string out;
};

int run_sweep(const SweepFlags& f) {
  if (f.cfl.empty()) throw ValidationError("sweep needs at least one --cfl");
  std::vector<double> cfls = f.cfl;
  std::sort(cfls.begin(), cfls.end());
  for (double s : cfls)
    if (!(s > 0.0) || s > 1.0)
      throw ValidationError("sweep cfl values must lie in (0, 1]");

  auto csv = open_csv(f.out);
  csv << "cfl,n,l2_error\n";
  for (double s : cfls) {
    const double h = f.length / static_cast<double>(f.n_x);
    const double tau = s * h / f.c;
    const Grid<double> grid = Grid<double>::from_steps(
        h, tau, f.c, static_cast<Index>(f.n_x), static_cast<Index>(f.n_t));
    const auto w = build_coefficients(SchemeId::lax, grid);
    const SignalSpec<double> signal{f.wavelength};
    const auto boundary = BoundaryData<double>::sample_exact(signal, grid);
    const auto field = reference_timestep(w, grid, boundary);
    const auto exact = exact_matrix(signal, grid);
    const MatrixX<double> e = field.values - exact.values;
    double worst = 0.0;
    for (Index n = 1; n <= grid.n_t; ++n) {
      const double l2 = e.col(n - 1).norm() * std::sqrt(h);
      worst = std::max(worst, l2);
      csv << fmt17(s) << ',' << n << ',' << fmt17(l2) << '\n';
    }
    std::cout << "cfl " << fmt17(s) << ": max level error " << fmt17(worst)
              << ", final level error "
              << fmt17(e.col(grid.n_t - 1).norm() * std::sqrt(h)) << "\n";
  }
  std::cout << "wrote " << f.out << "\n";
  return 0;
}

struct BoundFlags {
  long long n_x = 64;
  long long n_t = 50;
  double u0 = 1.0;
  double uL = 1.0;
  std::vector<double> cfl;
  std::string out;
};

int run_bound(const BoundFlags& f) {
  std::vector<double> cfls = f.cfl;
  if (cfls.empty())
    for (int k = 1; k <= 20; ++k) cfls.push_back(0.05 * k);
  std::sort(cfls.begin(), cfls.end());

  std::size_t best = 0;
  std::vector<double> values(cfls.size());
  for (std::size_t k = 0; k < cfls.size(); ++k) {
    values[k] = lax_bound(cfls[k], static_cast<Index>(f.n_x),
                          static_cast<Index>(f.n_t), f.u0, f.uL);
    if (values[k] < values[best]) best = k;
  }

  for (std::size_t k = 0; k < cfls.size(); ++k)
    std::cout << "cfl " << fmt17(cfls[k]) << ": bound " << fmt17(values[k])
              << "\n";
  std::cout << "minimum at cfl " << fmt17(cfls[best]) << " with bound "
            << fmt17(values[best]) << "\n";

  if (!f.out.empty()) {
    auto csv = open_csv(f.out);
    csv << "cfl,bound\n";
    for (std::size_t k = 0; k < cfls.size(); ++k)
      csv << fmt17(cfls[k]) << ',' << fmt17(values[k]) << '\n';
    std::cout << "wrote " << f.out << "\n";
  }
  return 0;
}

struct OracleFlags {
  long long count = 50;
  unsigned long long seed = 2024;
  long long maxdim = 16;
  double tol = 1e-9;
  std::string out;
};

int run_oracle(const OracleFlags& f) {
  if (f.count < 1) throw ValidationError("oracle needs --count >= 1");
  if (f.maxdim < 2 || f.maxdim > 64)
    throw ValidationError("oracle needs --maxdim in [2, 64]");

  std::vector<std::string> rows;
  double worst = 0.0;
  for (long long k = 0; k < f.count; ++k) {
    std::mt19937_64 rng(f.seed + static_cast<unsigned long long>(k));
    std::uniform_int_distribution<Index> dim(2, static_cast<Index>(f.maxdim));
    std::normal_distribution<double> gauss;
    const auto fill = [&](Index rows_, Index cols_) {
      MatrixX<double> m(rows_, cols_);
      for (Index i = 0; i < rows_; ++i)
        for (Index j = 0; j < cols_; ++j) m(i, j) = gauss(rng);
      return m;
    };

    // Resample until the two spectra are comfortably separated, so the
    // comparison never trips the solver's own non-uniqueness guard.
    MatrixX<double> a, b;
    Index m = 0, n = 0;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100)
        throw ConvergenceError("oracle: no well-separated pair found", 0.0);
      m = dim(rng);
      n = dim(rng);
      a = fill(m, m);
      b = fill(n, n);
      const auto ea = real_schur(a).eigenvalues;
      const auto eb = real_schur(b).eigenvalues;
      double gap = std::numeric_limits<double>::infinity();
      double scale = 0.0;
      for (const auto& la : ea) scale = std::max(scale, std::abs(la));
      for (const auto& lb : eb) scale = std::max(scale, std::abs(lb));
      for (const auto& la : ea)
        for (const auto& lb : eb) gap = std::min(gap, std::abs(la + lb));
      if (gap > 1e-6 * std::max(scale, 1.0)) break;
    }
    const MatrixX<double> c = fill(m, n);

    const auto rep = solve_bartels_stewart(a, b, c);
    const MatrixX<double> xk = kronecker_solve(a, b, c);
    const double rel =
        (rep.x - xk).norm() / std::max(xk.norm(), 1e-300);
    worst = std::max(worst, rel);
    rows.push_back(std::to_string(f.seed + static_cast<unsigned long long>(k)) +
                   ',' + std::to_string(m) + ',' + std::to_string(n) + ',' +
                   fmt17(rel));
  }

  for (const auto& r : rows) std::cout << r << "\n";
  std::cout << "largest relative difference " << fmt17(worst) << " over "
            << f.count << " instances (tolerance " << fmt17(f.tol) << ")\n";

  if (!f.out.empty()) {
    auto csv = open_csv(f.out);
    csv << "seed,m,n,rel_error\n";
    for (const auto& r : rows) csv << r << '\n';
    std::cout << "wrote " << f.out << "\n";
  }
  return worst <= f.tol ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-equation form of one-dimensional transport schemes"};
  app.require_subcommand(1);

  ProblemFlags solve_flags;
  ProblemFlags analyze_flags;
  SweepFlags sweep_flags;
  BoundFlags bound_flags;
  OracleFlags oracle_flags;

  auto* solve_cmd = app.add_subcommand(
      "solve", "assemble the matrix equation, solve it, compare with time "
               "stepping");
  add_problem_flags(solve_cmd, solve_flags, true);

  auto* analyze_cmd = app.add_subcommand(
      "analyze", "uniqueness, invertibility, nilpotency, singular values, "
                 "truncation bound");
  add_problem_flags(analyze_cmd, analyze_flags, false);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "march the neighbor-averaging scheme over CFL numbers and "
               "record per-level errors");
  sweep_cmd->add_option("--nx", sweep_flags.n_x, "number of spatial steps")
      ->capture_default_str();
  sweep_cmd->add_option("--nt", sweep_flags.n_t, "number of time levels")
      ->capture_default_str();
  sweep_cmd->add_option("--length", sweep_flags.length, "domain length")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--wavelength", sweep_flags.wavelength, "signal wavelength")
      ->capture_default_str();
  sweep_cmd->add_option("--c", sweep_flags.c, "transport speed")
      ->capture_default_str();
  sweep_cmd->add_option("--cfl", sweep_flags.cfl,
                        "CFL numbers to sweep (repeatable)");
  sweep_cmd->add_option("--out", sweep_flags.out, "CSV output path")
      ->required();

  auto* bound_cmd = app.add_subcommand(
      "bound", "evaluate the CFL error bound and report its minimizer");
  bound_cmd->add_option("--nx", bound_flags.n_x, "number of spatial steps")
      ->capture_default_str();
  bound_cmd->add_option("--nt", bound_flags.n_t, "number of time levels")
      ->capture_default_str();
  bound_cmd->add_option("--u0", bound_flags.u0, "left boundary level")
      ->capture_default_str();
  bound_cmd->add_option("--uL", bound_flags.uL, "right boundary level")
      ->capture_default_str();
  bound_cmd->add_option("--cfl", bound_flags.cfl,
                        "CFL grid (default 0.05 k, k = 1..20)");
  bound_cmd->add_option("--out", bound_flags.out, "CSV output path");

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "cross-check the Sylvester solver against the vectorized "
                "solve on random instances");
  oracle_cmd->add_option("--count", oracle_flags.count, "number of instances")
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oracle_flags.seed, "base random seed")
      ->capture_default_str();
  oracle_cmd->add_option("--maxdim", oracle_flags.maxdim, "largest dimension")
      ->capture_default_str();
  oracle_cmd->add_option("--tol", oracle_flags.tol, "pass tolerance")
      ->capture_default_str();
  oracle_cmd->add_option("--out", oracle_flags.out, "CSV output path");

  try {
    app.parse(argc, argv);
    if (*solve_cmd) return run_solve(solve_flags);
    if (*analyze_cmd) return run_analyze(analyze_flags);
    if (*sweep_cmd) return run_sweep(sweep_flags);
    if (*bound_cmd) return run_bound(bound_flags);
    return run_oracle(oracle_flags);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const fdsylv::NonUniqueError& e) {
    std::cerr << e.what() << " (gap " << fmt17(e.gap) << ")\n";
    return 2;
  } catch (const fdsylv::ConvergenceError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const fdsylv::SingularMatrixError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const fdsylv::DegeneratePairError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const fdsylv::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
