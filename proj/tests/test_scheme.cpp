#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdsylv/scheme.hpp"

using namespace fdsylv;

TEST_CASE("grid factories and derived quantities") {
  const auto g = Grid<double>::from_steps(0.25, 0.2, 1.0, 5, 4);
  CHECK(g.length() == doctest::Approx(1.25));
  CHECK(g.horizon() == doctest::Approx(0.8));
  CHECK(g.cfl() == doctest::Approx(0.8));
  CHECK(g.interior() == 4);
  CHECK(g.even_dims());

  const auto gd = Grid<double>::from_domain(1.0, 0.5, 2.0, 4, 10);
  CHECK(gd.h == doctest::Approx(0.25));
  CHECK(gd.tau == doctest::Approx(0.05));
  CHECK(gd.cfl() == doctest::Approx(0.4));
  CHECK_FALSE(gd.even_dims());
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid<double>::from_steps(0.0, 0.1, 1.0, 5, 4),
                  ValidationError);
  CHECK_THROWS_AS(Grid<double>::from_steps(0.1, -0.1, 1.0, 5, 4),
                  ValidationError);
  CHECK_THROWS_AS(Grid<double>::from_steps(0.1, 0.1, 1.0, 2, 4),
                  DimensionError);
  CHECK_THROWS_AS(Grid<double>::from_steps(0.1, 0.1, 1.0, 5, 1),
                  DimensionError);
  CHECK_THROWS_AS(
      Grid<double>::from_steps(0.1, 0.1, std::nan(""), 5, 4), ValidationError);

  const auto odd = Grid<double>::from_steps(0.25, 0.2, 1.0, 4, 4);
  CHECK_THROWS_AS(require_even_dims(odd, "here"), DimensionError);
  CHECK_NOTHROW(
      require_even_dims(Grid<double>::from_steps(0.25, 0.2, 1.0, 5, 4), "ok"));
}

TEST_CASE("neighbor-averaging weights") {
  const auto g = Grid<double>::from_steps(0.1, 0.1, 1.0, 5, 4);
  const auto w = build_coefficients(SchemeId::lax, g);
  CHECK(w.alpha == doctest::Approx(10.0));
  CHECK(w.beta == 0.0);
  CHECK(w.gamma == 0.0);
  CHECK(w.delta == doctest::Approx(0.0));
  CHECK(w.epsilon == doctest::Approx(-10.0));
  CHECK_FALSE(w.three_level());
  CHECK_FALSE(w.implicit_advance());
  CHECK_FALSE(w.has_cross_terms());
}

TEST_CASE("second-order weights") {
  const auto g = Grid<double>::from_steps(0.1, 0.05, 1.0, 5, 4);
  const auto w = build_coefficients(SchemeId::lax_wendroff, g);
  CHECK(w.alpha == doctest::Approx(20.0));
  CHECK(w.beta == doctest::Approx(-15.0));
  CHECK(w.delta == doctest::Approx(2.5));
  CHECK(w.epsilon == doctest::Approx(-7.5));
  CHECK(w.gamma == 0.0);
  CHECK_FALSE(w.has_cross_terms());
}

TEST_CASE("centered three-level weights") {
  const auto g = Grid<double>::from_steps(1.0, 1.0, 0.0, 5, 4);
  const auto w = build_coefficients(SchemeId::leapfrog, g);
  CHECK(w.alpha == doctest::Approx(0.5));
  CHECK(w.gamma == doctest::Approx(-0.5));
  CHECK(w.delta == 0.0);
  CHECK(w.epsilon == 0.0);
  CHECK(w.three_level());
  CHECK_FALSE(w.implicit_advance());
}

TEST_CASE("implicit three-level weights") {
  const auto g = Grid<double>::from_steps(0.5, 0.25, 2.0, 5, 4);
  const auto w = build_coefficients(SchemeId::crank_nicolson, g);
  CHECK(w.alpha == doctest::Approx(12.0));
  CHECK(w.beta == doctest::Approx(4.0));
  CHECK(w.delta == doctest::Approx(-8.0));
  CHECK(w.epsilon == doctest::Approx(-8.0));
  CHECK(w.eta == doctest::Approx(-8.0));
  CHECK(w.theta == doctest::Approx(-8.0));
  CHECK(w.zeta == 0.0);
  CHECK(w.vartheta == 0.0);
  CHECK(w.three_level());
  CHECK(w.implicit_advance());
  CHECK(w.has_cross_terms());
}

TEST_CASE("weight validation") {
  const auto g = Grid<double>::from_steps(0.1, 0.1, 1.0, 5, 4);
  CHECK_THROWS_AS(build_coefficients(SchemeId::custom, g), ValidationError);

  SchemeCoefficients<double> zero;
  CHECK_THROWS_AS(zero.validate(), ValidationError);

  auto bad = build_coefficients(SchemeId::lax, g);
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  auto cross = build_coefficients(SchemeId::leapfrog, g);
  cross.zeta = 1.0;
  CHECK_THROWS_AS(cross.validate(), ValidationError);

  SchemeCoefficients<double> nan_row;
  nan_row.alpha = std::nan("");
  CHECK_THROWS_AS(nan_row.validate(), ValidationError);
}

TEST_CASE("traveling signal") {
  const auto g = Grid<double>::from_steps(0.25, 0.125, 2.0, 5, 4);
  const SignalSpec<double> sig{1.0};
  // Crest rides along x = c t.
  CHECK(exact_field(sig, g, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(exact_field(sig, g, 0.5, 0.25) == doctest::Approx(1.0));
  // One wavelength ahead is the same value; a quarter wavelength is zero.
  CHECK(exact_field(sig, g, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(exact_field(sig, g, 0.25, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exact_field(sig, g, 0.5, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("sampled boundary data is self-consistent") {
  const auto g = Grid<double>::from_steps(0.2, 0.1, 1.0, 5, 4);
  const SignalSpec<double> sig{1.0};
  const auto b = BoundaryData<double>::sample_exact(sig, g);
  CHECK_NOTHROW(b.validate(g));
  REQUIRE(b.startup.has_value());
  CHECK(b.left.size() == g.n_t + 1);
  CHECK(b.right.size() == g.n_t + 1);
  CHECK(b.initial.size() == g.n_x + 1);
  CHECK(b.left[0] == b.initial[0]);
  CHECK(b.right[0] == b.initial[g.n_x]);
  CHECK((*b.startup)[0] == b.left[1]);
  CHECK((*b.startup)[g.n_x] == b.right[1]);
  for (Index i = 0; i <= g.n_x; ++i)
    CHECK(b.initial[i] ==
          doctest::Approx(exact_field(sig, g, g.h * double(i), 0.0)));
}

TEST_CASE("boundary validation catches shape and corner faults") {
  const auto g = Grid<double>::from_steps(0.2, 0.1, 1.0, 5, 4);
  const SignalSpec<double> sig{1.0};

  auto short_left = BoundaryData<double>::sample_exact(sig, g);
  short_left.left = VectorX<double>::Zero(g.n_t);
  CHECK_THROWS_AS(short_left.validate(g), DimensionError);

  auto bad_corner = BoundaryData<double>::sample_exact(sig, g);
  bad_corner.initial[0] += 1.0;
  CHECK_THROWS_AS(bad_corner.validate(g), ValidationError);

  auto bad_startup = BoundaryData<double>::sample_exact(sig, g);
  (*bad_startup.startup)[0] += 1.0;
  CHECK_THROWS_AS(bad_startup.validate(g), ValidationError);

  const auto z = BoundaryData<double>::zero(g);
  CHECK_NOTHROW(z.validate(g));
  CHECK(z.left.norm() == 0.0);
  CHECK(z.initial.norm() == 0.0);
}
