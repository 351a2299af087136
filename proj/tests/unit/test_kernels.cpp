#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "slm/errors.hpp"
#include "slm/kernel.hpp"

using namespace slm;

TEST_CASE("indicator kernel moments") {
  const Grid g = testing::line(10.0, 200);
  const Kernel k = make_indicator_kernel(1.0, 0.5, g);
  CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.sup() == 1.0);
  CHECK(k.continuous_mass() == doctest::Approx(1.0));

  const Kernel narrow = make_indicator_kernel(1.0, 0.25, g);
  CHECK(narrow.sup() == 1.0);
  CHECK(narrow.mass() == doctest::Approx(0.5).epsilon(1e-12));

  const auto m = kernel_moments(k);
  CHECK(m.mass == doctest::Approx(k.mass()).epsilon(1e-14));
  CHECK(m.sup == k.sup());
}

TEST_CASE("indicator kernel in two dimensions approximates the disc area") {
  const Grid g(2, 8.0, 80);
  const Kernel k = make_indicator_kernel(2.0, 1.0, g);
  CHECK(k.continuous_mass() == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(k.mass() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-3));
  CHECK(k.sup() == 2.0);
}

TEST_CASE("kernel construction rejects bad parameters") {
  const Grid g = testing::line(4.0, 40);
  CHECK_THROWS_AS(make_indicator_kernel(0.0, 0.5, g), Error);
  CHECK_THROWS_AS(make_indicator_kernel(1.0, -0.5, g), Error);
  CHECK_THROWS_AS(make_indicator_kernel(1.0, 2.0, g), Error);
  try {
    make_indicator_kernel(1.0, 4.0, g);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_parameter);
  }
  std::vector<double> odd(g.size(), 0.0);
  odd[1] = 1.0;
  CHECK_THROWS_AS(Kernel::from_table(g, odd), Error);
  std::vector<double> negative(g.size(), 0.0);
  negative[0] = -1.0;
  CHECK_THROWS_AS(Kernel::from_table(g, negative), Error);
}

TEST_CASE("zero table has zero moments") {
  const Grid g = testing::line(4.0, 40);
  const Kernel z = Kernel::from_table(g, std::vector<double>(g.size(), 0.0));
  const auto m = kernel_moments(z);
  CHECK(m.mass == 0.0);
  CHECK(m.sup == 0.0);
  CHECK(z.is_zero());
}

TEST_CASE("normalized gaussian mass matches a fine quadrature") {
  const Grid g = testing::line(10.0, 200);
  const Kernel k = Kernel::gaussian(0.2, 1.0, std::nullopt, g);
  // Oracle: midpoint rule at ten times the grid density on the continuous kernel.
  const double fine = g.spacing() / 10.0;
  double quad = 0.0;
  for (int i = 0; i < 10 * 200; ++i) {
    const double x = -5.0 + (i + 0.5) * fine;
    quad += fine * k.value({x, 0.0, 0.0});
  }
  CHECK(quad == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(k.mass() == doctest::Approx(quad).epsilon(1e-4));
  CHECK(k.continuous_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tabulated kernels are even by construction") {
  const Grid g(2, 6.0, 30);
  const std::vector<double> radii{0.0, 0.5, 1.0};
  const std::vector<double> values{2.0, 1.0, 0.25};
  const Kernel k = Kernel::radial_profile(radii, values, g);
  for (std::size_t o = 0; o < g.size(); ++o) {
    Index3 idx = g.unravel(o);
    for (int d = 0; d < 2; ++d) idx[d] = -idx[d];
    CHECK(k.table_at(o) == k.table_at(g.ravel(idx)));
  }
  CHECK(k.sup() == 2.0);
}

TEST_CASE("domination theta") {
  const Grid g = testing::line(10.0, 200);
  const Kernel a = make_indicator_kernel(1.0, 0.5, g);
  SUBCASE("identical kernels") {
    const auto theta = domination_theta(a, a);
    REQUIRE(theta);
    CHECK(*theta == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("twice the competition kernel") {
    const auto theta = domination_theta(a.scaled(2.0), a);
    REQUIRE(theta);
    CHECK(*theta == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("dispersal reaches beyond competition") {
    const Kernel wide = make_indicator_kernel(1.0, 1.0, g);
    CHECK_FALSE(domination_theta(wide, a).has_value());
  }
  SUBCASE("grid mismatch") {
    const Kernel other = make_indicator_kernel(1.0, 0.5, testing::line(10.0, 100));
    try {
      domination_theta(a, other);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::incompatible_grids);
    }
  }
}

TEST_CASE("domination theta is feasible and minimal") {
  const Grid g = testing::line(10.0, 100);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Kernel plus = Kernel::gaussian(u(gen) * 0.3, 1.5, u(gen), g);
    const Kernel minus = Kernel::gaussian(0.8, 2.0, u(gen), g);
    const auto theta = domination_theta(plus, minus);
    REQUIRE(theta);
    double worst = -HUGE_VAL;
    double worst_tight = -HUGE_VAL;
    for (std::size_t o = 0; o < g.size(); ++o) {
      worst = std::max(worst, plus.table_at(o) - *theta * minus.table_at(o));
      worst_tight = std::max(worst_tight, plus.table_at(o) - (*theta - 1e-9 * *theta) * minus.table_at(o));
    }
    CHECK(worst <= 0.0);
    CHECK(worst_tight > 0.0);
  }
}

TEST_CASE("homogenization condition") {
  const Grid g = testing::line(10.0, 200);
  const Kernel plus = testing::unit_indicator(g, 1.0);
  const Kernel minus = testing::unit_indicator(g, 0.5);
  CHECK(check_homogenization(plus, minus, 0.6));
  CHECK_FALSE(check_homogenization(plus, minus, 0.4));

  const Kernel a = make_indicator_kernel(1.0, 0.5, g);
  CHECK(check_homogenization(a, a, 0.0));
  for (double m : {0.0, 0.3, 0.7, 0.99}) CHECK(check_homogenization(a.scaled(3.0), a, 3.0 * m));

  try {
    check_homogenization(plus, minus, 1.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("homogenization closed form for indicator pairs") {
  CHECK(indicator_homogenization_closed_form(1.0, 0.6, 0.5, 1.0, 1));
  CHECK_FALSE(indicator_homogenization_closed_form(1.0, 0.4, 0.5, 1.0, 1));
  CHECK(indicator_homogenization_closed_form(1.0, 0.75, 0.5, 1.0, 2));
  CHECK_FALSE(indicator_homogenization_closed_form(1.0, 0.7, 0.5, 1.0, 2));
}
