#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "slm/errors.hpp"
#include "slm/kinetic.hpp"

using namespace slm;

namespace {

ModelParams logistic_params(const Grid& g, double m, double plus_mass = 1.0, double minus_mass = 1.0) {
  return ModelParams(m, testing::unit_indicator(g, 1.0, plus_mass), testing::unit_indicator(g, 0.5, minus_mass));
}

// RK4 on the scalar ODE, an oracle independent of the grid solver.
double scalar_rk4(double u, double t, double dt, double lambda, double b) {
  const auto f = [&](double v) { return lambda * v - b * v * v; };
  const long steps = std::lround(t / dt);
  for (long s = 0; s < steps; ++s) {
    const double k1 = f(u), k2 = f(u + 0.5 * dt * k1), k3 = f(u + 0.5 * dt * k2), k4 = f(u + dt * k3);
    u += dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  }
  return u;
}

}  // namespace

TEST_CASE("bernoulli_q") {
  CHECK(bernoulli_q({0.2, 1.0, 1.0}) == doctest::Approx(0.8));
  CHECK(bernoulli_q({1.0, 1.0, 2.0}) == 0.0);
  CHECK(bernoulli_q({0.0, 3.0, 1.5}) == doctest::Approx(2.0));
  try {
    bernoulli_q({0.2, 1.0, 0.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_q);
  }
}

TEST_CASE("bernoulli_solution") {
  const BernoulliParams p{0.2, 1.0, 1.0};
  for (double t : {0.0, 1.0, 10.0, 1e4}) CHECK(bernoulli_solution(0.8, t, p) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(bernoulli_solution(1.0, 1.0, {1.0, 1.0, 1.0}) == doctest::Approx(0.5));
  CHECK(bernoulli_solution(0.1, 5.0, p) == doctest::Approx(testing::logistic(0.1, 5.0, 0.8, 1.0)).epsilon(1e-13));
  CHECK(std::abs(bernoulli_solution(0.1, 5.0, p) - scalar_rk4(0.1, 5.0, 1e-5, 0.8, 1.0)) <= 1e-8);
  // decay branch
  const BernoulliParams decay{1.5, 1.0, 0.7};
  CHECK(std::abs(bernoulli_solution(0.4, 3.0, decay) - scalar_rk4(0.4, 3.0, 1e-5, -0.5, 0.7)) <= 1e-8);
  CHECK(bernoulli_solution(0.0, 3.0, p) == 0.0);
  CHECK(bernoulli_solution(0.3, 1e6, p) == doctest::Approx(0.8));
}

TEST_CASE("convolve_periodic") {
  const Grid g = testing::line(10.0, 100);
  const Kernel k = testing::unit_indicator(g, 0.7, 1.3);
  const Field c = convolve_periodic(k, testing::constant(g, 2.0));
  for (double v : c.values) CHECK(v == doctest::Approx(2.0 * k.mass()).epsilon(1e-13));

  std::vector<double> delta(g.size(), 0.0);
  delta[0] = 1.0 / g.cell_volume();
  Field f(g);
  std::mt19937_64 gen(5);
  for (double& v : f.values) v = std::uniform_real_distribution<double>(0, 1)(gen);
  const Field same = convolve_periodic(Kernel::from_table(g, delta), f);
  CHECK(testing::max_abs_diff(same.values, f.values) <= 1e-14);

  const Field out = convolve_periodic(k, f);
  CHECK(testing::max_abs_diff(out.values, testing::naive_convolution(k, f)) <= 1e-13);

  Field shifted(g);
  for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + 1) % g.size()] = f[i];
  const Field out_shifted = convolve_periodic(k, shifted);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(out_shifted[(i + 1) % g.size()] == doctest::Approx(out[i]));

  CHECK_THROWS_AS(convolve_periodic(k, Field(testing::line(10.0, 50))), Error);
}

TEST_CASE("kinetic_rhs") {
  const Grid g = testing::line(10.0, 200);
  const ModelParams params = logistic_params(g, 0.2);
  const double q = bernoulli_q(BernoulliParams::from(params));
  for (double v : kinetic_rhs(testing::constant(g, q), params).values) CHECK(std::abs(v) <= 1e-15);
  for (double v : kinetic_rhs(testing::constant(g, 0.0), params).values) CHECK(v == 0.0);
  const double c = 0.37;
  for (double v : kinetic_rhs(testing::constant(g, c), params).values)
    CHECK(v == doctest::Approx(0.8 * c - c * c).epsilon(1e-13));

  Field f(g);
  std::mt19937_64 gen(9);
  for (double& v : f.values) v = std::uniform_real_distribution<double>(0, 2)(gen);
  const auto plus = testing::naive_convolution(params.dispersal, f);
  const auto minus = testing::naive_convolution(params.competition, f);
  const Field rhs = kinetic_rhs(f, params);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(rhs[i] == doctest::Approx(-0.2 * f[i] - f[i] * minus[i] + plus[i]).epsilon(1e-12));
}

TEST_CASE("solve_kinetic follows the Bernoulli oracle for constant data") {
  const Grid g = testing::line(10.0, 64);
  const ModelParams params = logistic_params(g, 0.2);
  const std::vector<double> times{1, 2, 5, 10};
  const auto traj = solve_kinetic(testing::constant(g, 0.1), params, 10.0, 1e-3, times);
  REQUIRE(traj.times.size() == 4);
  for (std::size_t s = 0; s < 4; ++s) {
    const double exact = testing::logistic(0.1, times[s], 0.8, 1.0);
    for (double v : traj.fields[s].values) CHECK(std::abs(v - exact) / exact <= 1e-6);
    CHECK(traj.fields[s].max() - traj.fields[s].min() <= 1e-12 * traj.fields[s].max());
  }
}

TEST_CASE("solve_kinetic edge cases") {
  const Grid g = testing::line(10.0, 64);
  const ModelParams params = logistic_params(g, 0.2);
  const auto zero = solve_kinetic(testing::constant(g, 0.0), params, 5.0, 0.01, std::vector<double>{});
  REQUIRE(zero.times.size() == 1);
  CHECK(zero.times[0] == 5.0);
  CHECK(zero.fields[0].max() == 0.0);

  const auto at0 = solve_kinetic(testing::constant(g, 0.3), params, 1.0, 0.01, std::vector<double>{0.0, 1.0});
  CHECK(at0.fields[0].values == testing::constant(g, 0.3).values);

  CHECK_THROWS_AS(solve_kinetic(testing::constant(g, 0.3), params, 1.0, 0.0, std::vector<double>{}), Error);
  CHECK_THROWS_AS(solve_kinetic(testing::constant(g, 0.3), params, 1.0, 0.01, std::vector<double>{2.0}), Error);
  CHECK_THROWS_AS(solve_kinetic(testing::constant(g, 0.3), params, 1.0, 0.01, std::vector<double>{0.5, 0.2}), Error);
  // far beyond the stability guard
  CHECK_THROWS_AS(solve_kinetic(testing::constant(g, 0.3), params, 1.0, 1.0, std::vector<double>{}), Error);
}

TEST_CASE("solve_kinetic keeps random nonnegative data nonnegative") {
  const Grid g = testing::line(10.0, 64);
  const ModelParams params = logistic_params(g, 0.3, 1.2, 0.9);
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    Field f(g);
    for (double& v : f.values) v = std::uniform_real_distribution<double>(0, 1)(gen) < 0.3 ? 0.0 : 2.0 * std::uniform_real_distribution<double>(0, 1)(gen);
    const auto traj = solve_kinetic(f, params, 3.0, 0.02, std::vector<double>{0.5, 1.0, 3.0});
    for (const Field& s : traj.fields) CHECK(s.min() >= 0.0);
  }
}
