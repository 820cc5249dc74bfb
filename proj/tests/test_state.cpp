#include <doctest.h>

#include <cmath>

#include "boltzlp/ensemble.hpp"
#include "boltzlp/state.hpp"

using namespace boltzlp;

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(VelocityGrid(2, 7, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityGrid(2, 10, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityGrid(4, 16, 8.0), std::invalid_argument);
  VelocityGrid g(2, 16, 8.0);
  CHECK(g.h == doctest::Approx(1.0));
  CHECK(g.axis_node(0) == doctest::Approx(-7.5));
  CHECK(g.size() == 256);
}

TEST_CASE("weighted lp norm of the 2d unit Maxwellian") {
  VelocityGrid grid(2, 48, 8.0);
  Distribution m = maxwellian(grid, 1.0, Vec{0, 0, 0}, 1.0);
  double value = weighted_lp_norm(m, NormSpec(2.0, 0.0));
  CHECK(value ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-4));
  CHECK(weighted_lp_norm(Distribution::zero(grid), NormSpec(2.0, 1.0)) ==
        0.0);
}

TEST_CASE("norm grows with the weight exponent") {
  VelocityGrid grid(2, 16, 6.0);
  Distribution m = maxwellian(grid, 1.0, Vec{0.5, 0, 0}, 0.8);
  CHECK(weighted_lp_norm(m, NormSpec(2.0, 0.5)) <=
        weighted_lp_norm(m, NormSpec(2.0, 2.0)));
}

TEST_CASE("l1 moments of Maxwellians") {
  VelocityGrid grid(3, 16, 8.0);
  Distribution m = maxwellian(grid, 1.0, Vec{0, 0, 0}, 1.0);
  CHECK(l1_moment(m, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
  // ∫ (1+|v|^2) M = 1 + N T = 4
  CHECK(l1_moment(m, 2.0) == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(l1_moment(Distribution::zero(grid), 2.0) == 0.0);
  CHECK_THROWS_AS(l1_moment(m, -1.0), std::invalid_argument);
}

TEST_CASE("moments are nondecreasing in the weight order") {
  VelocityGrid grid(2, 20, 7.0);
  Distribution m = maxwellian(grid, 0.7, Vec{1.0, -0.5, 0}, 1.3);
  double prev = 0.0;
  for (double s : {0.0, 1.0, 2.0, 4.0, 6.0}) {
    double cur = l1_moment(m, s);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("entropy of the 3d unit Maxwellian") {
  VelocityGrid grid(3, 20, 8.0);
  Distribution m = maxwellian(grid, 1.0, Vec{0, 0, 0}, 1.0);
  double expected = -1.5 * (1.0 + std::log(2.0 * kPi));
  CHECK(entropy(m) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("entropy of an indicator block and the scaling identity") {
  VelocityGrid grid(2, 16, 4.0);
  Distribution f = Distribution::zero(grid);
  // c on a block of cells
  double c = 3.0;
  int count = 0;
  for (int i = 4; i < 8; ++i)
    for (int j = 4; j < 8; ++j) {
      f.values[grid.flat(i, j)] = c;
      ++count;
    }
  double volume = count * grid.cell_volume();
  CHECK(entropy(f) == doctest::Approx(c * volume * std::log(c)));

  // H(λ f) = λ H(f) + λ log λ mass(f)
  double lambda = 2.5;
  Distribution g = f;
  for (double& v : g.values) v *= lambda;
  CHECK(entropy(g) == doctest::Approx(lambda * entropy(f) +
                                      lambda * std::log(lambda) * mass(f))
                          .epsilon(1e-12));
}

TEST_CASE("maxwellian mass, energy and concentration") {
  VelocityGrid grid(2, 32, 8.0);
  Vec u{1.0, -0.5, 0.0};
  Distribution m = maxwellian(grid, 0.8, u, 0.9);
  CHECK(mass(m) == doctest::Approx(0.8).epsilon(1e-8));
  // ∫ (1+|v|^2) f - mass = rho (|u|^2 + N T)
  double energy_w = l1_moment(m, 2.0) - mass(m);
  CHECK(energy_w ==
        doctest::Approx(0.8 * (1.25 + 2.0 * 0.9)).epsilon(1e-6));

  Distribution cold = maxwellian(grid, 1.0, u, 1e-4);
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < cold.values.size(); ++i)
    if (cold.values[i] > cold.values[argmax]) argmax = i;
  Vec peak = grid.node(argmax);
  CHECK(std::abs(peak[0] - u[0]) <= grid.h);
  CHECK(std::abs(peak[1] - u[1]) <= grid.h);
}

TEST_CASE("mixtures reduce, vanish and symmetrize") {
  VelocityGrid grid(2, 16, 6.0);
  std::vector<MaxwellComponent> single{{1.0, Vec{0.3, 0, 0}, 1.1}};
  Distribution a = mixture(grid, single);
  Distribution b = maxwellian(grid, 1.0, Vec{0.3, 0, 0}, 1.1);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(a.values[i] == doctest::Approx(b.values[i]));

  CHECK(mass(mixture(grid, {})) == 0.0);

  std::vector<MaxwellComponent> pair{{0.5, Vec{0.75, 0, 0}, 0.9},
                                     {0.5, Vec{-0.75, 0, 0}, 0.9}};
  Distribution even = mixture(grid, pair);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      double lhs = even.values[grid.flat(i, j)];
      double rhs = even.values[grid.flat(grid.n - 1 - i, grid.n - 1 - j)];
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("discrete Hoelder interpolation holds exactly") {
  VelocityGrid grid(2, 16, 6.0);
  Rng rng(99);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      Distribution f = Distribution::zero(grid);
      for (double& v : f.values) v = rng.uniform();
      double theta = 0.05 + 0.9 * rng.uniform();
      double q1 = 3.0 * rng.uniform(), q2 = 3.0 * rng.uniform();
      double r = theta * q1 + (1.0 - theta) * q2;
      double lhs = weighted_lp_norm(f, NormSpec(p, r));
      double rhs = std::pow(weighted_lp_norm(f, NormSpec(p, q1)), theta) *
                   std::pow(weighted_lp_norm(f, NormSpec(p, q2)),
                            1.0 - theta);
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("norm homogeneity") {
  VelocityGrid grid(2, 16, 6.0);
  Distribution f = maxwellian(grid, 1.0, Vec{0, 0, 0}, 1.0);
  Distribution g = f;
  for (double& v : g.values) v *= 3.25;
  NormSpec spec(1.5, 1.0);
  CHECK(weighted_lp_norm(g, spec) ==
        doctest::Approx(3.25 * weighted_lp_norm(f, spec)).epsilon(1e-12));
}

TEST_CASE("norm compatibility against singular kernels") {
  AngularKernel mild = AngularKernel::singular(1.0, -1.5, 2).symmetrized();
  AngularKernel strong = AngularKernel::singular(1.0, -2.5, 2).symmetrized();
  CHECK_NOTHROW(require_norm_compatible(NormSpec(2.0, 1.0), mild));
  CHECK_THROWS_AS(require_norm_compatible(NormSpec(2.0, 0.5), mild),
                  std::invalid_argument);
  CHECK_NOTHROW(require_norm_compatible(NormSpec(2.0, 2.0), strong));
  CHECK_THROWS_AS(require_norm_compatible(NormSpec(2.0, 1.0), strong),
                  std::invalid_argument);
}
