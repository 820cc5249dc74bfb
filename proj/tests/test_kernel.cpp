#include <doctest.h>

#include <cmath>

#include "boltzlp/kernel.hpp"

using namespace boltzlp;

TEST_CASE("constant kernel evaluation") {
  AngularKernel b = AngularKernel::constant(1.0);
  CHECK(b.eval_cos(0.0) == 1.0);
  CHECK(b.eval_cos(-0.5) == 1.0);
  CHECK(b.eval_theta(kPi) == 1.0);
}

TEST_CASE("table kernel interpolates linearly in cos theta") {
  // b(y) = 1 + y
  AngularKernel b = AngularKernel::table({-1.0, 1.0}, {0.0, 2.0});
  CHECK(b.eval_cos(0.5) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(b.eval_cos(-1.0) == doctest::Approx(0.0));
}

TEST_CASE("singular kernel diverges with the expected exponent") {
  // N=3, nu=-1: exponent (-(N-2)+nu)/2 = -1
  AngularKernel b = AngularKernel::singular(1.0, -1.0, 3);
  double y1 = 1.0 - 1e-3, y2 = 1.0 - 1e-4;
  double ratio = b.eval_cos(y2) / b.eval_cos(y1);
  CHECK(ratio == doctest::Approx(10.0).epsilon(1e-10));
  CHECK_THROWS_AS(b.eval_cos(1.0), std::domain_error);
}

TEST_CASE("constructor contracts") {
  CHECK_THROWS_AS(AngularKernel::singular(1.0, -3.0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(AngularKernel::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(AngularKernel::table({0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("symmetrization doubles an even kernel on [0, pi/2]") {
  AngularKernel b = AngularKernel::constant(1.0).symmetrized();
  CHECK(b.eval_theta(0.3) == doctest::Approx(2.0));
  CHECK(b.eval_theta(kPi / 2.0) == doctest::Approx(2.0));
  CHECK(b.eval_theta(kPi / 2.0 + 0.01) == 0.0);
}

TEST_CASE("symmetrized singular kernel keeps its exponent and is bounded at "
          "pi/2") {
  AngularKernel raw = AngularKernel::singular(1.0, -1.5, 3);
  AngularKernel sym = raw.symmetrized();
  // same divergence rate at theta -> 0
  double t1 = 1e-3, t2 = 1e-4;
  double ratio_sym = sym.eval_theta(t2) / sym.eval_theta(t1);
  double ratio_raw = raw.eval_theta(t2) / raw.eval_theta(t1);
  CHECK(ratio_sym == doctest::Approx(ratio_raw).epsilon(1e-6));
  CHECK(std::isfinite(sym.eval_theta(kPi / 2.0)));
}

TEST_CASE("angular mass closed forms") {
  AngularKernel one = AngularKernel::constant(1.0);
  CHECK(angular_mass(one, 3) == doctest::Approx(4.0 * kPi).epsilon(1e-8));
  CHECK(angular_mass(one, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-8));
  CHECK(angular_mass(AngularKernel::zero(), 3) == 0.0);
}

TEST_CASE("angular moment closed form and vanishing support") {
  AngularKernel one = AngularKernel::constant(1.0);
  // 2π ∫ (1-cosθ) sinθ dθ = 4π for N = 3
  CHECK(angular_moment(one, 3) == doctest::Approx(4.0 * kPi).epsilon(1e-8));
  AngularKernel tiny =
      AngularKernel::constant(1.0, kPi / 2.0 - 1e-5, kPi / 2.0);
  CHECK(angular_moment(tiny, 3) < 1e-4);
}

TEST_CASE("graded quadrature converges for integrable singularities") {
  // nu = -2, N = 3: moment integrand ~ θ^0 near zero
  AngularKernel b = AngularKernel::singular(1.0, -2.0, 3).symmetrized();
  double m1 = angular_moment(b, 3);
  CHECK(std::isfinite(m1));
  CHECK(m1 > 0.0);
  // nu close to the -3 boundary still converges
  AngularKernel hard = AngularKernel::singular(1.0, -2.7, 2).symmetrized();
  CHECK(std::isfinite(angular_moment(hard, 2)));
}

TEST_CASE("angular mass of a grazing-singular kernel fails its Cauchy "
          "criterion") {
  AngularKernel b = AngularKernel::singular(1.0, -1.5, 3).symmetrized();
  CHECK_THROWS_AS(angular_mass(b, 3), NonConvergenceError);
}

TEST_CASE("split reconstructs pointwise and moment vanishes with theta0") {
  AngularKernel sym = AngularKernel::singular(1.0, -1.5, 2).symmetrized();
  auto [cut, rem] = sym.split(kPi / 6.0);
  for (double theta : {1e-4, 0.1, kPi / 6.0, 0.9, kPi / 2.0}) {
    CHECK(cut.eval_theta(theta) + rem.eval_theta(theta) ==
          doctest::Approx(sym.eval_theta(theta)).epsilon(1e-14));
  }
  CHECK(cut.eval_theta(kPi / 6.0 - 1e-6) == 0.0);

  double prev = 0.0;
  for (double theta0 : {1e-3, 1e-2, 1e-1, 0.5}) {
    auto [c2, r2] = sym.split(theta0);
    double m = angular_moment(r2, 2);
    CHECK(m >= prev);
    prev = m;
  }
  auto [c3, r3] = sym.split(1e-4);
  CHECK(angular_moment(r3, 2) < 1e-3);
}

TEST_CASE("split of b=1 at pi/4 in 3d has the closed-form remainder moment") {
  AngularKernel sym = AngularKernel::constant(1.0).symmetrized();
  auto [cut, rem] = sym.split(kPi / 4.0);
  // 2π ∫_0^{π/4} 2 (1-cosθ) sinθ dθ = 2π (1-√2/2)^2
  double expected = 2.0 * kPi * std::pow(1.0 - std::sqrt(2.0) / 2.0, 2.0);
  CHECK(angular_moment(rem, 3) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("mass dominates moment on [0, pi/2] supports") {
  AngularKernel sym = AngularKernel::constant(0.7).symmetrized();
  CHECK(angular_mass(sym, 2) >= angular_moment(sym, 2));
  AngularKernel table =
      AngularKernel::table({-1.0, 0.0, 1.0}, {0.3, 1.0, 2.0}).symmetrized();
  CHECK(angular_mass(table, 3) >= angular_moment(table, 3));
}

TEST_CASE("collision kernel field contracts") {
  CHECK_THROWS_AS(
      CollisionKernel(1.5, AngularKernel::constant(1.0), 2),
      std::invalid_argument);
  CHECK_THROWS_AS(
      CollisionKernel(0.5, AngularKernel::singular(1.0, -1.5, 3), 2),
      std::invalid_argument);
  CollisionKernel ok(1.0, AngularKernel::constant(1.0), 2);
  SymmetrizedKernel sym = symmetrize(ok);
  CHECK(sym.angular.window().hi == doctest::Approx(kPi / 2.0));
}
