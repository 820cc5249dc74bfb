#include <doctest.h>

#include <cmath>

#include "boltzlp/ensemble.hpp"
#include "boltzlp/geometry.hpp"
#include "boltzlp/quadrature.hpp"
#include "boltzlp/state.hpp"

using namespace boltzlp;

TEST_CASE("head-on collision in 2d") {
  Vec v{1.0, 0.0, 0.0}, w{-1.0, 0.0, 0.0}, sigma{0.0, 1.0, 0.0};
  OutgoingPair out = collide(v, w, sigma, 2);
  CHECK(out.v_prime[0] == doctest::Approx(0.0));
  CHECK(out.v_prime[1] == doctest::Approx(1.0));
  CHECK(out.v_star_prime[1] == doctest::Approx(-1.0));
}

TEST_CASE("sigma along the relative velocity is the identity collision") {
  Vec v{2.0, 1.0, -0.5}, w{-1.0, 0.5, 0.25};
  Vec rel{v[0] - w[0], v[1] - w[1], v[2] - w[2]};
  double len = norm(rel, 3);
  Vec sigma{rel[0] / len, rel[1] / len, rel[2] / len};
  OutgoingPair out = collide(v, w, sigma, 3);
  for (int d = 0; d < 3; ++d) {
    CHECK(out.v_prime[d] == doctest::Approx(v[d]).epsilon(1e-14));
    CHECK(out.v_star_prime[d] == doctest::Approx(w[d]).epsilon(1e-14));
  }
}

TEST_CASE("zero relative velocity is fixed by any sigma") {
  Vec v{0.3, -0.7, 1.1};
  Vec sigma{0.0, 0.6, 0.8};
  OutgoingPair out = collide(v, v, sigma, 3);
  for (int d = 0; d < 3; ++d) {
    CHECK(out.v_prime[d] == doctest::Approx(v[d]));
    CHECK(out.v_star_prime[d] == doctest::Approx(v[d]));
  }
}

TEST_CASE("conservation over random frames") {
  Rng rng(77);
  for (int dim : {2, 3}) {
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
      Vec v{0, 0, 0}, w{0, 0, 0};
      for (int d = 0; d < dim; ++d) {
        v[d] = 10.0 * (2.0 * rng.uniform() - 1.0);
        w[d] = 10.0 * (2.0 * rng.uniform() - 1.0);
      }
      Vec sigma{0, 0, 0};
      double len = 0.0;
      for (int d = 0; d < dim; ++d) {
        sigma[d] = 2.0 * rng.uniform() - 1.0;
        len += sigma[d] * sigma[d];
      }
      len = std::sqrt(len);
      for (int d = 0; d < dim; ++d) sigma[d] /= len;
      OutgoingPair out = collide(v, w, sigma, dim);
      Vec ptot{v[0] + w[0], v[1] + w[1], v[2] + w[2]};
      Vec ptot2{out.v_prime[0] + out.v_star_prime[0],
                out.v_prime[1] + out.v_star_prime[1],
                out.v_prime[2] + out.v_star_prime[2]};
      for (int d = 0; d < dim; ++d)
        worst = std::max(worst, std::abs(ptot2[d] - ptot[d]) /
                                    std::max(1.0, std::abs(ptot[d])));
      double e0 = norm2(v, dim) + norm2(w, dim);
      double e1 = norm2(out.v_prime, dim) + norm2(out.v_star_prime, dim);
      worst = std::max(worst, std::abs(e1 - e0) / std::max(1.0, e0));
      Vec rel0{v[0] - w[0], v[1] - w[1], v[2] - w[2]};
      Vec rel1{out.v_prime[0] - out.v_star_prime[0],
               out.v_prime[1] - out.v_star_prime[1],
               out.v_prime[2] - out.v_star_prime[2]};
      worst = std::max(worst, std::abs(norm(rel1, dim) - norm(rel0, dim)) /
                                  std::max(1.0, norm(rel0, dim)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("sigma negation swaps the outgoing pair exactly") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Vec v{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    Vec w{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    Vec sigma{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double len = norm(sigma, 3);
    for (int d = 0; d < 3; ++d) sigma[d] /= len;
    Vec neg{-sigma[0], -sigma[1], -sigma[2]};
    OutgoingPair a = collide(v, w, sigma, 3);
    OutgoingPair b = collide(v, w, neg, 3);
    for (int d = 0; d < 3; ++d) {
      CHECK(a.v_prime[d] == b.v_star_prime[d]);
      CHECK(a.v_star_prime[d] == b.v_prime[d]);
    }
  }
}

TEST_CASE("the theta -> pi - theta, u -> -u map negates sigma") {
  Vec k{0.0, 0.0, 1.0}, u{1.0, 0.0, 0.0};
  double theta = 0.7;
  Vec s1 = sigma_from_angles(k, theta, u, 3);
  Vec mu{-u[0], -u[1], -u[2]};
  Vec s2 = sigma_from_angles(k, kPi - theta, mu, 3);
  for (int d = 0; d < 3; ++d) CHECK(s2[d] == doctest::Approx(-s1[d]));
}

TEST_CASE("sigma_from_angles basics") {
  Vec k{0.0, 0.0, 1.0}, u{1.0, 0.0, 0.0};
  Vec s0 = sigma_from_angles(k, 0.0, u, 3);
  CHECK(s0[2] == doctest::Approx(1.0));
  Vec s1 = sigma_from_angles(k, kPi / 2.0, u, 3);
  CHECK(s1[0] == doctest::Approx(1.0));
  Vec s2 = sigma_from_angles(k, kPi / 3.0, u, 3);
  CHECK(s2[0] == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(s2[2] == doctest::Approx(0.5));
  Vec bad{0.6, 0.0, 0.8};
  CHECK_THROWS_AS(sigma_from_angles(k, 0.3, bad, 3), std::invalid_argument);
}

TEST_CASE("cv weight values and monotonicity") {
  CvWeight w0 = cv_weight(0.0, 3);
  CHECK(w0.jacobian == doctest::Approx(1.0));
  CHECK(w0.stretch == doctest::Approx(1.0));
  CvWeight w1 = cv_weight(kPi / 2.0, 3);
  CHECK(w1.jacobian == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(cv_weight_combined(kPi / 2.0, 2, 1.0) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  double prev = 0.0;
  for (int k = 0; k <= 32; ++k) {
    double theta = 0.5 * kPi * k / 32.0;
    double jac = cv_weight(theta, 2).jacobian;
    CHECK(jac >= prev);
    prev = jac;
  }
  CHECK_THROWS_AS(cv_weight(2.0, 2), std::domain_error);
}

TEST_CASE("orthonormal frames are orthonormal") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Vec k{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double len = norm(k, 3);
    if (len < 1e-3) continue;
    for (int d = 0; d < 3; ++d) k[d] /= len;
    Vec e1, e2;
    orthonormal_frame(k, 3, e1, e2);
    CHECK(std::abs(dot(e1, k, 3)) < 1e-13);
    CHECK(std::abs(dot(e2, k, 3)) < 1e-13);
    CHECK(std::abs(dot(e1, e2, 3)) < 1e-13);
    CHECK(norm(e1, 3) == doctest::Approx(1.0));
    CHECK(norm(e2, 3) == doctest::Approx(1.0));
  }
}

TEST_CASE("sigma quadrature of the squared bracket matches its closed form") {
  // ∫_S b <v'>^2 dσ = b |S^{N-1}| (1 + (|v|^2+|v*|^2)/2) for constant b
  for (int dim : {2, 3}) {
    AngularKernel b = AngularKernel::constant(1.0);
    QuadOptions opts;
    opts.m_theta = 64;
    SigmaRule rule = SigmaRule::build(b, dim, opts);
    Vec v{0.8, -0.4, 0.3}, w{-0.2, 1.1, -0.6};
    if (dim == 2) v[2] = w[2] = 0.0;
    Vec rel{v[0] - w[0], v[1] - w[1], v[2] - w[2]};
    double dist = norm(rel, dim);
    Vec k{rel[0] / dist, rel[1] / dist, rel[2] / dist};
    Vec e1, e2;
    orthonormal_frame(k, dim, e1, e2);
    Vec mid{0.5 * (v[0] + w[0]), 0.5 * (v[1] + w[1]), 0.5 * (v[2] + w[2])};
    double acc = 0.0;
    for (const ThetaNode& node : rule.nodes) {
      for (int m = 0; m < rule.m_u; ++m) {
        Vec u = rule.u_node(e1, e2, m);
        Vec vp{mid[0] + 0.5 * dist * (node.cos_theta * k[0] +
                                      node.sin_theta * u[0]),
               mid[1] + 0.5 * dist * (node.cos_theta * k[1] +
                                      node.sin_theta * u[1]),
               mid[2] + 0.5 * dist * (node.cos_theta * k[2] +
                                      node.sin_theta * u[2])};
        acc += node.w * node.b * rule.u_weight * bracket2(vp, dim);
      }
    }
    double expected = sphere_area(dim) *
                      (1.0 + 0.5 * (norm2(v, dim) + norm2(w, dim)));
    CHECK(acc == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("cv identity residual is small for a Gaussian and zero for F = 0") {
  VelocityGrid grid(2, 24, 8.0);
  CollisionKernel base(0.0, AngularKernel::constant(1.0), 2);
  SymmetrizedKernel kernel = symmetrize(base);
  QuadOptions quad;
  quad.m_theta = 16;
  Vec v_star{0.3, -0.2, 0.0};
  auto zero_field = [](const Vec&) { return 0.0; };
  CHECK(verify_cv_identity(zero_field, kernel, grid, quad, v_star) == 0.0);
  auto gaussian = [](const Vec& v) {
    return std::exp(-0.5 * norm2(v, 2));
  };
  double resid = verify_cv_identity(gaussian, kernel, grid, quad, v_star);
  CHECK(resid < 5e-2);
  VelocityGrid fine(2, 48, 8.0);
  QuadOptions fine_quad;
  fine_quad.m_theta = 32;
  double resid_fine =
      verify_cv_identity(gaussian, kernel, fine, fine_quad, v_star);
  // decrease is only observable above the roundoff floor
  CHECK((resid_fine < resid || resid_fine < 1e-6));
}
