#include "boltzlp/geometry.hpp"

#include <cmath>

#include "boltzlp/quadrature.hpp"
#include "boltzlp/state.hpp"

namespace boltzlp {

OutgoingPair collide(const Vec& v, const Vec& v_star, const Vec& sigma,
                     int dim) {
  Vec mid{0.5 * (v[0] + v_star[0]), 0.5 * (v[1] + v_star[1]),
          0.5 * (v[2] + v_star[2])};
  Vec rel{v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
  double half_speed = 0.5 * norm(rel, dim);
  OutgoingPair out;
  for (int d = 0; d < 3; ++d) {
    double shift = half_speed * sigma[d];
    out.v_prime[d] = mid[d] + shift;
    out.v_star_prime[d] = mid[d] - shift;
  }
  return out;
}

Vec sigma_from_angles(const Vec& k, double theta, const Vec& u, int dim) {
  constexpr double tol = 1e-12;
  if (std::abs(norm2(k, dim) - 1.0) > 2.0 * tol)
    throw std::invalid_argument("sigma_from_angles: k is not a unit vector");
  if (std::abs(norm2(u, dim) - 1.0) > 2.0 * tol)
    throw std::invalid_argument("sigma_from_angles: u is not a unit vector");
  if (std::abs(dot(k, u, dim)) > tol)
    throw std::invalid_argument("sigma_from_angles: u is not orthogonal to k");
  double c = std::cos(theta), s = std::sin(theta);
  return Vec{c * k[0] + s * u[0], c * k[1] + s * u[1], c * k[2] + s * u[2]};
}

CvWeight cv_weight(double theta, int dim) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-14))
    throw std::domain_error(
        "cv_weight: theta outside [0, pi/2] (symmetrized kernels only)");
  double c = std::cos(0.5 * theta);
  double jac = 1.0 / pow_fast(c, static_cast<double>(dim));
  return CvWeight{jac, 1.0 / c};
}

double cv_weight_combined(double theta, int dim, double gamma) {
  CvWeight w = cv_weight(theta, dim);
  return w.jacobian * pow_fast(w.stretch, gamma);
}

void orthonormal_frame(const Vec& k, int dim, Vec& e1, Vec& e2) {
  if (dim == 2) {
    e1 = Vec{-k[1], k[0], 0.0};
    e2 = Vec{0.0, 0.0, 0.0};
    return;
  }
  // pick the axis least aligned with k, project out, normalize
  Vec a = std::abs(k[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
  double proj = dot(a, k, 3);
  e1 = Vec{a[0] - proj * k[0], a[1] - proj * k[1], a[2] - proj * k[2]};
  double inv = 1.0 / norm(e1, 3);
  for (int d = 0; d < 3; ++d) e1[d] *= inv;
  e2 = Vec{k[1] * e1[2] - k[2] * e1[1], k[2] * e1[0] - k[0] * e1[2],
           k[0] * e1[1] - k[1] * e1[0]};
}

double verify_cv_identity(const std::function<double(const Vec&)>& field,
                          const SymmetrizedKernel& kernel,
                          const VelocityGrid& grid, const QuadOptions& quad,
                          const Vec& v_star) {
  if (kernel.angular.singular_at_origin() && kernel.angular.nu() <= -1.0)
    throw NonConvergenceError(
        "verify_cv_identity: angular part is not integrable on the sphere",
        0.0);
  const int dim = grid.dim;
  const double gamma = kernel.gamma();
  SigmaRule rule = SigmaRule::build(kernel.angular, dim, quad);
  const double cell = grid.cell_volume();

  double lhs = 0.0, rhs = 0.0;
  const std::size_t cells = grid.size();
  for (std::size_t i = 0; i < cells; ++i) {
    Vec v = grid.node(i);
    Vec rel{v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
    double dist = norm(rel, dim);
    double fv = field(v);
    if (dist == 0.0) {
      // both sides reduce to the same θ-integral against F(v)
      for (const ThetaNode& node : rule.nodes) {
        double w = node.w * node.b * rule.u_weight * rule.m_u * cell;
        double speed_pow = gamma == 0.0 ? 1.0 : 0.0;
        lhs += w * speed_pow * fv;
        rhs += w * speed_pow * node.cv_jacobian *
               pow_fast(node.cv_stretch, gamma) * fv;
      }
      continue;
    }
    Vec k{rel[0] / dist, rel[1] / dist, rel[2] / dist};
    Vec e1, e2;
    orthonormal_frame(k, dim, e1, e2);
    Vec mid{0.5 * (v[0] + v_star[0]), 0.5 * (v[1] + v_star[1]),
            0.5 * (v[2] + v_star[2])};
    double speed_pow = pow_fast(dist, gamma);
    for (const ThetaNode& node : rule.nodes) {
      double w_theta = node.w * node.b * cell;
      // RHS integrand is u-independent
      rhs += w_theta * rule.u_weight * rule.m_u * node.cv_jacobian *
             pow_fast(dist * node.cv_stretch, gamma) * fv;
      for (int m = 0; m < rule.m_u; ++m) {
        Vec u = rule.u_node(e1, e2, m);
        double r = 0.5 * dist;
        Vec v_prime{mid[0] + r * (node.cos_theta * k[0] + node.sin_theta * u[0]),
                    mid[1] + r * (node.cos_theta * k[1] + node.sin_theta * u[1]),
                    mid[2] + r * (node.cos_theta * k[2] + node.sin_theta * u[2])};
        lhs += w_theta * rule.u_weight * speed_pow * field(v_prime);
      }
    }
  }
  double denom = std::max(std::abs(rhs), 1e-300);
  return std::abs(lhs - rhs) / denom;
}

}  // namespace boltzlp
