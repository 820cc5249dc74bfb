#pragma once

#include <vector>

#include "boltzlp/geometry.hpp"
#include "boltzlp/kernel.hpp"

namespace boltzlp {

/// Quadrature configuration shared by the collision evaluators.
struct QuadOptions {
  /// θ intervals for kernels integrable at θ = 0 (rounded up to a multiple
  /// of 4 so the embedded coarse levels nest).
  int m_theta = 16;
  /// θ intervals per geometric band for kernels singular at θ = 0.
  int band_nodes = 4;
  /// truncation angle below which a singular kernel is not sampled
  double theta_min = 1e-4;
  /// geometric grading ratio of the bands
  double ratio = 2.0;
  /// S^{N-2} nodes for N = 3 (N = 2 always uses the two-point S^0)
  int m_u = 16;
  /// off-grid interpolation order: 1 multilinear, 3 cubic
  int interp_order = 1;
};

struct ThetaNode {
  double theta;
  double cos_theta;
  double sin_theta;
  double cos_half;      // cos(θ/2)
  double sin_half;      // sin(θ/2)
  double cv_jacobian;   // cos^{-N}(θ/2)
  double cv_stretch;    // 1/cos(θ/2)
  double w;             // trapezoid weight × (sinθ)^{N-2}
  double w_mid;         // embedded half-resolution weight
  double w_coarse;      // embedded quarter-resolution weight
  double b;             // angular kernel value at the node
  int band;             // 0 = band closest to θ = 0
};

/// θ × u tensor rule on the sphere restricted to the support of an angular
/// kernel.  θ nodes are trapezoid nodes, geometrically graded toward θ = 0
/// for singular kernels; u nodes are uniform on the embedded S^{N-2}
/// (the two points ±u for N = 2).  The nested half/quarter node subsets give
/// a Richardson-style error estimate from a single sweep.
struct SigmaRule {
  std::vector<ThetaNode> nodes;
  int dim = 2;
  int m_u = 2;
  double u_weight = 1.0;  // |S^{N-2}| / m_u
  double theta_min_used = 0.0;
  int bands = 1;
  std::vector<double> u_cos, u_sin;  // circle nodes for N = 3

  static SigmaRule build(const AngularKernel& b, int dim,
                         const QuadOptions& opts);

  Vec u_node(const Vec& e1, const Vec& e2, int m) const {
    if (dim == 2) {
      double s = (m == 0) ? 1.0 : -1.0;
      return Vec{s * e1[0], s * e1[1], 0.0};
    }
    double c = u_cos[m], s = u_sin[m];
    return Vec{c * e1[0] + s * e2[0], c * e1[1] + s * e2[1],
               c * e1[2] + s * e2[2]};
  }

  /// Σ weights ⋅ b — the discrete ∫ b dσ over the rule's support.
  double kernel_mass() const;
  /// Σ weights with b ≡ 1 (invariant: ≈ |S^{N-1}| restricted to support).
  double weight_sum() const;
};

}  // namespace boltzlp
