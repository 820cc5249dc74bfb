#pragma once

#include <array>
#include <functional>

#include "boltzlp/common.hpp"
#include "boltzlp/kernel.hpp"

namespace boltzlp {

/// Velocity in R^N, N <= 3; unused components stay zero.
using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = a[0] * b[0] + a[1] * b[1];
  if (dim == 3) s += a[2] * b[2];
  return s;
}
inline double norm2(const Vec& a, int dim) { return dot(a, a, dim); }
inline double norm(const Vec& a, int dim) { return std::sqrt(norm2(a, dim)); }
inline double bracket2(const Vec& a, int dim) { return 1.0 + norm2(a, dim); }

struct OutgoingPair {
  Vec v_prime;
  Vec v_star_prime;
};

/// Binary collision transform,
///   v'  = (v+v*)/2 + (|v-v*|/2) σ,   v'* = (v+v*)/2 - (|v-v*|/2) σ.
/// Conserves momentum, energy and relative speed; v = v* is allowed.
OutgoingPair collide(const Vec& v, const Vec& v_star, const Vec& sigma,
                     int dim);

/// σ = cosθ k + sinθ u for a unit k and unit u ⟂ k (rejected otherwise).
Vec sigma_from_angles(const Vec& k, double theta, const Vec& u, int dim);

/// Weights of the v ↦ v' change of variables at fixed (v*, σ):
/// jacobian cos^{-N}(θ/2) and kernel-argument stretch 1/cos(θ/2).
struct CvWeight {
  double jacobian;
  double stretch;
};
CvWeight cv_weight(double theta, int dim);

/// Combined weight cos^{-N-γ}(θ/2) for product kernels |x|^γ b.
double cv_weight_combined(double theta, int dim, double gamma);

/// Orthonormal pair (e1, e2) spanning the plane ⟂ k (N=3); for N=2 only e1
/// is produced (the in-plane perpendicular).
void orthonormal_frame(const Vec& k, int dim, Vec& e1, Vec& e2);

struct VelocityGrid;  // state.hpp

/// Residual |LHS - RHS| / max(|RHS|, tiny) of the exact identity
///   ∫∫ B(|v-v*|, cosθ) F(v') dv dσ
///     = ∫∫ cos^{-N}(θ/2) B(|v-v*|/cos(θ/2), cosθ) F(v) dv dσ
/// at fixed v*, with both sides computed by independent quadratures on the
/// given grid.  Requires an integrable angular part.
struct QuadOptions;  // quadrature.hpp
double verify_cv_identity(const std::function<double(const Vec&)>& field,
                          const SymmetrizedKernel& kernel,
                          const VelocityGrid& grid, const QuadOptions& quad,
                          const Vec& v_star);

}  // namespace boltzlp
