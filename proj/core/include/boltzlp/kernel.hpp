#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "boltzlp/common.hpp"

namespace boltzlp {

enum class AngularKind { ConstantCutoff, TableCutoff, Singular };

/// Closed/open θ-interval used as the support window of an angular kernel.
struct ThetaWindow {
  double lo = 0.0;
  double hi = kPi;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double theta) const {
    if (theta < lo || theta > hi) return false;
    if (lo_open && theta == lo) return false;
    if (hi_open && theta == hi) return false;
    return true;
  }
  bool empty() const { return hi < lo || (hi == lo && (lo_open || hi_open)); }
};

/// Angular part b(cosθ) of a collision kernel.
///
/// Three kinds: a constant, a table interpolated linearly in cosθ, and the
/// grazing-singular family strength ⋅ (1-cosθ)^{(-(N-2)+ν)/2}.  Singular
/// kernels are kept in closed form (never tabulated near θ=0).  A kernel may
/// additionally carry a "mirror" marker: the symmetrized combination
/// b(cosθ) + b(cos(π-θ)) restricted to θ ∈ [0, π/2].
class AngularKernel {
 public:
  static AngularKernel constant(double c, double theta_lo = 0.0,
                                double theta_hi = kPi);
  static AngularKernel table(std::vector<double> cos_nodes,
                             std::vector<double> values, double theta_lo = 0.0,
                             double theta_hi = kPi);
  static AngularKernel singular(double strength, double nu, int dim,
                                double theta_lo = 0.0, double theta_hi = kPi);
  static AngularKernel zero();

  AngularKind kind() const { return kind_; }
  double nu() const { return nu_; }
  double strength() const { return strength_; }
  int dim_hint() const { return dim_; }
  const ThetaWindow& window() const { return window_; }
  bool mirrored() const { return mirrored_; }

  /// b at a given cosθ (support- and mirror-aware).  For the Singular kind,
  /// cos_theta = 1 with the singular point in-support is a domain error.
  double eval_cos(double cos_theta) const;

  /// Same kernel evaluated as a function of θ ∈ [0, π].
  double eval_theta(double theta) const;

  /// Like eval_theta but treats open window edges as closed.  Quadrature
  /// rules place trapezoid nodes on edges; the edge is measure zero.
  double eval_theta_interior(double theta) const;

  /// Mirror marker: evaluates to b(cosθ) + b(cos(π-θ)) on [0, π/2], zero
  /// beyond.
  AngularKernel symmetrized() const;

  /// Splits into (b·1_{θ ∈ [θ0, hi]}, b·1_{θ < θ0}).  Requires the support to
  /// lie in [0, π/2] (i.e. a symmetrized or already-restricted kernel).
  std::pair<AngularKernel, AngularKernel> split(double theta0) const;

  /// True when the kernel diverges at θ = 0 and its window reaches it.
  bool singular_at_origin() const;

  bool is_zero() const;

 private:
  AngularKernel() = default;
  double raw_eval(double cos_theta, double one_minus) const;  // no support test
  double raw_eval_theta(double theta) const;

  AngularKind kind_ = AngularKind::ConstantCutoff;
  double constant_ = 0.0;
  std::vector<double> table_cos_;
  std::vector<double> table_val_;
  double strength_ = 0.0;
  double nu_ = 0.0;
  double exponent_ = 0.0;  // (-(N-2)+nu)/2 for the Singular kind
  int dim_ = 0;
  ThetaWindow window_;
  ThetaWindow base_window_;  // support of the unmirrored kernel
  bool mirrored_ = false;
};

/// |S^{N-1}|: 2π for N=2, 4π for N=3.
double sphere_area(int dim);
/// |S^{N-2}| with the convention |S^0| = 2.
double equator_area(int dim);

/// Options of the graded θ-quadrature used for angular integrals.
/// Near a grazing singularity the nodes are geometrically graded,
/// θ_k = theta_min ⋅ ratio^k, and the integral is accepted only once the
/// Cauchy criterion below is met under refinement.
struct GradedOptions {
  double theta_min = 1e-6;
  double ratio = 2.0;
  int nodes_per_band = 8;
  double rel_tol = 1e-8;
  int max_refine = 14;
};

/// ∫_{S^{N-1}} b(cosθ) dσ with dσ = |S^{N-2}| (sinθ)^{N-2} dθ.
/// Throws NonConvergenceError for non-integrable singular kernels.
double angular_mass(const AngularKernel& b, int dim,
                    const GradedOptions& opts = {});

/// ∫_{S^{N-1}} b(cosθ)(1-cosθ) dσ.  Finite for ν > -3.
double angular_moment(const AngularKernel& b, int dim,
                      const GradedOptions& opts = {});

/// Product-form collision kernel B(x, y) = |x|^γ b(|y|) in dimension N.
struct CollisionKernel {
  double gamma;
  AngularKernel angular;
  int dim;

  CollisionKernel(double gamma_, AngularKernel angular_, int dim_);
};

/// Collision kernel after folding θ ↦ π-θ: the angular part becomes
/// b(cosθ) + b(cos(π-θ)) supported in [0, π/2].  Weak integrals of Q against
/// test functions are unchanged.
struct SymmetrizedKernel {
  CollisionKernel base;
  AngularKernel angular;  // mirrored (or further restricted) angular part

  double gamma() const { return base.gamma; }
  int dim() const { return base.dim; }

  /// Same base kernel with the angular part replaced (split parts).
  SymmetrizedKernel with_angular(AngularKernel part) const;
};

SymmetrizedKernel symmetrize(const CollisionKernel& kernel);

}  // namespace boltzlp
