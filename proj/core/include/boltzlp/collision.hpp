#pragma once

#include "boltzlp/quadrature.hpp"
#include "boltzlp/state.hpp"

namespace boltzlp {

struct CollisionResult {
  Distribution gain;
  Distribution loss;
  Distribution q;  // gain - loss elementwise
};

/// Direct quadrature of Q(g,f) on the grid,
///   Q(g,f)(v_i) ≈ Σ_{j,σ} w_σ h^N |v_i-v_j|^γ b(cosθ)
///                 [f(v')g(v'*) - f(v_i)g(v_j)],
/// with off-grid values by multilinear (or cubic) interpolation, zero outside
/// the grid.  Rejects kernels that are non-integrable at θ = 0 (pointwise Q
/// is not defined termwise there; use lyapunov_functional instead).
CollisionResult eval_Q(const Distribution& g, const Distribution& f,
                       const SymmetrizedKernel& kernel,
                       const QuadOptions& quad);

/// Single-sweep convergence diagnostics of a σ-quadrature value: the nested
/// full/half/quarter node subsets plus a geometric estimate of the mass
/// truncated below theta_min.
struct ConvergenceReport {
  double fine = 0.0;
  double mid = 0.0;
  double coarse = 0.0;
  double rate = 0.0;             // log2(|mid-coarse| / |fine-mid|)
  double truncation = 0.0;       // tail below theta_min
  double error_estimate = 0.0;   // |fine-mid| + truncation
  bool converged = true;
};

/// D = ∫ Q(g,f) f^{p-1} <v>^{pq} dv evaluated in the transformed form
///   ∫∫∫ [<v'>^{pq} f^{p-1}(v') f(v) - <v>^{pq} f^p(v)] g(v*)
///        |v-v*|^γ b(cosθ) dσ dv* dv,
/// whose bracket vanishes as θ → 0, so the θ-graded rule converges for
/// singular kernels under the (p, q) vs ν compatibility conditions.
/// Throws NonConvergenceError when the graded quadrature's tail estimate
/// dominates the value.
double lyapunov_functional(const Distribution& f, const Distribution& g,
                           const NormSpec& spec,
                           const SymmetrizedKernel& kernel,
                           const QuadOptions& quad,
                           ConvergenceReport* convergence = nullptr);

/// Untransformed cross-check oracle Σ_i Q(g,f)(v_i) f_i^{p-1} <v_i>^{pq} h^N.
/// Cutoff kernels only; exists to validate the transformed evaluator.
double lyapunov_functional_direct(const Distribution& f,
                                  const Distribution& g, const NormSpec& spec,
                                  const SymmetrizedKernel& kernel,
                                  const QuadOptions& quad);

/// R_α(x): u-average of the weight increment across a collision,
///   ∫_{S^{N-2}} [(1 + |v|^2(1-x^2) + |v*|^2 x^2
///                 + 2x sqrt(1-x^2) |v-v*| u·v*)^α - (1+|v|^2)^α] du,
/// so that ∫ [<v'>^{2α} - <v>^{2α}] du = R_α(sin θ/2).
double r_alpha(double x, const Vec& v, const Vec& v_star, double alpha,
               int dim, int m_u);

/// Same quadrature extended to x ∈ [-√2/2, √2/2] (symmetry tests).
double r_alpha_extended(double x, const Vec& v, const Vec& v_star,
                        double alpha, int dim, int m_u);

/// Closed-form derivative quadratures |R'_α| (order 1) and |R''_α| (order 2).
double r_alpha_derivative(double x, const Vec& v, const Vec& v_star,
                          double alpha, int order, int dim, int m_u);

/// Off-grid sample of a distribution (interpolation order 1 or 3, zero
/// outside the grid, clamped at 0).
double sample(const Distribution& f, const Vec& v, int interp_order);

namespace detail {

/// Fused single sweep producing the transformed-D levels and, optionally,
/// the pieces of the Young-split right-hand side used by check_estim1:
///   t2:       Σ c(θ) |d|^γ b [<v'>^{pq} - <v>^{pq}] f^p g*   (before 1/p)
///   pair_sum: Σ_{ij} |d|^γ <v_i>^{pq} f_i^p g_j h^{2N}
/// with c(θ) = cos(θ/2)^{-(N+γ)/p'}.
struct SweepResult {
  double d_fine = 0, d_mid = 0, d_coarse = 0, d_band0 = 0, d_band1 = 0;
  double t2_fine = 0, t2_mid = 0, t2_coarse = 0, t2_band0 = 0, t2_band1 = 0;
  double pair_sum = 0;
};
SweepResult lyapunov_sweep(const Distribution& f, const Distribution& g,
                           double p, double q, const SymmetrizedKernel& kernel,
                           const SigmaRule& rule, int interp_order,
                           bool with_estim1_terms);

ConvergenceReport make_convergence(double fine, double mid, double coarse,
                                   double band0, double band1, int bands);

}  // namespace detail

}  // namespace boltzlp
