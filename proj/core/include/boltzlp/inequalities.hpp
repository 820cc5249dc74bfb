#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boltzlp/collision.hpp"

namespace boltzlp {

/// Structured result of one functional-inequality check: lhs ≤ rhs is the
/// claim, margin = rhs - lhs, and pass ⇔ margin ≥ -tol_margin with
/// tol_margin = 1e-6 max(|lhs|, |rhs|, 1) + quadrature error estimate.
struct InequalityReport {
  std::string name;
  int member = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol_margin = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> constants;
  ConvergenceReport lhs_convergence;
  ConvergenceReport rhs_convergence;
};

InequalityReport finalize_report(std::string name, double lhs, double rhs,
                                 ConvergenceReport lhs_conv,
                                 ConvergenceReport rhs_conv);

/// Optimal Young parameter μ(θ) = cos(θ/2)^{-(N+γ)/p}.
double optimal_mu(double theta, double p, int dim, double gamma);

/// Young-split bound: lhs is the transformed collision functional, rhs the
/// two explicit triple integrals with weights [cos(θ/2)^{-(N+γ)/p'} - 1] and
/// (1/p) cos(θ/2)^{-(N+γ)/p'} [<v'>^{pq} - <v>^{pq}], same graded rule.
InequalityReport check_estim1(const Distribution& f, const Distribution& g,
                              const NormSpec& spec,
                              const SymmetrizedKernel& kernel,
                              const QuadOptions& quad);

/// C_{p,N,γ}(b) = cst(p,N,γ) ⋅ ∫ b (1-cosθ) dσ with
/// cst = max(κ1, κ1 Ĉ_α / p, Ĉ_α / p):
///  - κ1 = sup_{(0,π/2]} [cos(θ/2)^{-(N+γ)/p'} - 1]/(1-cosθ), including the
///    θ→0 limit (N+γ)/(4p');
///  - Ĉ_α = sampled sup of |R'_α| (α ≥ 1) or |R''_α| (α ≥ 2) normalized by
///    <v>^{2α} <v*>^{2α}; the sample must be stable under doubling (±5%).
struct FoncConstant {
  double value = 0.0;
  double cst = 0.0;
  double kappa1 = 0.0;
  double c_alpha_hat = 0.0;
  double moment = 0.0;
  double alpha = 0.0;
  int derivative_order = 1;
};
FoncConstant construct_fonc_constant(double p, int dim, double gamma,
                                     double alpha, const AngularKernel& b,
                                     const QuadOptions& quad);

/// lhs ≤ C_{p,N,γ}(b) ‖g‖_{L1_{pq+γ}} ‖f‖^p_{Lp_{q+γ/p}}.
InequalityReport check_fonc(const Distribution& f, const Distribution& g,
                            const NormSpec& spec,
                            const SymmetrizedKernel& kernel,
                            const QuadOptions& quad);

/// Constants of the gain/loss split bound for kernels supported in
/// [θ0, π/2].  The selection follows the fixed order μ2 (halving), then r
/// (doubling), then μ1 (doubling), each until its term is ≤ K0/6, so the
/// closing condition
///   [(1-1/p) μ1^{-1} cos(π/4)^{-N-γ}
///    + (1-1/p) μ2^{-1} (sin θ0/2)^{-N-γ} (1+r²)^{(γ-2)/2}
///    + (1/p) μ2^{p-1}] ⋅ ‖f‖_{L1_{pq+γ}} ≤ K0/2
/// holds by construction (and is re-checked).
struct Estim3Constants {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double r = 1.0;
  double theta0 = 0.0;
  double c_plus = 0.0;
  double k_minus = 0.0;
  double k0 = 0.0;
  double c0 = 0.0;
  double l1_lower = 0.0;
  double l1_pq2_upper = 0.0;
  double b_mass = 0.0;
};
Estim3Constants construct_estim3_constants(double l1_lower,
                                           double l1_pq2_upper, double p,
                                           double q, double gamma, int dim,
                                           double theta0,
                                           const AngularKernel& b_cutoff,
                                           const QuadOptions& quad);

/// lhs ≤ C+ ‖f‖^p_{Lp_q} - K- ‖f‖^p_{Lp_{q+γ/p}} on the cutoff part.
InequalityReport check_estim3(const Distribution& f, const NormSpec& spec,
                              const SymmetrizedKernel& cutoff_kernel,
                              const Estim3Constants& constants,
                              const QuadOptions& quad);

/// Absorption search: splits b = b_c + b_r at the largest θ0 (bisection over
/// a geometric grid) whose remainder can be absorbed,
///   C_{p,N,γ}(b_r) ⋅ (L1_{pq+γ} upper bound) ≤ K-(b_c)/2.
/// The combined bound then reads
///   D ≤ C+(b_c) ‖f‖^p_{Lp_q} - (K-(b_c)/2) ‖f‖^p_{Lp_{q+γ/p}}.
struct AbsorptionConstants {
  double theta0 = 0.0;
  Estim3Constants cutoff;
  double remainder_constant = 0.0;  // C(b_r) ⋅ L1_{pq+γ} bound
};
AbsorptionConstants construct_estim5_constants(
    double l1_lower, double l1_pq2_upper, double l1_pqgamma_upper,
    const NormSpec& spec, const SymmetrizedKernel& kernel,
    const QuadOptions& quad);

/// Runs the absorption search with the distribution's own L1 bounds and
/// checks lhs(full kernel) against the combined bound.
struct Estim5Result {
  InequalityReport report;
  double theta0 = 0.0;
  Estim3Constants cutoff_constants;
  double remainder_constant = 0.0;  // C(b_r) ‖f‖_{L1_{pq+γ}}
};
Estim5Result check_estim5(const Distribution& f, const NormSpec& spec,
                          const SymmetrizedKernel& kernel,
                          const QuadOptions& quad);

/// Empirical probe of the gain-regularity exponent: fits the largest
/// ε ∈ (0,1) with D(f) + K- ‖f‖^p_{Lp_{q+γ/p}} ≤ C+ ‖f‖^{p(1-ε)}_{Lp_q}
/// across a family of distributions with growing Lp_q norm.  K- comes from
/// the split-bound construction on family-wide L1 bounds; ε and C+ are
/// fitted metadata, not theorem constants.
struct EpsilonProbe {
  double epsilon = 0.0;
  double c_plus = 0.0;
  double k_minus = 0.0;
  double fit_residual = 0.0;
  double slope = 0.0;
  int family_size = 0;
  int fitted_members = 0;
  std::vector<double> y_values;  // ‖f‖^p_{Lp_q} per member
  std::vector<double> z_values;  // D + K- w per member
};
EpsilonProbe probe_estim4_epsilon(const std::vector<Distribution>& family,
                                  const NormSpec& spec, double theta0,
                                  const SymmetrizedKernel& kernel,
                                  const QuadOptions& quad);

namespace detail {
/// Numeric guard for the loss-term lower bound
/// |v-v*|^γ ≥ 2^{-γ} <v>^γ - 2 <v*>^γ used by the split-bound constants.
bool verify_loss_lower_bound(double gamma, int dim);
}  // namespace detail

}  // namespace boltzlp
