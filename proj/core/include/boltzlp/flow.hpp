#pragma once

#include <optional>

#include "boltzlp/inequalities.hpp"

namespace boltzlp {

enum class TimeScheme { ExplicitEuler, RK4 };

struct FlowConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  TimeScheme scheme = TimeScheme::ExplicitEuler;
  double eps_reg = 0.0;          // diffusion coefficient of the ε Δ_v term
  double mollifier_width = 0.0;  // Gaussian width applied to the initial datum
  bool positivity = true;        // clip negative values, log clipped mass
  bool mass_rescale = false;     // renormalize mass after each step
  double sample_interval = 0.05;
  std::optional<double> kt_exponent_override;  // Bernoulli K_T exponent
};

struct TrajectorySample {
  double t = 0.0;
  double mass = 0.0;
  Vec momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
  double entropy = 0.0;
  std::vector<double> lp_norms;
  std::vector<double> l1_moments;
};

struct Trajectory {
  int dim = 2;
  std::vector<NormSpec> norm_specs;
  std::vector<double> l1_orders;
  std::vector<TrajectorySample> samples;
  double clipped_mass = 0.0;
  int steps_per_sample = 1;

  int find_norm(double p, double q) const;
  int find_l1(double s) const;
};

/// Loss-term stability bound 0.5 / max_i(loss rate at v_i), estimated from
/// ‖f‖_{L1_γ} ⋅ sup_grid <v>^γ ⋅ ∫ b dσ.
double stable_dt_bound(const Distribution& f, const SymmetrizedKernel& kernel);

/// Gaussian mollification of a grid distribution (separable convolution).
Distribution mollify(const Distribution& f, double width);

/// One explicit step of ∂t f = Q(f,f) (+ eps_reg Δ_v f).  Aborts when the
/// sup norm grows by more than 10x (stability violation).
Distribution step(const Distribution& f, double dt,
                  const SymmetrizedKernel& kernel, const FlowConfig& config,
                  const QuadOptions& quad, double* clipped_mass = nullptr);

Trajectory simulate(const Distribution& f0, const SymmetrizedKernel& kernel,
                    const FlowConfig& config, const QuadOptions& quad,
                    const std::vector<NormSpec>& norms,
                    const std::vector<double>& l1_orders);

/// y0 e^{Ct}: Gronwall bound on y(t) = ‖f‖^p_{Lp_q}.
double gronwall_envelope(double y0, double C, double t);

/// [C / (K_T (1 - e^{-Cγt/(pr)}))]^{r/γ}: Bernoulli comparison bound on
/// ‖f‖_{Lp_r}(t); blows up polynomially as t → 0+.
double bernoulli_envelope(double t, double C, double k_t, double p, double r,
                          double gamma);

/// max{y(τ), (C/K)^{1/ε}}: uniform-in-time bound for t ≥ τ.
double longtime_bound(double y_tau, double c_plus, double k_minus,
                      double epsilon);

struct AprioriConstants {
  double p = 2.0;
  double q = 1.0;
  double gamma = 1.0;
  double c_plus = 0.0;   // split-bound C+ (per-D normalization)
  double k_minus = 0.0;  // absorbed damping constant
};

struct BernoulliSpec {
  double r;       // target weight exponent, r > q
  double c_plus;  // split-bound C+ constructed at weight r
};

/// Trajectory checks:
///  - finite-difference dy/dt ≤ p (C+ y - K- w) + FD tolerance,
///  - log-space Gronwall dominance log y(t) ≤ log y0 + p C+ t,
///  - Bernoulli dominance ‖f‖_{Lp_r}(t) ≤ envelope(t) for t ≥ t_min
///    (γ > 0 only; K_T from the trajectory's sup Lp norm).
std::vector<InequalityReport> check_apriori(
    const Trajectory& traj, const AprioriConstants& constants,
    const std::vector<BernoulliSpec>& bernoulli, double t_min = 0.1,
    std::optional<double> kt_exponent_override = std::nullopt);

/// Entropy non-increase along the trajectory with a per-step budget.
InequalityReport check_entropy_monotone(const Trajectory& traj,
                                        double per_step_tol = 1e-8);

}  // namespace boltzlp
