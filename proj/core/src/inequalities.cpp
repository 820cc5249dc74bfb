#include "boltzlp/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace boltzlp {

namespace {

// deterministic splitmix64 stream for the sampled sup estimates
struct SampleRng {
  std::uint64_t state;
  explicit SampleRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

Vec random_direction(SampleRng& rng, int dim) {
  // rejection-free: angle for N=2, (cosφ sinψ, sinφ sinψ, cosψ) for N=3
  if (dim == 2) {
    double a = 2.0 * kPi * rng.uniform();
    return Vec{std::cos(a), std::sin(a), 0.0};
  }
  double c = 2.0 * rng.uniform() - 1.0;
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double a = 2.0 * kPi * rng.uniform();
  return Vec{s * std::cos(a), s * std::sin(a), c};
}

double tol_margin_for(double lhs, double rhs, const ConvergenceReport& lc,
                      const ConvergenceReport& rc) {
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return 1e-6 * scale + lc.error_estimate + rc.error_estimate;
}

}  // namespace

InequalityReport finalize_report(std::string name, double lhs, double rhs,
                                 ConvergenceReport lhs_conv,
                                 ConvergenceReport rhs_conv) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = rhs - lhs;
  rep.lhs_convergence = lhs_conv;
  rep.rhs_convergence = rhs_conv;
  rep.tol_margin = tol_margin_for(lhs, rhs, lhs_conv, rhs_conv);
  rep.pass = rep.margin >= -rep.tol_margin;
  return rep;
}

double optimal_mu(double theta, double p, int dim, double gamma) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-14))
    throw std::domain_error("optimal_mu: theta outside [0, pi/2]");
  return pow_fast(std::cos(0.5 * theta), -(dim + gamma) / p);
}

InequalityReport check_estim1(const Distribution& f, const Distribution& g,
                              const NormSpec& spec,
                              const SymmetrizedKernel& kernel,
                              const QuadOptions& quad) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("check_estim1: f and g must share one grid");
  require_norm_compatible(spec, kernel.angular);

  SigmaRule rule = SigmaRule::build(kernel.angular, f.grid.dim, quad);
  detail::SweepResult sw = detail::lyapunov_sweep(
      f, g, spec.p, spec.q, kernel, rule, quad.interp_order, true);

  // first rhs term is separable: pair_sum × ∫ b [c(θ) - 1] dσ
  const double cexp = (kernel.dim() + kernel.gamma()) / spec.p_conjugate();
  double a_f = 0.0, a_m = 0.0, a_c = 0.0, a_b0 = 0.0, a_b1 = 0.0;
  for (const ThetaNode& node : rule.nodes) {
    double cm1 = pow_fast(node.cv_stretch, cexp) - 1.0;
    a_f += node.w * node.b * cm1;
    a_m += node.w_mid * node.b * cm1;
    a_c += node.w_coarse * node.b * cm1;
    if (node.band == 0)
      a_b0 += node.w * node.b * cm1;
    else if (node.band == 1)
      a_b1 += node.w * node.b * cm1;
  }
  const double equator = rule.u_weight * rule.m_u;
  const double inv_p = 1.0 / spec.p;
  auto rhs_level = [&](double a, double t2) {
    return sw.pair_sum * a * equator + inv_p * t2;
  };
  double rhs = rhs_level(a_f, sw.t2_fine);
  ConvergenceReport rhs_conv = detail::make_convergence(
      rhs, rhs_level(a_m, sw.t2_mid), rhs_level(a_c, sw.t2_coarse),
      sw.pair_sum * a_b0 * equator + inv_p * sw.t2_band0,
      sw.pair_sum * a_b1 * equator + inv_p * sw.t2_band1, rule.bands);
  ConvergenceReport lhs_conv = detail::make_convergence(
      sw.d_fine, sw.d_mid, sw.d_coarse, sw.d_band0, sw.d_band1, rule.bands);

  InequalityReport rep =
      finalize_report("estim1", sw.d_fine, rhs, lhs_conv, rhs_conv);
  rep.constants = {{"p", spec.p},
                   {"q", spec.q},
                   {"gamma", kernel.gamma()},
                   {"term1", sw.pair_sum * a_f * equator},
                   {"term2", inv_p * sw.t2_fine},
                   {"theta_min", rule.theta_min_used}};
  return rep;
}

FoncConstant construct_fonc_constant(double p, int dim, double gamma,
                                     double alpha, const AngularKernel& b,
                                     const QuadOptions& quad) {
  if (!(alpha >= 1.0))
    throw std::invalid_argument(
        "construct_fonc_constant: alpha = pq/2 must be >= 1");
  FoncConstant out;
  out.alpha = alpha;
  out.derivative_order = alpha >= 2.0 ? 2 : 1;

  // κ1 on a fine θ grid, plus the analytic θ→0 limit (N+γ)/(4 p')
  const double p_conj = p / (p - 1.0);
  const double cexp = (dim + gamma) / p_conj;
  double kappa1 = (dim + gamma) / (4.0 * p_conj);
  const int grid_points = 2048;
  for (int k = 1; k <= grid_points; ++k) {
    double theta = 0.5 * kPi * k / grid_points;
    double ratio = (pow_fast(1.0 / std::cos(0.5 * theta), cexp) - 1.0) /
                   (1.0 - std::cos(theta));
    kappa1 = std::max(kappa1, ratio);
  }
  out.kappa1 = kappa1;

  // sampled sup of the normalized derivative of R_α, doubling-stable
  auto sampled_sup = [&](int count) {
    SampleRng rng(0x5DEECE66Dull);
    const double scales[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    const int n_x = 33;
    double sup = 0.0;
    for (int s = 0; s < count; ++s) {
      double sv = scales[rng.next() % 7];
      double sw = scales[rng.next() % 7];
      Vec v = random_direction(rng, dim);
      Vec vs = random_direction(rng, dim);
      for (int d = 0; d < 3; ++d) {
        v[d] *= sv;
        vs[d] *= sw;
      }
      double weight = pow_fast(bracket2(v, dim), alpha) *
                      pow_fast(bracket2(vs, dim), alpha);
      for (int m = 0; m <= n_x; ++m) {
        double x = 0.70710678118654757 * m / n_x;
        double val = std::abs(r_alpha_derivative(x, v, vs, alpha,
                                                 out.derivative_order, dim,
                                                 quad.m_u));
        sup = std::max(sup, val / weight);
      }
    }
    return sup;
  };
  const int base_count = 192;
  double sup1 = sampled_sup(base_count);
  double sup2 = sampled_sup(2 * base_count);
  if (std::abs(sup2 - sup1) > 0.05 * std::max(sup2, 1e-300))
    throw NonConvergenceError(
        "construct_fonc_constant: sampled sup of the R derivative has not "
        "stabilized under doubling",
        sup2 / std::max(sup1, 1e-300));
  out.c_alpha_hat = sup2;

  out.moment = b.is_zero() ? 0.0 : angular_moment(b, dim);
  out.cst = std::max({kappa1, kappa1 * out.c_alpha_hat / p,
                      out.c_alpha_hat / p});
  out.value = out.cst * out.moment;
  return out;
}

InequalityReport check_fonc(const Distribution& f, const Distribution& g,
                            const NormSpec& spec,
                            const SymmetrizedKernel& kernel,
                            const QuadOptions& quad) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("check_fonc: f and g must share one grid");
  require_norm_compatible(spec, kernel.angular);
  ConvergenceReport lhs_conv;
  double lhs = lyapunov_functional(f, g, spec, kernel, quad, &lhs_conv);
  const double gamma = kernel.gamma();
  FoncConstant c = construct_fonc_constant(spec.p, kernel.dim(), gamma,
                                           0.5 * spec.p * spec.q,
                                           kernel.angular, quad);
  double g_norm = l1_moment(g, spec.p * spec.q + gamma);
  NormSpec shifted(spec.p, spec.q + gamma / spec.p);
  double f_norm = weighted_lp_norm(f, shifted);
  double rhs = c.value * g_norm * pow_fast(f_norm, spec.p);
  InequalityReport rep =
      finalize_report("fonc", lhs, rhs, lhs_conv, ConvergenceReport{});
  rep.constants = {{"C_pNgamma", c.value},
                   {"cst", c.cst},
                   {"kappa1", c.kappa1},
                   {"C_alpha_hat", c.c_alpha_hat},
                   {"angular_moment", c.moment},
                   {"alpha", c.alpha},
                   {"derivative_order",
                    static_cast<double>(c.derivative_order)},
                   {"g_l1_pq_gamma", g_norm},
                   {"f_lp_shifted", f_norm}};
  return rep;
}

namespace detail {

bool verify_loss_lower_bound(double gamma, int dim) {
  SampleRng rng(0xB5297A4Dull);
  for (int s = 0; s < 20000; ++s) {
    double sv = 16.0 * rng.uniform();
    double sw = 16.0 * rng.uniform();
    Vec v = random_direction(rng, dim);
    Vec vs = random_direction(rng, dim);
    for (int d = 0; d < 3; ++d) {
      v[d] *= sv;
      vs[d] *= sw;
    }
    Vec rel{v[0] - vs[0], v[1] - vs[1], v[2] - vs[2]};
    double lhs = pow_fast(norm(rel, dim), gamma);
    double rhs = pow_fast(2.0, -gamma) * pow_fast(std::sqrt(bracket2(v, dim)),
                                                  gamma) -
                 2.0 * pow_fast(std::sqrt(bracket2(vs, dim)), gamma);
    if (lhs < rhs - 1e-12) return false;
  }
  return true;
}

}  // namespace detail

Estim3Constants construct_estim3_constants(double l1_lower,
                                           double l1_pq2_upper, double p,
                                           double q, double gamma, int dim,
                                           double theta0,
                                           const AngularKernel& b_cutoff,
                                           const QuadOptions& quad) {
  if (!(l1_lower > 0.0))
    throw std::invalid_argument(
        "construct_estim3_constants: L1 lower bound must be > 0");
  if (!(l1_pq2_upper >= l1_lower))
    throw std::invalid_argument(
        "construct_estim3_constants: L1_{pq+2} upper bound below the L1 "
        "lower bound");
  if (!(theta0 > 0.0 && theta0 < kPi / 2.0 + 1e-12))
    throw std::invalid_argument(
        "construct_estim3_constants: theta0 must lie in (0, pi/2]");
  if (b_cutoff.is_zero())
    throw std::invalid_argument(
        "construct_estim3_constants: empty cutoff part");
  if (!detail::verify_loss_lower_bound(gamma, dim))
    throw std::logic_error(
        "construct_estim3_constants: loss lower bound failed its numeric "
        "verification");

  GradedOptions gopts;
  gopts.theta_min = quad.theta_min * 1e-2;
  Estim3Constants c;
  c.theta0 = theta0;
  c.l1_lower = l1_lower;
  c.l1_pq2_upper = l1_pq2_upper;
  c.b_mass = angular_mass(b_cutoff, dim, gopts);
  c.k0 = pow_fast(2.0, -gamma) * l1_lower;
  c.c0 = 2.0 * l1_pq2_upper;

  const double U = l1_pq2_upper;  // bounds ‖f‖_{L1_{pq+γ}} since γ ≤ 2
  const double target = c.k0 / 6.0;
  const double young = 1.0 - 1.0 / p;
  const double cos_pow = pow_fast(1.0 / std::cos(kPi / 4.0),
                                  static_cast<double>(dim) + gamma);
  const double sin_pow = pow_fast(1.0 / std::sin(0.5 * theta0),
                                  static_cast<double>(dim) + gamma);

  c.mu2 = 1.0;
  while ((1.0 / p) * pow_fast(c.mu2, p - 1.0) * U > target) {
    c.mu2 *= 0.5;
    if (c.mu2 < 1e-300)
      throw std::runtime_error(
          "construct_estim3_constants: mu2 underflowed");
  }
  c.r = 1.0;
  while (young / c.mu2 * sin_pow *
             pow_fast(1.0 + c.r * c.r, 0.5 * (gamma - 2.0)) * U >
         target) {
    c.r *= 2.0;
    if (!std::isfinite(c.r))
      throw std::runtime_error("construct_estim3_constants: r overflowed");
  }
  c.mu1 = 1.0;
  while (young / c.mu1 * cos_pow * U > target) {
    c.mu1 *= 2.0;
    if (!std::isfinite(c.mu1))
      throw std::runtime_error("construct_estim3_constants: mu1 overflowed");
  }

  double closing = (young / c.mu1 * cos_pow +
                    young / c.mu2 * sin_pow *
                        pow_fast(1.0 + c.r * c.r, 0.5 * (gamma - 2.0)) +
                    (1.0 / p) * pow_fast(c.mu2, p - 1.0)) *
                   U;
  if (!(closing <= c.k0 / 2.0 + 1e-12 * c.k0))
    throw std::logic_error(
        "construct_estim3_constants: closing condition violated");

  c.c_plus = c.c0 * c.b_mass +
             c.b_mass * (1.0 / p) * pow_fast(c.mu1, p - 1.0) *
                 pow_fast(1.0 + c.r * c.r, 0.5 * gamma) * U;
  c.k_minus = 0.5 * c.k0 * c.b_mass;
  if (!std::isfinite(c.c_plus))
    throw std::runtime_error(
        "construct_estim3_constants: C+ overflowed double precision");
  return c;
}

InequalityReport check_estim3(const Distribution& f, const NormSpec& spec,
                              const SymmetrizedKernel& cutoff_kernel,
                              const Estim3Constants& constants,
                              const QuadOptions& quad) {
  const double gamma = cutoff_kernel.gamma();
  double f_mass = mass(f);
  double f_upper = l1_moment(f, spec.p * spec.q + 2.0);
  if (f_mass < constants.l1_lower * (1.0 - 1e-9))
    throw std::invalid_argument(
        "check_estim3: f violates the L1 lower bound used by the constants");
  if (f_upper > constants.l1_pq2_upper * (1.0 + 1e-9))
    throw std::invalid_argument(
        "check_estim3: f violates the L1_{pq+2} upper bound used by the "
        "constants");

  ConvergenceReport lhs_conv;
  double lhs =
      lyapunov_functional(f, f, spec, cutoff_kernel, quad, &lhs_conv);
  double y = pow_fast(weighted_lp_norm(f, spec), spec.p);
  NormSpec shifted(spec.p, spec.q + gamma / spec.p);
  double w = pow_fast(weighted_lp_norm(f, shifted), spec.p);
  double rhs = constants.c_plus * y - constants.k_minus * w;
  InequalityReport rep =
      finalize_report("estim3", lhs, rhs, lhs_conv, ConvergenceReport{});
  rep.constants = {{"C_plus", constants.c_plus},
                   {"K_minus", constants.k_minus},
                   {"K0", constants.k0},
                   {"C0", constants.c0},
                   {"mu1", constants.mu1},
                   {"mu2", constants.mu2},
                   {"r", constants.r},
                   {"theta0", constants.theta0},
                   {"b_mass", constants.b_mass},
                   {"lp_q", y},
                   {"lp_q_shifted", w}};
  return rep;
}

AbsorptionConstants construct_estim5_constants(
    double l1_lower, double l1_pq2_upper, double l1_pqgamma_upper,
    const NormSpec& spec, const SymmetrizedKernel& kernel,
    const QuadOptions& quad) {
  const double gamma = kernel.gamma();
  const int dim = kernel.dim();
  const double alpha = 0.5 * spec.p * spec.q;

  // geometric θ0 candidates, largest first; feasibility is monotone
  std::vector<double> grid;
  for (int j = 0; j <= 24; ++j)
    grid.push_back(0.5 * kPi * std::pow(0.5, 0.5 * j));

  struct Candidate {
    Estim3Constants constants;
    double remainder = 0.0;
    bool feasible = false;
  };
  auto evaluate = [&](double theta0) {
    Candidate cand;
    auto [b_c, b_r] = kernel.angular.split(theta0);
    if (b_c.is_zero()) return cand;
    cand.constants = construct_estim3_constants(
        l1_lower, l1_pq2_upper, spec.p, spec.q, gamma, dim, theta0, b_c,
        quad);
    double c_r = b_r.is_zero()
                     ? 0.0
                     : construct_fonc_constant(spec.p, dim, gamma, alpha, b_r,
                                               quad)
                           .value;
    cand.remainder = c_r * l1_pqgamma_upper;
    cand.feasible = cand.remainder <= 0.5 * cand.constants.k_minus;
    return cand;
  };

  int lo = 0, hi = static_cast<int>(grid.size()) - 1;
  Candidate best = evaluate(grid[lo]);
  if (!best.feasible) {
    // bisect for the boundary of the feasible (small θ0) side
    Candidate at_hi = evaluate(grid[hi]);
    if (!at_hi.feasible)
      throw NonConvergenceError(
          "construct_estim5_constants: no absorption angle found on the "
          "theta0 grid",
          0.0);
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      Candidate cand = evaluate(grid[mid]);
      if (cand.feasible) {
        hi = mid;
        at_hi = cand;
      } else {
        lo = mid;
      }
    }
    best = at_hi;
    lo = hi;
  }
  AbsorptionConstants out;
  out.theta0 = grid[lo];
  out.cutoff = best.constants;
  out.remainder_constant = best.remainder;
  return out;
}

Estim5Result check_estim5(const Distribution& f, const NormSpec& spec,
                          const SymmetrizedKernel& kernel,
                          const QuadOptions& quad) {
  require_norm_compatible(spec, kernel.angular);
  const double gamma = kernel.gamma();

  AbsorptionConstants abs_constants = construct_estim5_constants(
      mass(f) * (1.0 - 1e-9),
      l1_moment(f, spec.p * spec.q + 2.0) * (1.0 + 1e-9),
      l1_moment(f, spec.p * spec.q + gamma), spec, kernel, quad);
  const Estim3Constants& best = abs_constants.cutoff;
  double theta0 = abs_constants.theta0;

  ConvergenceReport lhs_conv;
  double lhs = lyapunov_functional(f, f, spec, kernel, quad, &lhs_conv);
  double y = pow_fast(weighted_lp_norm(f, spec), spec.p);
  NormSpec shifted(spec.p, spec.q + gamma / spec.p);
  double w = pow_fast(weighted_lp_norm(f, shifted), spec.p);
  double rhs = best.c_plus * y - 0.5 * best.k_minus * w;

  Estim5Result out;
  out.theta0 = theta0;
  out.cutoff_constants = best;
  out.remainder_constant = abs_constants.remainder_constant;
  out.report = finalize_report("estim5", lhs, rhs, lhs_conv,
                               ConvergenceReport{});
  out.report.constants = {{"theta0", theta0},
                          {"C_plus", best.c_plus},
                          {"K_minus_half", 0.5 * best.k_minus},
                          {"remainder_term", abs_constants.remainder_constant},
                          {"lp_q", y},
                          {"lp_q_shifted", w}};
  return out;
}

EpsilonProbe probe_estim4_epsilon(const std::vector<Distribution>& family,
                                  const NormSpec& spec, double theta0,
                                  const SymmetrizedKernel& kernel,
                                  const QuadOptions& quad) {
  if (family.size() < 4)
    throw std::invalid_argument(
        "probe_estim4_epsilon: family must have at least 4 members");
  if (!(kernel.angular.window().lo > 0.0))
    throw std::invalid_argument(
        "probe_estim4_epsilon: kernel must be a cutoff part supported away "
        "from theta = 0");
  const double gamma = kernel.gamma();

  double m_lower = std::numeric_limits<double>::infinity();
  double m_upper = 0.0;
  for (const Distribution& f : family) {
    m_lower = std::min(m_lower, mass(f));
    m_upper = std::max(m_upper, l1_moment(f, spec.p * spec.q + 2.0));
  }
  Estim3Constants c3 = construct_estim3_constants(
      m_lower * (1.0 - 1e-9), m_upper * (1.0 + 1e-9), spec.p, spec.q, gamma,
      kernel.dim(), theta0, kernel.angular, quad);

  EpsilonProbe probe;
  probe.k_minus = c3.k_minus;
  probe.family_size = static_cast<int>(family.size());
  NormSpec shifted(spec.p, spec.q + gamma / spec.p);
  for (const Distribution& f : family) {
    double d = lyapunov_functional(f, f, spec, kernel, quad);
    double y = pow_fast(weighted_lp_norm(f, spec), spec.p);
    double w = pow_fast(weighted_lp_norm(f, shifted), spec.p);
    probe.y_values.push_back(y);
    probe.z_values.push_back(d + c3.k_minus * w);
  }

  // log-log regression over the gain-dominated members (z > 0)
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (probe.z_values[i] > 0.0 && probe.y_values[i] > 0.0) {
      lx.push_back(std::log(probe.y_values[i]));
      ly.push_back(std::log(probe.z_values[i]));
    }
  }
  probe.fitted_members = static_cast<int>(lx.size());
  if (probe.fitted_members < 3)
    throw NonConvergenceError(
        "probe_estim4_epsilon: family does not stress the Lp norm (fewer "
        "than 3 gain-dominated members)",
        0.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double nfit = static_cast<double>(lx.size());
  double denom = nfit * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * std::max(1.0, nfit * sxx))
    throw NonConvergenceError(
        "probe_estim4_epsilon: degenerate fit, family Lp norms do not vary",
        0.0);
  probe.slope = (nfit * sxy - sx * sy) / denom;
  probe.epsilon = std::clamp(1.0 - probe.slope, 0.01, 0.99);

  double c_plus = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (probe.z_values[i] <= 0.0) continue;
    double needed = probe.z_values[i] /
                    pow_fast(probe.y_values[i], 1.0 - probe.epsilon);
    c_plus = std::max(c_plus, needed);
  }
  probe.c_plus = c_plus;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double fit = std::log(c_plus) + (1.0 - probe.epsilon) * lx[i];
    residual = std::max(residual, std::abs(ly[i] - fit));
  }
  probe.fit_residual = residual;
  return probe;
}

}  // namespace boltzlp
