#include "boltzlp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boltzlp/report.hpp"
#include "boltzlp/snapshot.hpp"

namespace boltzlp {

namespace {

std::vector<NormSpec> norms_or_default(const RunConfig& config) {
  if (!config.norms.empty()) return config.norms;
  return {NormSpec(2.0, 1.0)};
}

void push_norm(std::vector<NormSpec>& norms, double p, double q) {
  for (const NormSpec& spec : norms)
    if (spec.p == p && spec.q == q) return;
  norms.emplace_back(p, q);
}

void push_order(std::vector<double>& orders, double s) {
  for (double o : orders)
    if (o == s) return;
  orders.push_back(s);
}

InequalityReport lemma_sym_scaling(double alpha, int dim, std::uint64_t seed,
                                   int sample_size, int m_u) {
  Rng rng(seed);
  std::vector<Vec> vs(sample_size), ws(sample_size);
  for (int s = 0; s < sample_size; ++s) {
    double scale_v = 4.0 * rng.uniform();
    double scale_w = 4.0 * rng.uniform();
    for (int d = 0; d < dim; ++d) {
      vs[s][d] = scale_v * (2.0 * rng.uniform() - 1.0);
      ws[s][d] = scale_w * (2.0 * rng.uniform() - 1.0);
    }
  }
  // geometric θ sweep down to 1e-4
  std::vector<double> thetas;
  for (double theta = 0.5 * kPi; theta >= 1e-4; theta *= 0.6)
    thetas.push_back(theta);
  std::vector<double> ratios;
  for (double theta : thetas) {
    double x = std::sin(0.5 * theta);
    double denom_x = alpha >= 2.0 ? x * x : x;
    double worst = 0.0;
    for (int s = 0; s < sample_size; ++s) {
      double value = std::abs(r_alpha(x, vs[s], ws[s], alpha, dim, m_u));
      double weight = pow_fast(bracket2(vs[s], dim), alpha) *
                      pow_fast(bracket2(ws[s], dim), alpha);
      worst = std::max(worst, value / (denom_x * weight));
    }
    ratios.push_back(worst);
  }
  // bounded with no growth trend toward θ → 0
  std::size_t tail = std::min<std::size_t>(5, ratios.size() / 2);
  double tail_max = 0.0, head_max = 0.0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (k + tail >= ratios.size())
      tail_max = std::max(tail_max, ratios[k]);
    else
      head_max = std::max(head_max, ratios[k]);
  }
  InequalityReport rep;
  std::ostringstream name;
  name << "lemma_sym_scaling_alpha" << alpha;
  rep.name = name.str();
  rep.seed = seed;
  rep.lhs = tail_max;
  rep.rhs = 1.2 * head_max + 1e-12;
  rep.margin = rep.rhs - rep.lhs;
  rep.tol_margin = 0.0;
  rep.pass = rep.lhs <= rep.rhs && std::isfinite(head_max);
  rep.constants = {{"alpha", alpha},
                   {"sample", static_cast<double>(sample_size)},
                   {"theta_smallest", thetas.back()},
                   {"ratio_sup", std::max(head_max, tail_max)}};
  return rep;
}

InequalityReport lemma_sym_zero(double alpha, int dim, std::uint64_t seed,
                                int sample_size, int m_u) {
  Rng rng(seed + 1);
  double worst = 0.0;
  for (int s = 0; s < sample_size; ++s) {
    Vec v{0, 0, 0}, w{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      v[d] = 6.0 * (2.0 * rng.uniform() - 1.0);
      w[d] = 6.0 * (2.0 * rng.uniform() - 1.0);
    }
    worst = std::max(worst, std::abs(r_alpha(0.0, v, w, alpha, dim, m_u)));
  }
  InequalityReport rep;
  std::ostringstream name;
  name << "lemma_sym_zero_alpha" << alpha;
  rep.name = name.str();
  rep.seed = seed;
  rep.lhs = worst;
  rep.rhs = 1e-12;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = worst <= 1e-12;
  rep.constants = {{"alpha", alpha}};
  return rep;
}

InequalityReport lemma_sym_even(double alpha, int dim, std::uint64_t seed,
                                int sample_size, int m_u) {
  Rng rng(seed + 2);
  double worst = 0.0;
  for (int s = 0; s < sample_size; ++s) {
    Vec v{0, 0, 0}, w{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      v[d] = 4.0 * (2.0 * rng.uniform() - 1.0);
      w[d] = 4.0 * (2.0 * rng.uniform() - 1.0);
    }
    double x = 0.70710678118654757 * rng.uniform();
    double plus = r_alpha_extended(x, v, w, alpha, dim, m_u);
    double minus = r_alpha_extended(-x, v, w, alpha, dim, m_u);
    double scale = std::max({std::abs(plus), std::abs(minus), 1.0});
    worst = std::max(worst, std::abs(plus - minus) / scale);
  }
  InequalityReport rep;
  std::ostringstream name;
  name << "lemma_sym_even_alpha" << alpha;
  rep.name = name.str();
  rep.seed = seed;
  rep.lhs = worst;
  rep.rhs = 1e-12;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = worst <= 1e-12;
  rep.constants = {{"alpha", alpha}};
  return rep;
}

}  // namespace

Trajectory run_flow(const RunConfig& config) {
  VelocityGrid grid(config.dimension, config.grid_n, config.grid_R);
  SymmetrizedKernel kernel = symmetrize(build_kernel(config));
  if (kernel.angular.singular_at_origin())
    throw ConfigError(
        "flow: kernel angular part must be integrable at theta = 0 (cutoff "
        "or split-cutoff kernels only)");
  if (config.initial_components.empty())
    throw ConfigError("flow: initial_state.components is empty");
  Distribution f0 = mixture(grid, config.initial_components);

  std::vector<NormSpec> norms = norms_or_default(config);
  std::vector<double> l1_orders = config.l1_orders;
  const double gamma = kernel.gamma();
  const NormSpec base = norms.front();
  push_norm(norms, base.p, base.q + gamma / base.p);
  push_norm(norms, base.p, 0.0);
  for (double r : config.bernoulli_r) push_norm(norms, base.p, r);
  push_order(l1_orders, 0.0);
  push_order(l1_orders, 2.0);
  push_order(l1_orders, gamma);
  push_order(l1_orders, base.p * base.q + 2.0);
  push_order(l1_orders, base.p * base.q + gamma);
  for (double r : config.bernoulli_r) {
    push_order(l1_orders, base.p * r + 2.0);
    push_order(l1_orders, base.p * r + gamma);
  }
  std::sort(l1_orders.begin(), l1_orders.end());

  return simulate(f0, kernel, config.flow, config.quad, norms, l1_orders);
}

CheckOutcome run_check(const RunConfig& config_in, const std::string& suite,
                       std::optional<std::uint64_t> seed_override) {
  RunConfig config = config_in;
  if (seed_override) config.ensemble.seed = *seed_override;
  RunConfig validated = config;
  validated.suite = suite;
  validate_config(validated);

  VelocityGrid grid(config.dimension, config.grid_n, config.grid_R);
  SymmetrizedKernel kernel = symmetrize(build_kernel(config));
  std::vector<NormSpec> norms = norms_or_default(config);
  std::vector<InequalityReport> reports;

  if (suite == "estim1" || suite == "fonc" || suite == "estim3" ||
      suite == "estim5") {
    std::vector<Distribution> members =
        make_mixture_ensemble(grid, config.ensemble);
    for (const NormSpec& spec : norms) {
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Distribution& f = members[m];
        InequalityReport rep;
        if (suite == "estim1") {
          rep = check_estim1(f, f, spec, kernel, config.quad);
        } else if (suite == "fonc") {
          rep = check_fonc(f, f, spec, kernel, config.quad);
        } else if (suite == "estim3") {
          auto [b_c, b_r] = kernel.angular.split(config.kernel.theta0);
          Estim3Constants constants = construct_estim3_constants(
              mass(f) * (1.0 - 1e-9),
              l1_moment(f, spec.p * spec.q + 2.0) * (1.0 + 1e-9), spec.p,
              spec.q, kernel.gamma(), kernel.dim(), config.kernel.theta0, b_c,
              config.quad);
          rep = check_estim3(f, spec, kernel.with_angular(b_c), constants,
                             config.quad);
        } else {
          rep = check_estim5(f, spec, kernel, config.quad).report;
        }
        rep.member = static_cast<int>(m);
        rep.seed = config.ensemble.seed;
        rep.constants.emplace_back("p", spec.p);
        rep.constants.emplace_back("q", spec.q);
        reports.push_back(std::move(rep));
      }
    }
  } else if (suite == "lemma-sym") {
    std::uint64_t seed = config.has_ensemble ? config.ensemble.seed : 2026u;
    int sample = 1000;
    for (double alpha : {1.0, 2.0}) {
      reports.push_back(lemma_sym_scaling(alpha, config.dimension, seed,
                                          sample, config.quad.m_u));
      reports.push_back(
          lemma_sym_zero(alpha, config.dimension, seed, sample,
                         config.quad.m_u));
      reports.push_back(
          lemma_sym_even(alpha, config.dimension, seed, sample,
                         config.quad.m_u));
    }
  } else if (suite == "cv-identity") {
    auto gaussian = [](const Vec& v) {
      return std::exp(-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
    };
    Vec v_star{0.3, -0.2, 0.1};
    if (config.dimension == 2) v_star[2] = 0.0;
    double base =
        verify_cv_identity(gaussian, kernel, grid, config.quad, v_star);
    VelocityGrid fine(config.dimension, 2 * config.grid_n, config.grid_R);
    QuadOptions fine_quad = config.quad;
    fine_quad.m_theta *= 2;
    double refined =
        verify_cv_identity(gaussian, kernel, fine, fine_quad, v_star);
    InequalityReport rep;
    rep.name = "cv_identity_residual";
    rep.lhs = base;
    rep.rhs = 1e-2;
    rep.margin = rep.rhs - rep.lhs;
    rep.pass = base < 1e-2 && refined < base;
    rep.constants = {{"residual", base},
                     {"residual_refined", refined},
                     {"n", static_cast<double>(config.grid_n)}};
    reports.push_back(std::move(rep));
  } else if (suite == "apriori") {
    Trajectory traj = run_flow(config);
    const NormSpec base = norms.front();
    const double gamma = config.kernel.gamma;

    double m_lower = std::numeric_limits<double>::infinity();
    auto traj_bound = [&](double order, bool upper) {
      int idx = traj.find_l1(order);
      if (idx < 0)
        throw std::logic_error("apriori: missing L1 order in trajectory");
      double best = upper ? 0.0 : std::numeric_limits<double>::infinity();
      for (const TrajectorySample& s : traj.samples)
        best = upper ? std::max(best, s.l1_moments[idx])
                     : std::min(best, s.l1_moments[idx]);
      return best;
    };
    m_lower = traj_bound(0.0, false) * (1.0 - 1e-9);

    AbsorptionConstants c_base = construct_estim5_constants(
        m_lower, traj_bound(base.p * base.q + 2.0, true) * (1.0 + 1e-9),
        traj_bound(base.p * base.q + gamma, true) * (1.0 + 1e-9), base,
        kernel, config.quad);
    AprioriConstants apriori{base.p, base.q, gamma, c_base.cutoff.c_plus,
                             0.5 * c_base.cutoff.k_minus};
    std::vector<BernoulliSpec> bernoulli;
    for (double r : config.bernoulli_r) {
      if (!(gamma > 0.0)) break;  // appearance needs γ > 0
      NormSpec spec_r(base.p, r);
      AbsorptionConstants c_r = construct_estim5_constants(
          m_lower, traj_bound(base.p * r + 2.0, true) * (1.0 + 1e-9),
          traj_bound(base.p * r + gamma, true) * (1.0 + 1e-9), spec_r, kernel,
          config.quad);
      bernoulli.push_back({r, c_r.cutoff.c_plus});
    }
    std::vector<InequalityReport> checks = check_apriori(
        traj, apriori, bernoulli, config.t_min,
        config.flow.kt_exponent_override);
    for (InequalityReport& rep : checks) reports.push_back(std::move(rep));
    reports.push_back(check_entropy_monotone(traj));
    write_trajectory_csv(traj, config.out_trajectory);
  } else if (suite == "probe-eps") {
    double theta0 = config.probe_theta0.value_or(config.kernel.theta0);
    auto [b_c, b_r] = kernel.angular.split(theta0);
    SymmetrizedKernel cut = kernel.with_angular(b_c);
    const NormSpec base = norms.front();
    std::vector<Distribution> family = make_scaling_family(
        grid, config.initial_components, config.probe_members,
        config.probe_shrink);
    EpsilonProbe probe =
        probe_estim4_epsilon(family, base, theta0, cut, config.quad);
    std::vector<Distribution> doubled = make_scaling_family(
        grid, config.initial_components, 2 * config.probe_members,
        std::sqrt(config.probe_shrink));
    EpsilonProbe probe2 =
        probe_estim4_epsilon(doubled, base, theta0, cut, config.quad);
    InequalityReport rep;
    rep.name = "probe_estim4_epsilon";
    rep.lhs = std::abs(probe2.epsilon - probe.epsilon);
    rep.rhs = 0.2 * std::max(probe.epsilon, probe2.epsilon);
    rep.margin = rep.rhs - rep.lhs;
    rep.pass = rep.lhs <= rep.rhs && probe.epsilon >= 0.0;
    rep.constants = {{"epsilon", probe.epsilon},
                     {"epsilon_doubled", probe2.epsilon},
                     {"C_plus_fitted", probe.c_plus},
                     {"K_minus", probe.k_minus},
                     {"slope", probe.slope},
                     {"fit_residual", probe.fit_residual},
                     {"family_size", static_cast<double>(probe.family_size)},
                     {"fitted_members",
                      static_cast<double>(probe.fitted_members)},
                     {"theta0", theta0}};
    reports.push_back(std::move(rep));
  } else {
    throw ConfigError("run_check: unknown suite \"" + suite + '"');
  }

  CheckOutcome out;
  out.all_pass = true;
  for (const InequalityReport& rep : reports)
    out.all_pass = out.all_pass && rep.pass;
  out.json = reports_to_json(reports);
  return out;
}

void run_simulate(const RunConfig& config, const std::string& out_path) {
  Trajectory traj = run_flow(config);
  write_trajectory_csv(traj, out_path.empty() ? config.out_trajectory
                                              : out_path);
}

void run_collide(const RunConfig& config, const std::string& f_path,
                 const std::string& g_path, const std::string& out_prefix) {
  Distribution f = read_distribution_csv(f_path);
  Distribution g = read_distribution_csv(g_path);
  if (!(f.grid == g.grid))
    throw ConfigError("collide: f and g snapshots use mismatched grids");
  SymmetrizedKernel kernel = symmetrize(build_kernel(config));
  if (f.grid.dim != kernel.dim())
    throw ConfigError(
        "collide: snapshot dimension does not match the configured kernel");
  CollisionResult q = eval_Q(g, f, kernel, config.quad);
  std::string prefix =
      out_prefix.empty() ? config.out_snapshot_prefix : out_prefix;
  write_distribution_csv(q.gain, prefix + "_gain.csv");
  write_distribution_csv(q.loss, prefix + "_loss.csv");
  write_distribution_csv(q.q, prefix + "_total.csv");
}

}  // namespace boltzlp
