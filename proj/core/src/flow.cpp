#include "boltzlp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace boltzlp {

int Trajectory::find_norm(double p, double q) const {
  for (std::size_t i = 0; i < norm_specs.size(); ++i)
    if (norm_specs[i].p == p && norm_specs[i].q == q)
      return static_cast<int>(i);
  return -1;
}

int Trajectory::find_l1(double s) const {
  for (std::size_t i = 0; i < l1_orders.size(); ++i)
    if (l1_orders[i] == s) return static_cast<int>(i);
  return -1;
}

double stable_dt_bound(const Distribution& f,
                       const SymmetrizedKernel& kernel) {
  const double gamma = kernel.gamma();
  double b_mass = angular_mass(kernel.angular, kernel.dim());
  double corner2 = 1.0 + kernel.dim() * f.grid.R * f.grid.R;
  double rate =
      b_mass * l1_moment(f, gamma) * pow_fast(corner2, 0.5 * gamma);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 / rate;
}

Distribution mollify(const Distribution& f, double width) {
  if (width <= 0.0) return f;
  const VelocityGrid& grid = f.grid;
  const int n = grid.n;
  const double h = grid.h;
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * width / h)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    double x = k * h;
    kernel[k + radius] = std::exp(-0.5 * x * x / (width * width));
    sum += kernel[k + radius];
  }
  for (double& w : kernel) w /= sum;

  Distribution out = f;
  auto convolve_axis = [&](int axis) {
    Distribution tmp = out;
    const std::size_t cells = grid.size();
    for (std::size_t i = 0; i < cells; ++i) {
      // decompose the flat index into per-axis indices
      int idx[3] = {0, 0, 0};
      std::size_t rest = i;
      if (grid.dim == 3) {
        idx[2] = static_cast<int>(rest % n);
        rest /= n;
      }
      idx[1] = static_cast<int>(rest % n);
      idx[0] = static_cast<int>(rest / n);
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        int shifted = idx[axis] + k;
        if (shifted < 0 || shifted >= n) continue;
        int jdx[3] = {idx[0], idx[1], idx[2]};
        jdx[axis] = shifted;
        acc += kernel[k + radius] *
               tmp.values[grid.flat(jdx[0], jdx[1], jdx[2])];
      }
      out.values[i] = acc;
    }
  };
  for (int axis = 0; axis < grid.dim; ++axis) convolve_axis(axis);
  return out;
}

namespace {

void add_laplacian(const Distribution& f, double coeff,
                   std::vector<double>& out) {
  const VelocityGrid& grid = f.grid;
  const int n = grid.n;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const std::size_t cells = grid.size();
  for (std::size_t i = 0; i < cells; ++i) {
    int idx[3] = {0, 0, 0};
    std::size_t rest = i;
    if (grid.dim == 3) {
      idx[2] = static_cast<int>(rest % n);
      rest /= n;
    }
    idx[1] = static_cast<int>(rest % n);
    idx[0] = static_cast<int>(rest / n);
    double center = f.values[i];
    double lap = 0.0;
    for (int axis = 0; axis < grid.dim; ++axis) {
      int jdx[3] = {idx[0], idx[1], idx[2]};
      double left = 0.0, right = 0.0;  // zero outside the truncated grid
      if (idx[axis] > 0) {
        jdx[axis] = idx[axis] - 1;
        left = f.values[grid.flat(jdx[0], jdx[1], jdx[2])];
      }
      if (idx[axis] < n - 1) {
        jdx[axis] = idx[axis] + 1;
        right = f.values[grid.flat(jdx[0], jdx[1], jdx[2])];
      }
      lap += (left - 2.0 * center + right) * inv_h2;
    }
    out[i] += coeff * lap;
  }
}

std::vector<double> rhs_eval(const Distribution& f,
                             const SymmetrizedKernel& kernel,
                             const FlowConfig& config,
                             const QuadOptions& quad) {
  CollisionResult qr = eval_Q(f, f, kernel, quad);
  std::vector<double> rhs = std::move(qr.q.values);
  if (config.eps_reg > 0.0) add_laplacian(f, config.eps_reg, rhs);
  return rhs;
}

}  // namespace

Distribution step(const Distribution& f, double dt,
                  const SymmetrizedKernel& kernel, const FlowConfig& config,
                  const QuadOptions& quad, double* clipped_mass) {
  if (kernel.angular.singular_at_origin())
    throw std::invalid_argument(
        "step: flows require an integrable (cutoff or split-cutoff) kernel");
  if (dt < 0.0) throw std::invalid_argument("step: dt must be >= 0");
  const std::size_t cells = f.grid.size();
  Distribution out = f;
  if (dt > 0.0) {
    if (config.scheme == TimeScheme::ExplicitEuler) {
      std::vector<double> k1 = rhs_eval(f, kernel, config, quad);
      for (std::size_t i = 0; i < cells; ++i) out.values[i] += dt * k1[i];
    } else {
      std::vector<double> k1 = rhs_eval(f, kernel, config, quad);
      Distribution stage = f;
      for (std::size_t i = 0; i < cells; ++i)
        stage.values[i] = f.values[i] + 0.5 * dt * k1[i];
      std::vector<double> k2 = rhs_eval(stage, kernel, config, quad);
      for (std::size_t i = 0; i < cells; ++i)
        stage.values[i] = f.values[i] + 0.5 * dt * k2[i];
      std::vector<double> k3 = rhs_eval(stage, kernel, config, quad);
      for (std::size_t i = 0; i < cells; ++i)
        stage.values[i] = f.values[i] + dt * k3[i];
      std::vector<double> k4 = rhs_eval(stage, kernel, config, quad);
      const double w = dt / 6.0;
      for (std::size_t i = 0; i < cells; ++i)
        out.values[i] +=
            w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }

  double clipped = 0.0;
  if (config.positivity) {
    for (double& v : out.values) {
      if (v < 0.0) {
        clipped -= v;
        v = 0.0;
      }
    }
    clipped *= f.grid.cell_volume();
  }
  if (clipped_mass) *clipped_mass = clipped;

  if (config.mass_rescale) {
    double m0 = mass(f), m1 = mass(out);
    if (m1 > 0.0) {
      double s = m0 / m1;
      for (double& v : out.values) v *= s;
    }
  }

  double sup_old = 0.0, sup_new = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    sup_old = std::max(sup_old, f.values[i]);
    sup_new = std::max(sup_new, std::abs(out.values[i]));
  }
  if (sup_new > 10.0 * std::max(sup_old, 1e-300))
    throw std::runtime_error(
        "step: stability violation, sup norm grew by more than 10x");
  return out;
}

namespace {

TrajectorySample sample_state(const Distribution& f, double t,
                              const std::vector<NormSpec>& norms,
                              const std::vector<double>& l1_orders) {
  TrajectorySample s;
  s.t = t;
  s.mass = mass(f);
  s.momentum = momentum(f);
  s.energy = kinetic_energy(f);
  s.entropy = entropy(f);
  s.lp_norms.reserve(norms.size());
  for (const NormSpec& spec : norms)
    s.lp_norms.push_back(weighted_lp_norm(f, spec));
  s.l1_moments.reserve(l1_orders.size());
  for (double order : l1_orders) s.l1_moments.push_back(l1_moment(f, order));
  return s;
}

}  // namespace

Trajectory simulate(const Distribution& f0, const SymmetrizedKernel& kernel,
                    const FlowConfig& config, const QuadOptions& quad,
                    const std::vector<NormSpec>& norms,
                    const std::vector<double>& l1_orders) {
  if (!(config.dt > 0.0))
    throw std::invalid_argument("simulate: dt must be > 0");
  Distribution f =
      config.mollifier_width > 0.0 ? mollify(f0, config.mollifier_width) : f0;
  double bound = stable_dt_bound(f, kernel);
  if (config.dt > bound) {
    std::ostringstream msg;
    msg << "simulate: dt = " << config.dt
        << " exceeds the loss-term stability bound " << bound;
    throw std::invalid_argument(msg.str());
  }

  Trajectory traj;
  traj.dim = f.grid.dim;
  traj.norm_specs = norms;
  traj.l1_orders = l1_orders;
  int steps_per_sample =
      std::max(1, static_cast<int>(std::round(config.sample_interval /
                                              config.dt)));
  traj.steps_per_sample = steps_per_sample;
  traj.samples.push_back(sample_state(f, 0.0, norms, l1_orders));

  const long total_steps =
      static_cast<long>(std::ceil(config.t_final / config.dt - 1e-12));
  double t = 0.0;
  for (long k = 0; k < total_steps; ++k) {
    double dt = std::min(config.dt, config.t_final - t);
    double clipped = 0.0;
    try {
      f = step(f, dt, kernel, config, quad, &clipped);
    } catch (const std::runtime_error& err) {
      std::ostringstream msg;
      msg << err.what() << " (at t = " << t + dt << ")";
      throw std::runtime_error(msg.str());
    }
    traj.clipped_mass += clipped;
    t += dt;
    if ((k + 1) % steps_per_sample == 0 || k + 1 == total_steps)
      traj.samples.push_back(sample_state(f, t, norms, l1_orders));
  }
  return traj;
}

double gronwall_envelope(double y0, double C, double t) {
  if (!(C >= 0.0))
    throw std::invalid_argument("gronwall_envelope: C must be >= 0");
  if (y0 == 0.0) return 0.0;
  return y0 * std::exp(C * t);
}

double bernoulli_envelope(double t, double C, double k_t, double p, double r,
                          double gamma) {
  if (!(t > 0.0))
    throw std::invalid_argument(
        "bernoulli_envelope: t must be > 0 (the bound blows up at 0+)");
  if (!(gamma > 0.0))
    throw std::invalid_argument("bernoulli_envelope: gamma must be > 0");
  if (!(C > 0.0 && k_t > 0.0))
    throw std::invalid_argument(
        "bernoulli_envelope: constants must be > 0");
  double a = C * gamma * t / (p * r);
  double denom = k_t * (-std::expm1(-a));
  return pow_fast(C / denom, r / gamma);
}

double longtime_bound(double y_tau, double c_plus, double k_minus,
                      double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument(
        "longtime_bound: epsilon must lie in (0, 1)");
  if (!(c_plus > 0.0 && k_minus > 0.0))
    throw std::invalid_argument("longtime_bound: constants must be > 0");
  return std::max(y_tau, std::pow(c_plus / k_minus, 1.0 / epsilon));
}

std::vector<InequalityReport> check_apriori(
    const Trajectory& traj, const AprioriConstants& constants,
    const std::vector<BernoulliSpec>& bernoulli, double t_min,
    std::optional<double> kt_exponent_override) {
  std::vector<InequalityReport> reports;
  const double p = constants.p;
  const int iq = traj.find_norm(p, constants.q);
  const int iw = traj.find_norm(p, constants.q + constants.gamma / p);
  if (iq < 0 || iw < 0)
    throw std::invalid_argument(
        "check_apriori: trajectory must carry the Lp_q and Lp_{q+gamma/p} "
        "norms");
  const std::size_t count = traj.samples.size();
  if (count < 3)
    throw std::invalid_argument("check_apriori: trajectory too short");

  std::vector<double> ts(count), y(count), w(count);
  for (std::size_t k = 0; k < count; ++k) {
    ts[k] = traj.samples[k].t;
    y[k] = pow_fast(traj.samples[k].lp_norms[iq], p);
    w[k] = pow_fast(traj.samples[k].lp_norms[iw], p);
  }

  // differential inequality dy/dt ≤ p (C+ y - K- w), centered differences
  {
    double worst = -std::numeric_limits<double>::infinity();
    double worst_t = ts.front();
    double worst_rhs = 0.0, worst_lhs = 0.0;
    double y3max = 0.0;  // third-difference estimate of |y'''|
    for (std::size_t k = 1; k + 2 < count; ++k) {
      double dt1 = ts[k + 1] - ts[k];
      double d3 = std::abs(y[k + 2] - 3.0 * y[k + 1] + 3.0 * y[k] - y[k - 1]);
      y3max = std::max(y3max, d3 / (dt1 * dt1 * dt1));
    }
    double fd_tol = 0.0;
    for (std::size_t k = 1; k + 1 < count; ++k) {
      double dt = ts[k + 1] - ts[k - 1];
      double dydt = (y[k + 1] - y[k - 1]) / dt;
      double rhs = p * (constants.c_plus * y[k] - constants.k_minus * w[k]);
      double tol = (dt * dt / 24.0) * y3max * 4.0 +
                   1e-9 * std::max(1.0, std::abs(rhs));
      fd_tol = std::max(fd_tol, tol);
      if (dydt - rhs > worst) {
        worst = dydt - rhs;
        worst_t = ts[k];
        worst_rhs = rhs;
        worst_lhs = dydt;
      }
    }
    InequalityReport rep;
    rep.name = "apriori_differential";
    rep.lhs = worst_lhs;
    rep.rhs = worst_rhs;
    rep.margin = -worst;
    rep.tol_margin = fd_tol + 1e-6 * std::max({std::abs(worst_lhs),
                                               std::abs(worst_rhs), 1.0});
    rep.pass = rep.margin >= -rep.tol_margin;
    rep.constants = {{"C_plus", constants.c_plus},
                     {"K_minus", constants.k_minus},
                     {"p", p},
                     {"q", constants.q},
                     {"worst_t", worst_t},
                     {"fd_tolerance", fd_tol}};
    reports.push_back(std::move(rep));
  }

  // Gronwall dominance, compared in log space: the constructed C+ can make
  // y0 e^{Ct} overflow a double while the comparison stays meaningful
  {
    double C = p * constants.c_plus;
    double log_y0 = std::log(std::max(y[0], 1e-300));
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_t = ts.front();
    for (std::size_t k = 0; k < count; ++k) {
      double margin = (log_y0 + C * ts[k]) - std::log(std::max(y[k], 1e-300));
      if (margin < worst_margin) {
        worst_margin = margin;
        worst_t = ts[k];
      }
    }
    InequalityReport rep;
    rep.name = "gronwall_envelope";
    rep.lhs = std::log(std::max(y[count - 1], 1e-300));
    rep.rhs = log_y0 + C * ts[count - 1];
    rep.margin = worst_margin;
    rep.tol_margin = 1e-9;
    rep.pass = rep.margin >= -rep.tol_margin;
    rep.constants = {{"C", C}, {"log_y0", log_y0}, {"worst_t", worst_t}};
    reports.push_back(std::move(rep));
  }

  // Bernoulli dominance for the configured r > q (γ > 0 only)
  if (constants.gamma > 0.0 && !bernoulli.empty()) {
    int ip = traj.find_norm(p, 0.0);
    if (ip < 0)
      throw std::invalid_argument(
          "check_apriori: Bernoulli checks need the plain Lp norm in the "
          "trajectory");
    double sup_lp = 0.0;
    for (const TrajectorySample& s : traj.samples)
      sup_lp = std::max(sup_lp, s.lp_norms[ip]);
    for (const BernoulliSpec& spec : bernoulli) {
      int ir = traj.find_norm(p, spec.r);
      if (ir < 0)
        throw std::invalid_argument(
            "check_apriori: trajectory missing a configured Lp_r norm");
      double exponent;
      if (kt_exponent_override) {
        exponent = *kt_exponent_override;
      } else {
        if (constants.q == 0.0)
          throw std::invalid_argument(
              "check_apriori: K_T exponent -gamma/(r q) undefined for q = 0; "
              "set the exponent override");
        exponent = -constants.gamma / (spec.r * constants.q);
      }
      double k_t = std::pow(sup_lp, exponent);
      double C = p * spec.c_plus;
      double worst_margin = std::numeric_limits<double>::infinity();
      double worst_t = t_min;
      double last_env = 0.0, last_val = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        if (ts[k] < t_min) continue;
        double env = bernoulli_envelope(ts[k], C, k_t, p, spec.r,
                                        constants.gamma);
        double val = traj.samples[k].lp_norms[ir];
        double margin = std::log(std::max(env, 1e-300)) -
                        std::log(std::max(val, 1e-300));
        last_env = env;
        last_val = val;
        if (margin < worst_margin) {
          worst_margin = margin;
          worst_t = ts[k];
        }
      }
      InequalityReport rep;
      std::ostringstream name;
      name << "bernoulli_envelope_r" << spec.r;
      rep.name = name.str();
      rep.lhs = last_val;
      rep.rhs = last_env;
      rep.margin = worst_margin;
      rep.tol_margin = 1e-9;
      rep.pass = worst_margin >= -rep.tol_margin;
      rep.constants = {{"r", spec.r},
                       {"C", C},
                       {"K_T", k_t},
                       {"kt_exponent", exponent},
                       {"sup_lp", sup_lp},
                       {"t_min", t_min},
                       {"worst_t", worst_t}};
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

InequalityReport check_entropy_monotone(const Trajectory& traj,
                                        double per_step_tol) {
  InequalityReport rep;
  rep.name = "entropy_monotone";
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    double rise = traj.samples[k + 1].entropy - traj.samples[k].entropy;
    if (rise > worst) {
      worst = rise;
      worst_t = traj.samples[k + 1].t;
    }
  }
  double budget = per_step_tol * traj.steps_per_sample;
  rep.lhs = worst;
  rep.rhs = budget;
  rep.margin = budget - worst;
  rep.tol_margin = 0.0;
  rep.pass = worst <= budget;
  rep.constants = {{"per_step_tol", per_step_tol},
                   {"steps_per_sample",
                    static_cast<double>(traj.steps_per_sample)},
                   {"worst_t", worst_t}};
  return rep;
}

}  // namespace boltzlp
