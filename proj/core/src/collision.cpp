#include "boltzlp/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boltzlp {

namespace {

inline double fetch2(const double* vals, int n, int i, int j) {
  if (static_cast<unsigned>(i) >= static_cast<unsigned>(n) ||
      static_cast<unsigned>(j) >= static_cast<unsigned>(n))
    return 0.0;
  return vals[static_cast<std::size_t>(i) * n + j];
}

inline double fetch3(const double* vals, int n, int i, int j, int k) {
  if (static_cast<unsigned>(i) >= static_cast<unsigned>(n) ||
      static_cast<unsigned>(j) >= static_cast<unsigned>(n) ||
      static_cast<unsigned>(k) >= static_cast<unsigned>(n))
    return 0.0;
  return vals[(static_cast<std::size_t>(i) * n + j) * n + k];
}

inline double interp_linear2(const double* vals, int n, double inv_h, double R,
                             double vx, double vy) {
  double x = (vx + R) * inv_h - 0.5;
  double y = (vy + R) * inv_h - 0.5;
  if (x <= -1.0 || x >= n || y <= -1.0 || y >= n) return 0.0;
  double fx = std::floor(x), fy = std::floor(y);
  int i0 = static_cast<int>(fx), j0 = static_cast<int>(fy);
  double tx = x - fx, ty = y - fy;
  double v00 = fetch2(vals, n, i0, j0);
  double v01 = fetch2(vals, n, i0, j0 + 1);
  double v10 = fetch2(vals, n, i0 + 1, j0);
  double v11 = fetch2(vals, n, i0 + 1, j0 + 1);
  double a = v00 + tx * (v10 - v00);
  double b = v01 + tx * (v11 - v01);
  return a + ty * (b - a);
}

inline double interp_linear3(const double* vals, int n, double inv_h, double R,
                             double vx, double vy, double vz) {
  double x = (vx + R) * inv_h - 0.5;
  double y = (vy + R) * inv_h - 0.5;
  double z = (vz + R) * inv_h - 0.5;
  if (x <= -1.0 || x >= n || y <= -1.0 || y >= n || z <= -1.0 || z >= n)
    return 0.0;
  double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
  int i0 = static_cast<int>(fx), j0 = static_cast<int>(fy),
      k0 = static_cast<int>(fz);
  double tx = x - fx, ty = y - fy, tz = z - fz;
  double acc = 0.0;
  for (int di = 0; di <= 1; ++di) {
    double wi = di ? tx : 1.0 - tx;
    for (int dj = 0; dj <= 1; ++dj) {
      double wj = dj ? ty : 1.0 - ty;
      double w2 = wi * wj;
      acc += w2 * ((1.0 - tz) * fetch3(vals, n, i0 + di, j0 + dj, k0) +
                   tz * fetch3(vals, n, i0 + di, j0 + dj, k0 + 1));
    }
  }
  return acc;
}

inline void catmull_weights(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

inline double interp_cubic2(const double* vals, int n, double inv_h, double R,
                            double vx, double vy) {
  double x = (vx + R) * inv_h - 0.5;
  double y = (vy + R) * inv_h - 0.5;
  if (x <= -2.0 || x >= n + 1 || y <= -2.0 || y >= n + 1) return 0.0;
  double fx = std::floor(x), fy = std::floor(y);
  int i0 = static_cast<int>(fx), j0 = static_cast<int>(fy);
  double wx[4], wy[4];
  catmull_weights(x - fx, wx);
  catmull_weights(y - fy, wy);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b)
      row += wy[b] * fetch2(vals, n, i0 - 1 + a, j0 - 1 + b);
    acc += wx[a] * row;
  }
  return acc;
}

inline double interp_cubic3(const double* vals, int n, double inv_h, double R,
                            double vx, double vy, double vz) {
  double x = (vx + R) * inv_h - 0.5;
  double y = (vy + R) * inv_h - 0.5;
  double z = (vz + R) * inv_h - 0.5;
  if (x <= -2.0 || x >= n + 1 || y <= -2.0 || y >= n + 1 || z <= -2.0 ||
      z >= n + 1)
    return 0.0;
  double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
  int i0 = static_cast<int>(fx), j0 = static_cast<int>(fy),
      k0 = static_cast<int>(fz);
  double wx[4], wy[4], wz[4];
  catmull_weights(x - fx, wx);
  catmull_weights(y - fy, wy);
  catmull_weights(z - fz, wz);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double col = 0.0;
      for (int c = 0; c < 4; ++c)
        col += wz[c] * fetch3(vals, n, i0 - 1 + a, j0 - 1 + b, k0 - 1 + c);
      acc += wx[a] * wy[b] * col;
    }
  return acc;
}

inline double gamma_power(double dist, double gamma) {
  if (gamma == 0.0) return 1.0;
  if (gamma == 1.0) return dist;
  return std::pow(dist, gamma);
}

}  // namespace

double sample(const Distribution& f, const Vec& v, int interp_order) {
  const int n = f.grid.n;
  const double inv_h = 1.0 / f.grid.h, R = f.grid.R;
  double value;
  if (f.grid.dim == 2) {
    value = interp_order >= 3
                ? interp_cubic2(f.values.data(), n, inv_h, R, v[0], v[1])
                : interp_linear2(f.values.data(), n, inv_h, R, v[0], v[1]);
  } else {
    value = interp_order >= 3
                ? interp_cubic3(f.values.data(), n, inv_h, R, v[0], v[1], v[2])
                : interp_linear3(f.values.data(), n, inv_h, R, v[0], v[1],
                                 v[2]);
  }
  return std::max(0.0, value);
}

CollisionResult eval_Q(const Distribution& g, const Distribution& f,
                       const SymmetrizedKernel& kernel,
                       const QuadOptions& quad) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("eval_Q: f and g must share one grid");
  if (kernel.angular.singular_at_origin())
    throw std::invalid_argument(
        "eval_Q: angular part is not integrable at theta = 0; pointwise Q is "
        "undefined termwise (use lyapunov_functional)");

  const VelocityGrid& grid = f.grid;
  const int dim = grid.dim;
  const int n = grid.n;
  const double gamma = kernel.gamma();
  SigmaRule rule = SigmaRule::build(kernel.angular, dim, quad);
  const double b_mass = rule.kernel_mass();
  const double cell = grid.cell_volume();
  const double inv_h = 1.0 / grid.h, R = grid.R;
  const int n_nodes = static_cast<int>(rule.nodes.size());
  const int m_u = rule.m_u;
  const bool cubic = quad.interp_order >= 3;

  CollisionResult out{Distribution(grid), Distribution(grid),
                      Distribution(grid)};
  const std::size_t cells = grid.size();
  const double* fv = f.values.data();
  const double* gv = g.values.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(cells); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const Vec vi = grid.node(i);
    double gain = 0.0;
    double loss_rate = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double gj = gv[j];
      if (gj == 0.0 || j == i) continue;
      const Vec vj = grid.node(j);
      Vec d{vi[0] - vj[0], vi[1] - vj[1], vi[2] - vj[2]};
      const double dist = norm(d, dim);
      const double dg = gamma_power(dist, gamma);
      loss_rate += gj * dg;
      const double inv_dist = 1.0 / dist;
      const Vec k{d[0] * inv_dist, d[1] * inv_dist, d[2] * inv_dist};
      Vec e1, e2;
      orthonormal_frame(k, dim, e1, e2);
      const Vec mid{0.5 * (vi[0] + vj[0]), 0.5 * (vi[1] + vj[1]),
                    0.5 * (vi[2] + vj[2])};
      const double r = 0.5 * dist;
      const double pair_w = gj * dg;
      for (int s = 0; s < n_nodes; ++s) {
        const ThetaNode& node = rule.nodes[s];
        const double wb = node.w * node.b;
        if (wb == 0.0) continue;
        const double a = r * node.cos_theta;
        const double c = r * node.sin_theta;
        double usum = 0.0;
        for (int m = 0; m < m_u; ++m) {
          Vec u = rule.u_node(e1, e2, m);
          double vpx = mid[0] + a * k[0] + c * u[0];
          double vpy = mid[1] + a * k[1] + c * u[1];
          double vpz = mid[2] + a * k[2] + c * u[2];
          double fsx, gsx;
          if (dim == 2) {
            fsx = cubic ? interp_cubic2(fv, n, inv_h, R, vpx, vpy)
                        : interp_linear2(fv, n, inv_h, R, vpx, vpy);
            gsx = cubic ? interp_cubic2(gv, n, inv_h, R, vi[0] + vj[0] - vpx,
                                        vi[1] + vj[1] - vpy)
                        : interp_linear2(gv, n, inv_h, R, vi[0] + vj[0] - vpx,
                                         vi[1] + vj[1] - vpy);
          } else {
            fsx = cubic ? interp_cubic3(fv, n, inv_h, R, vpx, vpy, vpz)
                        : interp_linear3(fv, n, inv_h, R, vpx, vpy, vpz);
            gsx = cubic ? interp_cubic3(gv, n, inv_h, R, vi[0] + vj[0] - vpx,
                                        vi[1] + vj[1] - vpy,
                                        vi[2] + vj[2] - vpz)
                        : interp_linear3(gv, n, inv_h, R, vi[0] + vj[0] - vpx,
                                         vi[1] + vj[1] - vpy,
                                         vi[2] + vj[2] - vpz);
          }
          usum += std::max(0.0, fsx) * std::max(0.0, gsx);
        }
        gain += usum * wb * pair_w;
      }
    }
    out.gain.values[i] = gain * rule.u_weight * cell;
    out.loss.values[i] = fv[i] * loss_rate * b_mass * cell;
    out.q.values[i] = out.gain.values[i] - out.loss.values[i];
  }
  return out;
}

namespace detail {

ConvergenceReport make_convergence(double fine, double mid, double coarse,
                                   double band0, double band1, int bands) {
  ConvergenceReport rep;
  rep.fine = fine;
  rep.mid = mid;
  rep.coarse = coarse;
  double d1 = std::abs(fine - mid);
  double d2 = std::abs(mid - coarse);
  rep.rate = (d1 > 0.0 && d2 > 0.0) ? std::log2(d2 / d1) : 0.0;
  if (bands >= 2) {
    double a0 = std::abs(band0), a1 = std::abs(band1);
    if (a1 > 0.0 && a0 < a1) {
      double ratio = a0 / a1;
      rep.truncation = a0 * ratio / (1.0 - ratio);
    } else {
      rep.truncation = a0;
      if (a0 > 0.0 && a0 >= a1) rep.converged = false;
    }
  }
  rep.error_estimate = d1 + rep.truncation;
  return rep;
}

SweepResult lyapunov_sweep(const Distribution& f, const Distribution& g,
                           double p, double q, const SymmetrizedKernel& kernel,
                           const SigmaRule& rule, int interp_order,
                           bool with_estim1_terms) {
  const VelocityGrid& grid = f.grid;
  const int dim = grid.dim;
  const int n = grid.n;
  const double gamma = kernel.gamma();
  const double inv_h = 1.0 / grid.h, R = grid.R;
  const double half_pq = 0.5 * p * q;
  const double pm1 = p - 1.0;
  const double p_conj_exp = (dim + gamma) * (1.0 - 1.0 / p);  // (N+γ)/p'
  const int n_nodes = static_cast<int>(rule.nodes.size());
  const int m_u = rule.m_u;
  const bool cubic = interp_order >= 3;

  // flattened per-node factors
  std::vector<double> ct(n_nodes), st(n_nodes);
  std::vector<double> wb_f(n_nodes), wb_m(n_nodes), wb_c(n_nodes);
  std::vector<double> cw(n_nodes);  // c(θ) = cos(θ/2)^{-(N+γ)/p'}
  std::vector<int> band(n_nodes);
  for (int s = 0; s < n_nodes; ++s) {
    const ThetaNode& node = rule.nodes[s];
    ct[s] = node.cos_theta;
    st[s] = node.sin_theta;
    wb_f[s] = node.w * node.b;
    wb_m[s] = node.w_mid * node.b;
    wb_c[s] = node.w_coarse * node.b;
    cw[s] = pow_fast(node.cv_stretch, p_conj_exp);
    band[s] = node.band;
  }

  const std::size_t cells = grid.size();
  const double* fv = f.values.data();
  const double* gv = g.values.data();

  struct Row {
    double d_f = 0, d_m = 0, d_c = 0, d_b0 = 0, d_b1 = 0;
    double t_f = 0, t_m = 0, t_c = 0, t_b0 = 0, t_b1 = 0;
    double pair = 0;
  };
  std::vector<Row> rows(cells);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(cells); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double fi = fv[i];
    if (fi == 0.0) continue;
    const Vec vi = grid.node(i);
    const double wt_i = pow_fast(bracket2(vi, dim), half_pq);
    const double fi_pm1 = pow_fast(fi, pm1);
    const double fi_p = fi * fi_pm1;
    const double base = wt_i * fi_pm1;  // reused inside the bracket
    Row row;
    for (std::size_t j = 0; j < cells; ++j) {
      const double gj = gv[j];
      if (gj == 0.0 || j == i) continue;
      const Vec vj = grid.node(j);
      Vec d{vi[0] - vj[0], vi[1] - vj[1], vi[2] - vj[2]};
      const double dist = norm(d, dim);
      const double dg = gamma_power(dist, gamma);
      const double pair_w = gj * dg;
      row.pair += pair_w;
      const double inv_dist = 1.0 / dist;
      const Vec k{d[0] * inv_dist, d[1] * inv_dist, d[2] * inv_dist};
      Vec e1, e2;
      orthonormal_frame(k, dim, e1, e2);
      const Vec mid{0.5 * (vi[0] + vj[0]), 0.5 * (vi[1] + vj[1]),
                    0.5 * (vi[2] + vj[2])};
      const double r = 0.5 * dist;
      for (int s = 0; s < n_nodes; ++s) {
        if (wb_f[s] == 0.0 && wb_m[s] == 0.0) continue;
        const double a = r * ct[s];
        const double c = r * st[s];
        double dsum = 0.0;  // Σ_u (wt' f'^{p-1} - wt_i fi^{p-1})
        double tsum = 0.0;  // Σ_u (wt' - wt_i)
        for (int m = 0; m < m_u; ++m) {
          Vec u = rule.u_node(e1, e2, m);
          const double vpx = mid[0] + a * k[0] + c * u[0];
          const double vpy = mid[1] + a * k[1] + c * u[1];
          const double vpz = mid[2] + a * k[2] + c * u[2];
          double fprime;
          double b2;
          if (dim == 2) {
            fprime = cubic ? interp_cubic2(fv, n, inv_h, R, vpx, vpy)
                           : interp_linear2(fv, n, inv_h, R, vpx, vpy);
            b2 = 1.0 + vpx * vpx + vpy * vpy;
          } else {
            fprime = cubic ? interp_cubic3(fv, n, inv_h, R, vpx, vpy, vpz)
                           : interp_linear3(fv, n, inv_h, R, vpx, vpy, vpz);
            b2 = 1.0 + vpx * vpx + vpy * vpy + vpz * vpz;
          }
          if (fprime < 0.0) fprime = 0.0;
          const double wt_p = pow_fast(b2, half_pq);
          dsum += wt_p * pow_fast(fprime, pm1) - base;
          if (with_estim1_terms) tsum += wt_p - wt_i;
        }
        const double dd = dsum * pair_w;
        row.d_f += dd * wb_f[s];
        row.d_m += dd * wb_m[s];
        row.d_c += dd * wb_c[s];
        if (band[s] == 0)
          row.d_b0 += dd * wb_f[s];
        else if (band[s] == 1)
          row.d_b1 += dd * wb_f[s];
        if (with_estim1_terms) {
          const double tt = tsum * pair_w * cw[s];
          row.t_f += tt * wb_f[s];
          row.t_m += tt * wb_m[s];
          row.t_c += tt * wb_c[s];
          if (band[s] == 0)
            row.t_b0 += tt * wb_f[s];
          else if (band[s] == 1)
            row.t_b1 += tt * wb_f[s];
        }
      }
    }
    row.d_f *= fi;
    row.d_m *= fi;
    row.d_c *= fi;
    row.d_b0 *= fi;
    row.d_b1 *= fi;
    row.t_f *= fi_p;
    row.t_m *= fi_p;
    row.t_c *= fi_p;
    row.t_b0 *= fi_p;
    row.t_b1 *= fi_p;
    row.pair *= wt_i * fi_p;
    rows[i] = row;
  }

  // serial reduction in grid order keeps results independent of threading
  SweepResult res;
  for (const Row& row : rows) {
    res.d_fine += row.d_f;
    res.d_mid += row.d_m;
    res.d_coarse += row.d_c;
    res.d_band0 += row.d_b0;
    res.d_band1 += row.d_b1;
    res.t2_fine += row.t_f;
    res.t2_mid += row.t_m;
    res.t2_coarse += row.t_c;
    res.t2_band0 += row.t_b0;
    res.t2_band1 += row.t_b1;
    res.pair_sum += row.pair;
  }
  const double cell2 = grid.cell_volume() * grid.cell_volume();
  const double scale = rule.u_weight * cell2;
  res.d_fine *= scale;
  res.d_mid *= scale;
  res.d_coarse *= scale;
  res.d_band0 *= scale;
  res.d_band1 *= scale;
  res.t2_fine *= scale;
  res.t2_mid *= scale;
  res.t2_coarse *= scale;
  res.t2_band0 *= scale;
  res.t2_band1 *= scale;
  res.pair_sum *= cell2;
  return res;
}

}  // namespace detail

double lyapunov_functional(const Distribution& f, const Distribution& g,
                           const NormSpec& spec,
                           const SymmetrizedKernel& kernel,
                           const QuadOptions& quad,
                           ConvergenceReport* convergence) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument(
        "lyapunov_functional: f and g must share one grid");
  require_norm_compatible(spec, kernel.angular);
  SigmaRule rule = SigmaRule::build(kernel.angular, f.grid.dim, quad);
  detail::SweepResult sw = detail::lyapunov_sweep(
      f, g, spec.p, spec.q, kernel, rule, quad.interp_order, false);
  ConvergenceReport rep = detail::make_convergence(
      sw.d_fine, sw.d_mid, sw.d_coarse, sw.d_band0, sw.d_band1, rule.bands);
  if (!rep.converged &&
      std::abs(rep.truncation) > 0.5 * std::max(std::abs(sw.d_fine), 1e-12)) {
    throw NonConvergenceError(
        "lyapunov_functional: graded theta-quadrature tail does not decay",
        rep.rate);
  }
  if (convergence) *convergence = rep;
  return sw.d_fine;
}

double lyapunov_functional_direct(const Distribution& f,
                                  const Distribution& g, const NormSpec& spec,
                                  const SymmetrizedKernel& kernel,
                                  const QuadOptions& quad) {
  CollisionResult qr = eval_Q(g, f, kernel, quad);
  const double half_pq = 0.5 * spec.p * spec.q;
  const std::size_t cells = f.grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi == 0.0) continue;
    double w = pow_fast(bracket2(f.grid.node(i), f.grid.dim), half_pq);
    sum += qr.q.values[i] * pow_fast(fi, spec.p - 1.0) * w;
  }
  return sum * f.grid.cell_volume();
}

namespace {

double r_alpha_impl(double x, const Vec& v, const Vec& v_star, double alpha,
                    int dim, int m_u) {
  const double x2 = x * x;
  const double root = std::sqrt(std::max(0.0, 1.0 - x2));
  const double v2 = norm2(v, dim);
  const double vs2 = norm2(v_star, dim);
  const double ref = pow_fast(1.0 + v2, alpha);
  Vec rel{v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
  const double dist = norm(rel, dim);
  const double core = 1.0 + v2 * (1.0 - x2) + vs2 * x2;
  if (dist == 0.0) return equator_area(dim) * (pow_fast(core, alpha) - ref);
  Vec k{rel[0] / dist, rel[1] / dist, rel[2] / dist};
  Vec e1, e2;
  orthonormal_frame(k, dim, e1, e2);
  const int count = dim == 2 ? 2 : std::max(3, m_u);
  const double u_w = equator_area(dim) / count;
  double acc = 0.0;
  for (int m = 0; m < count; ++m) {
    Vec u;
    if (dim == 2) {
      double s = (m == 0) ? 1.0 : -1.0;
      u = Vec{s * e1[0], s * e1[1], 0.0};
    } else {
      double phi = 2.0 * kPi * m / count;
      double cp = std::cos(phi), sp = std::sin(phi);
      u = Vec{cp * e1[0] + sp * e2[0], cp * e1[1] + sp * e2[1],
              cp * e1[2] + sp * e2[2]};
    }
    double lin = 2.0 * x * root * dist * dot(u, v_star, dim);
    acc += pow_fast(core + lin, alpha) - ref;
  }
  return acc * u_w;
}

}  // namespace

double r_alpha(double x, const Vec& v, const Vec& v_star, double alpha,
               int dim, int m_u) {
  if (!(alpha >= 1.0))
    throw std::invalid_argument("r_alpha: alpha must be >= 1");
  constexpr double hi = 0.70710678118654757;
  if (!(x >= 0.0 && x <= hi + 1e-15))
    throw std::invalid_argument("r_alpha: x must lie in [0, sqrt(2)/2]");
  return r_alpha_impl(x, v, v_star, alpha, dim, m_u);
}

double r_alpha_extended(double x, const Vec& v, const Vec& v_star,
                        double alpha, int dim, int m_u) {
  constexpr double hi = 0.70710678118654757;
  if (!(std::abs(x) <= hi + 1e-15))
    throw std::invalid_argument(
        "r_alpha_extended: |x| must be <= sqrt(2)/2");
  return r_alpha_impl(x, v, v_star, alpha, dim, m_u);
}

double r_alpha_derivative(double x, const Vec& v, const Vec& v_star,
                          double alpha, int order, int dim, int m_u) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("r_alpha_derivative: order must be 1 or 2");
  constexpr double hi = 0.70710678118654757;
  if (!(x >= 0.0 && x <= hi + 1e-15))
    throw std::invalid_argument(
        "r_alpha_derivative: x must lie in [0, sqrt(2)/2]");
  const double x2 = x * x;
  const double one_m = 1.0 - x2;
  const double root = std::sqrt(one_m);
  const double inv_root = 1.0 / root;
  const double v2 = norm2(v, dim);
  const double vs2 = norm2(v_star, dim);
  Vec rel{v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
  const double dist = norm(rel, dim);
  Vec e1{0, 0, 0}, e2{0, 0, 0};
  int count = dim == 2 ? 2 : std::max(3, m_u);
  if (dist > 0.0) {
    Vec k{rel[0] / dist, rel[1] / dist, rel[2] / dist};
    orthonormal_frame(k, dim, e1, e2);
  }
  const double u_w = equator_area(dim) / count;
  double acc = 0.0;
  for (int m = 0; m < count; ++m) {
    double udot = 0.0;
    if (dist > 0.0) {
      Vec u;
      if (dim == 2) {
        double s = (m == 0) ? 1.0 : -1.0;
        u = Vec{s * e1[0], s * e1[1], 0.0};
      } else {
        double phi = 2.0 * kPi * m / count;
        double cp = std::cos(phi), sp = std::sin(phi);
        u = Vec{cp * e1[0] + sp * e2[0], cp * e1[1] + sp * e2[1],
                cp * e1[2] + sp * e2[2]};
      }
      udot = dot(u, v_star, dim);
    }
    const double L = dist * udot;
    const double base = 1.0 + v2 * one_m + vs2 * x2 + 2.0 * x * root * L;
    // d(base)/dx
    const double G = -2.0 * x * v2 + 2.0 * x * vs2 + 2.0 * root * L -
                     2.0 * x2 * inv_root * L;
    if (order == 1) {
      acc += G * pow_fast(base, alpha - 1.0);
    } else {
      const double Gp = -2.0 * v2 + 2.0 * vs2 - 2.0 * x * inv_root * L -
                        2.0 * L * (2.0 * x * inv_root +
                                   x2 * x * inv_root * inv_root * inv_root);
      acc += alpha > 1.0 ? (alpha - 1.0) * G * G * pow_fast(base, alpha - 2.0) +
                               Gp * pow_fast(base, alpha - 1.0)
                         : Gp * pow_fast(base, alpha - 1.0);
    }
  }
  return alpha * acc * u_w;
}

}  // namespace boltzlp
