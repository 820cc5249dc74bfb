#include "boltzlp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace boltzlp {

namespace {

int round_up_multiple4(int k) { return std::max(4, ((k + 3) / 4) * 4); }

}  // namespace

SigmaRule SigmaRule::build(const AngularKernel& b, int dim,
                           const QuadOptions& opts) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("sigma rule: dimension must be 2 or 3");
  SigmaRule rule;
  rule.dim = dim;
  rule.m_u = dim == 2 ? 2 : std::max(3, opts.m_u);
  rule.u_weight = equator_area(dim) / rule.m_u;
  if (dim == 3) {
    rule.u_cos.resize(rule.m_u);
    rule.u_sin.resize(rule.m_u);
    for (int m = 0; m < rule.m_u; ++m) {
      double phi = 2.0 * kPi * m / rule.m_u;
      rule.u_cos[m] = std::cos(phi);
      rule.u_sin[m] = std::sin(phi);
    }
  }

  const ThetaWindow& win = b.window();
  if (win.empty() || b.is_zero()) return rule;

  // band edges in θ
  std::vector<std::pair<double, double>> bands;
  if (b.singular_at_origin()) {
    double lo = opts.theta_min;
    rule.theta_min_used = lo;
    while (lo < win.hi) {
      double hi = std::min(lo * opts.ratio, win.hi);
      bands.emplace_back(lo, hi);
      lo = hi;
    }
  } else {
    rule.theta_min_used = win.lo;
    bands.emplace_back(win.lo, win.hi);
  }
  rule.bands = static_cast<int>(bands.size());

  auto push_band = [&](double lo, double hi, int intervals, int band_index) {
    double h = (hi - lo) / intervals;
    for (int i = 0; i <= intervals; ++i) {
      ThetaNode node;
      node.theta = lo + i * h;
      node.cos_theta = std::cos(node.theta);
      node.sin_theta = std::sin(node.theta);
      node.cos_half = std::cos(0.5 * node.theta);
      node.sin_half = std::sin(0.5 * node.theta);
      node.cv_stretch = node.cos_half > 0.0
                            ? 1.0 / node.cos_half
                            : std::numeric_limits<double>::infinity();
      node.cv_jacobian = pow_fast(node.cv_stretch, static_cast<double>(dim));
      double sin_pow = dim == 3 ? node.sin_theta : 1.0;
      double edge = (i == 0 || i == intervals) ? 0.5 : 1.0;
      node.w = edge * h * sin_pow;
      // nested subsets: every 2nd / every 4th node
      node.w_mid = (i % 2 == 0)
                       ? ((i == 0 || i == intervals) ? 0.5 : 1.0) * 2.0 * h *
                             sin_pow
                       : 0.0;
      node.w_coarse = (i % 4 == 0)
                          ? ((i == 0 || i == intervals) ? 0.5 : 1.0) * 4.0 * h *
                                sin_pow
                          : 0.0;
      node.b = b.eval_theta_interior(node.theta);
      node.band = band_index;
      rule.nodes.push_back(node);
    }
  };

  if (b.singular_at_origin()) {
    int per_band = round_up_multiple4(opts.band_nodes);
    for (std::size_t k = 0; k < bands.size(); ++k)
      push_band(bands[k].first, bands[k].second, per_band,
                static_cast<int>(k));
  } else {
    push_band(bands[0].first, bands[0].second,
              round_up_multiple4(opts.m_theta), 0);
  }
  return rule;
}

double SigmaRule::kernel_mass() const {
  double s = 0.0;
  for (const ThetaNode& node : nodes) s += node.w * node.b;
  return s * u_weight * m_u;
}

double SigmaRule::weight_sum() const {
  double s = 0.0;
  for (const ThetaNode& node : nodes) s += node.w;
  return s * u_weight * m_u;
}

}  // namespace boltzlp
