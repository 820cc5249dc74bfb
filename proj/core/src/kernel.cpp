#include "boltzlp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace boltzlp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

AngularKernel AngularKernel::constant(double c, double theta_lo,
                                      double theta_hi) {
  require(c >= 0.0, "angular kernel: constant value must be >= 0");
  require(0.0 <= theta_lo && theta_lo <= theta_hi && theta_hi <= kPi,
          "angular kernel: support must satisfy 0 <= lo <= hi <= pi");
  AngularKernel k;
  k.kind_ = AngularKind::ConstantCutoff;
  k.constant_ = c;
  k.window_ = {theta_lo, theta_hi, false, false};
  k.base_window_ = k.window_;
  return k;
}

AngularKernel AngularKernel::table(std::vector<double> cos_nodes,
                                   std::vector<double> values, double theta_lo,
                                   double theta_hi) {
  require(cos_nodes.size() >= 2, "angular kernel: table needs >= 2 nodes");
  require(cos_nodes.size() == values.size(),
          "angular kernel: table nodes/values size mismatch");
  require(std::is_sorted(cos_nodes.begin(), cos_nodes.end()),
          "angular kernel: table cos nodes must be increasing");
  for (double v : values)
    require(v >= 0.0, "angular kernel: table values must be >= 0");
  require(0.0 <= theta_lo && theta_lo <= theta_hi && theta_hi <= kPi,
          "angular kernel: support must satisfy 0 <= lo <= hi <= pi");
  AngularKernel k;
  k.kind_ = AngularKind::TableCutoff;
  k.table_cos_ = std::move(cos_nodes);
  k.table_val_ = std::move(values);
  k.window_ = {theta_lo, theta_hi, false, false};
  k.base_window_ = k.window_;
  return k;
}

AngularKernel AngularKernel::singular(double strength, double nu, int dim,
                                      double theta_lo, double theta_hi) {
  require(strength > 0.0, "angular kernel: singular strength must be > 0");
  require(nu > -3.0, "angular kernel: singular exponent requires nu > -3");
  require(dim == 2 || dim == 3, "angular kernel: dimension must be 2 or 3");
  require(0.0 <= theta_lo && theta_lo <= theta_hi && theta_hi <= kPi,
          "angular kernel: support must satisfy 0 <= lo <= hi <= pi");
  AngularKernel k;
  k.kind_ = AngularKind::Singular;
  k.strength_ = strength;
  k.nu_ = nu;
  k.dim_ = dim;
  k.exponent_ = (-(dim - 2) + nu) / 2.0;
  k.window_ = {theta_lo, theta_hi, false, false};
  k.base_window_ = k.window_;
  return k;
}

AngularKernel AngularKernel::zero() { return constant(0.0); }

// cos_theta for the table lookup, one_minus = 1 - cos(theta) computed
// stably (2 sin^2(theta/2)) for the singular branch
double AngularKernel::raw_eval(double cos_theta, double one_minus) const {
  switch (kind_) {
    case AngularKind::ConstantCutoff:
      return constant_;
    case AngularKind::TableCutoff: {
      const auto& xs = table_cos_;
      const auto& ys = table_val_;
      if (cos_theta <= xs.front()) return ys.front();
      if (cos_theta >= xs.back()) return ys.back();
      auto it = std::upper_bound(xs.begin(), xs.end(), cos_theta);
      std::size_t j = static_cast<std::size_t>(it - xs.begin());
      double t = (cos_theta - xs[j - 1]) / (xs[j] - xs[j - 1]);
      return ys[j - 1] + t * (ys[j] - ys[j - 1]);
    }
    case AngularKind::Singular: {
      if (one_minus <= 0.0) {
        throw std::domain_error(
            "angular kernel: singular kind evaluated at cos(theta) = 1, the "
            "non-integrable point");
      }
      return strength_ * pow_fast(one_minus, exponent_);
    }
  }
  return 0.0;
}

double AngularKernel::raw_eval_theta(double theta) const {
  double half_sin = std::sin(0.5 * theta);
  return raw_eval(std::cos(theta), 2.0 * half_sin * half_sin);
}

double AngularKernel::eval_theta(double theta) const {
  if (!window_.contains(theta)) return 0.0;
  double value = 0.0;
  if (mirrored_) {
    if (base_window_.contains(theta)) value += raw_eval_theta(theta);
    double reflected = kPi - theta;
    if (base_window_.contains(reflected)) value += raw_eval_theta(reflected);
  } else {
    value = raw_eval_theta(theta);
  }
  return value;
}

double AngularKernel::eval_theta_interior(double theta) const {
  if (theta < window_.lo || theta > window_.hi) return 0.0;
  double value = 0.0;
  if (mirrored_) {
    if (theta >= base_window_.lo && theta <= base_window_.hi)
      value += raw_eval_theta(theta);
    double reflected = kPi - theta;
    if (reflected >= base_window_.lo && reflected <= base_window_.hi)
      value += raw_eval_theta(reflected);
  } else {
    value = raw_eval_theta(theta);
  }
  return value;
}

double AngularKernel::eval_cos(double cos_theta) const {
  if (cos_theta < -1.0 || cos_theta > 1.0)
    throw std::domain_error("angular kernel: cos(theta) outside [-1, 1]");
  if (kind_ == AngularKind::Singular && cos_theta == 1.0 &&
      window_.contains(0.0)) {
    // signal evaluation at the non-integrable point
    raw_eval(1.0, 0.0);
  }
  // guard against cos(acos(x)) jitter at the window edges
  double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
  return eval_theta(theta);
}

AngularKernel AngularKernel::symmetrized() const {
  if (mirrored_) return *this;
  AngularKernel k = *this;
  k.mirrored_ = true;
  k.base_window_ = window_;
  k.window_ = {0.0, kPi / 2.0, false, false};
  return k;
}

std::pair<AngularKernel, AngularKernel> AngularKernel::split(
    double theta0) const {
  require(window_.hi <= kPi / 2.0 + 1e-12,
          "angular kernel: split requires support in [0, pi/2]");
  require(theta0 > 0.0 && theta0 <= kPi / 2.0,
          "angular kernel: split angle must lie in (0, pi/2]");
  AngularKernel cutoff = *this;
  cutoff.window_.lo = std::max(window_.lo, theta0);
  cutoff.window_.lo_open = window_.lo_open && cutoff.window_.lo == window_.lo;
  AngularKernel remainder = *this;
  remainder.window_.hi = std::min(window_.hi, theta0);
  remainder.window_.hi_open = true;  // θ0 itself belongs to the cutoff part
  return {cutoff, remainder};
}

bool AngularKernel::singular_at_origin() const {
  if (kind_ != AngularKind::Singular) return false;
  return window_.lo == 0.0 && !window_.empty();
}

bool AngularKernel::is_zero() const {
  if (window_.empty()) return true;
  if (kind_ == AngularKind::ConstantCutoff && constant_ == 0.0) return true;
  if (kind_ == AngularKind::TableCutoff) {
    for (double v : table_val_)
      if (v != 0.0) return false;
    return true;
  }
  return false;
}

double sphere_area(int dim) {
  if (dim == 2) return 2.0 * kPi;
  if (dim == 3) return 4.0 * kPi;
  throw std::invalid_argument("sphere_area: dimension must be 2 or 3");
}

double equator_area(int dim) {
  if (dim == 2) return 2.0;  // S^0 = {-1, +1}, counting measure
  if (dim == 3) return 2.0 * kPi;
  throw std::invalid_argument("equator_area: dimension must be 2 or 3");
}

namespace {

// trapezoid over [a, b] of g(θ) b(θ) (sinθ)^{N-2} with 2^level*base intervals
double band_trapezoid(const AngularKernel& b, int dim, double a, double bb,
                      int intervals, double (*weight)(double)) {
  double h = (bb - a) / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    double theta = a + i * h;
    double sin_pow = dim == 3 ? std::sin(theta) : 1.0;
    double val = b.eval_theta_interior(theta) * weight(theta) * sin_pow;
    sum += (i == 0 || i == intervals) ? 0.5 * val : val;
  }
  return sum * h;
}

double weight_one(double) { return 1.0; }
double weight_moment(double theta) { return 1.0 - std::cos(theta); }

double integrate_angular(const AngularKernel& b, int dim,
                         double (*weight)(double), const GradedOptions& opts,
                         const char* what) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("angular integral: dimension must be 2 or 3");
  if (b.is_zero()) return 0.0;
  const ThetaWindow& win = b.window();
  if (win.empty()) return 0.0;

  const double area = equator_area(dim);

  if (!b.singular_at_origin()) {
    // plain integrand: nested trapezoid refinement with a Cauchy stop
    int intervals = std::max(16, opts.nodes_per_band * 4);
    double prev = band_trapezoid(b, dim, win.lo, win.hi, intervals, weight);
    for (int j = 0; j < opts.max_refine; ++j) {
      intervals *= 2;
      double cur = band_trapezoid(b, dim, win.lo, win.hi, intervals, weight);
      double diff = std::abs(cur - prev);
      if (diff <= opts.rel_tol * std::max(1.0, std::abs(cur)))
        return area * cur;
      prev = cur;
    }
    return area * prev;  // smooth integrand: last refinement is accurate
  }

  // graded nodes θ_k = theta_min * ratio^k toward the singular end
  auto graded_value = [&](double theta_min, int per_band) {
    double total = 0.0;
    double lo = theta_min;
    while (lo < win.hi) {
      double hi = std::min(lo * opts.ratio, win.hi);
      total += band_trapezoid(b, dim, lo, hi, per_band, weight);
      lo = hi;
    }
    return total;
  };

  double theta_min = opts.theta_min;
  int per_band = opts.nodes_per_band;
  double prev = graded_value(theta_min, per_band);
  int growth_streak = 0;
  for (int j = 0; j < opts.max_refine; ++j) {
    theta_min *= 0.25;
    per_band *= 2;
    double cur = graded_value(theta_min, per_band);
    double diff = std::abs(cur - prev);
    if (diff <= opts.rel_tol * std::max(1.0, std::abs(cur)))
      return area * cur;
    double ratio = std::abs(cur) / std::max(std::abs(prev), 1e-300);
    growth_streak = (ratio > 1.05) ? growth_streak + 1 : 0;
    if (growth_streak >= 3) {
      std::ostringstream msg;
      msg << what << ": graded quadrature fails its Cauchy criterion "
          << "(nu = " << b.nu() << ", refinement ratio " << ratio << ")";
      throw NonConvergenceError(msg.str(), ratio);
    }
    prev = cur;
  }
  std::ostringstream msg;
  msg << what << ": graded quadrature did not meet its Cauchy criterion "
      << "after " << opts.max_refine << " refinements";
  throw NonConvergenceError(msg.str(), 0.0);
}

}  // namespace

double angular_mass(const AngularKernel& b, int dim,
                    const GradedOptions& opts) {
  return integrate_angular(b, dim, weight_one, opts, "angular_mass");
}

double angular_moment(const AngularKernel& b, int dim,
                      const GradedOptions& opts) {
  return integrate_angular(b, dim, weight_moment, opts, "angular_moment");
}

CollisionKernel::CollisionKernel(double gamma_, AngularKernel angular_,
                                 int dim_)
    : gamma(gamma_), angular(std::move(angular_)), dim(dim_) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("collision kernel: gamma must lie in [0, 1]");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("collision kernel: dimension must be 2 or 3");
  if (angular.kind() == AngularKind::Singular && angular.dim_hint() != dim)
    throw std::invalid_argument(
        "collision kernel: singular angular kernel built for a different "
        "dimension");
}

SymmetrizedKernel SymmetrizedKernel::with_angular(AngularKernel part) const {
  SymmetrizedKernel k = *this;
  k.angular = std::move(part);
  return k;
}

SymmetrizedKernel symmetrize(const CollisionKernel& kernel) {
  return SymmetrizedKernel{kernel, kernel.angular.symmetrized()};
}

}  // namespace boltzlp
