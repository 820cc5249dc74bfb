#include "boltzlp/state.hpp"

#include <cmath>
#include <sstream>

namespace boltzlp {

VelocityGrid::VelocityGrid(int dim_, int n_, double R_)
    : dim(dim_), n(n_), R(R_), h(2.0 * R_ / n_) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("velocity grid: dimension must be 2 or 3");
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument(
        "velocity grid: points per axis must be even and >= 8");
  if (!(R > 0.0))
    throw std::invalid_argument("velocity grid: truncation radius must be > 0");
}

std::size_t VelocityGrid::size() const {
  std::size_t s = static_cast<std::size_t>(n) * n;
  if (dim == 3) s *= n;
  return s;
}

double VelocityGrid::cell_volume() const {
  double v = h * h;
  if (dim == 3) v *= h;
  return v;
}

Vec VelocityGrid::node(std::size_t flat_index) const {
  Vec v{0.0, 0.0, 0.0};
  if (dim == 2) {
    v[1] = axis_node(static_cast<int>(flat_index % n));
    v[0] = axis_node(static_cast<int>(flat_index / n));
  } else {
    v[2] = axis_node(static_cast<int>(flat_index % n));
    flat_index /= n;
    v[1] = axis_node(static_cast<int>(flat_index % n));
    v[0] = axis_node(static_cast<int>(flat_index / n));
  }
  return v;
}

Distribution Distribution::zero(const VelocityGrid& grid) {
  return Distribution(grid);
}

NormSpec::NormSpec(double p_, double q_) : p(p_), q(q_) {
  if (!(p > 1.0))
    throw std::invalid_argument("norm spec: p must satisfy p > 1");
  if (!(q >= 0.0)) throw std::invalid_argument("norm spec: q must be >= 0");
}

void require_norm_compatible(const NormSpec& spec, const AngularKernel& b) {
  if (b.kind() != AngularKind::Singular || !b.singular_at_origin()) return;
  double nu = b.nu();
  double pq = spec.p * spec.q;
  if (nu > -1.0) return;
  if (nu > -2.0) {
    if (pq < 2.0) {
      std::ostringstream msg;
      msg << "norm spec (p=" << spec.p << ", q=" << spec.q
          << "): singular kernels with nu in (-2,-1] require pq >= 2, got pq="
          << pq;
      throw std::invalid_argument(msg.str());
    }
    return;
  }
  if (pq < 4.0) {
    std::ostringstream msg;
    msg << "norm spec (p=" << spec.p << ", q=" << spec.q
        << "): singular kernels with nu in (-3,-2] require pq >= 4, got pq="
        << pq;
    throw std::invalid_argument(msg.str());
  }
}

double weighted_lp_norm(const Distribution& f, const NormSpec& spec) {
  const double half_pq = 0.5 * spec.p * spec.q;
  const std::size_t cells = f.grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi == 0.0) continue;
    double w = pow_fast(bracket2(f.grid.node(i), f.grid.dim), half_pq);
    sum += pow_fast(fi, spec.p) * w;
  }
  sum *= f.grid.cell_volume();
  return pow_fast(sum, 1.0 / spec.p);
}

double l1_moment(const Distribution& f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("l1_moment: s must be >= 0");
  const double half_s = 0.5 * s;
  const std::size_t cells = f.grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi == 0.0) continue;
    sum += fi * pow_fast(bracket2(f.grid.node(i), f.grid.dim), half_s);
  }
  return sum * f.grid.cell_volume();
}

double entropy(const Distribution& f) {
  const std::size_t cells = f.grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi > 0.0) sum += fi * std::log(fi);
  }
  return sum * f.grid.cell_volume();
}

double mass(const Distribution& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum * f.grid.cell_volume();
}

Vec momentum(const Distribution& f) {
  Vec p{0.0, 0.0, 0.0};
  const std::size_t cells = f.grid.size();
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi == 0.0) continue;
    Vec v = f.grid.node(i);
    for (int d = 0; d < 3; ++d) p[d] += fi * v[d];
  }
  double cell = f.grid.cell_volume();
  for (int d = 0; d < 3; ++d) p[d] *= cell;
  return p;
}

double kinetic_energy(const Distribution& f) {
  double sum = 0.0;
  const std::size_t cells = f.grid.size();
  for (std::size_t i = 0; i < cells; ++i) {
    double fi = f.values[i];
    if (fi == 0.0) continue;
    sum += fi * norm2(f.grid.node(i), f.grid.dim);
  }
  return sum * f.grid.cell_volume();
}

Distribution maxwellian(const VelocityGrid& grid, double rho, const Vec& u,
                        double T) {
  if (!(T > 0.0)) throw std::invalid_argument("maxwellian: T must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("maxwellian: rho must be > 0");
  Distribution f(grid);
  const double norm_const =
      rho / pow_fast(2.0 * kPi * T, 0.5 * grid.dim);
  const double inv2T = 1.0 / (2.0 * T);
  const std::size_t cells = grid.size();
  for (std::size_t i = 0; i < cells; ++i) {
    Vec v = grid.node(i);
    Vec d{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
    f.values[i] = norm_const * std::exp(-norm2(d, grid.dim) * inv2T);
  }
  return f;
}

Distribution mixture(const VelocityGrid& grid,
                     const std::vector<MaxwellComponent>& components) {
  Distribution f(grid);
  for (const MaxwellComponent& c : components) {
    Distribution g = maxwellian(grid, c.rho, c.u, c.T);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      f.values[i] += g.values[i];
  }
  return f;
}

}  // namespace boltzlp
