#pragma once

#include <cstddef>
#include <vector>

#include "boltzlp/geometry.hpp"

namespace boltzlp {

/// Cell-centered uniform tensor grid on [-R, R]^N with nodes
/// v_i = -R + (i + 1/2) h per axis, h = 2R/n.  All velocity integrals are
/// midpoint sums over this grid.
struct VelocityGrid {
  int dim;
  int n;
  double R;
  double h;

  VelocityGrid(int dim_, int n_, double R_);

  std::size_t size() const;
  double axis_node(int i) const { return -R + (i + 0.5) * h; }
  double cell_volume() const;

  std::size_t flat(int ix, int iy, int iz = 0) const {
    std::size_t idx = static_cast<std::size_t>(ix) * n + iy;
    if (dim == 3) idx = idx * n + iz;
    return idx;
  }
  Vec node(std::size_t flat_index) const;

  bool operator==(const VelocityGrid& other) const {
    return dim == other.dim && n == other.n && R == other.R;
  }
};

/// Nonnegative density sampled on a velocity grid.
struct Distribution {
  VelocityGrid grid;
  std::vector<double> values;

  static Distribution zero(const VelocityGrid& grid);
  explicit Distribution(const VelocityGrid& grid_)
      : grid(grid_), values(grid_.size(), 0.0) {}
};

/// Weighted-L^p norm parameters: exponent p > 1 and weight exponent q >= 0.
/// Compatibility with a singular kernel (pq >= 2 for ν ∈ (-2,-1],
/// pq >= 4 for ν ∈ (-3,-2]) is enforced at the harness level.
struct NormSpec {
  double p;
  double q;
  NormSpec(double p_, double q_);
  double p_conjugate() const { return p / (p - 1.0); }
};

/// Verifies the weight-vs-singularity compatibility for (p, q) against an
/// angular kernel; throws std::invalid_argument with the offending condition.
void require_norm_compatible(const NormSpec& spec, const AngularKernel& b);

/// (Σ_i f_i^p <v_i>^{pq} h^N)^{1/p} with <v> = (1+|v|^2)^{1/2}.
double weighted_lp_norm(const Distribution& f, const NormSpec& spec);

/// Σ_i f_i <v_i>^s h^N.
double l1_moment(const Distribution& f, double s);

/// Σ_{i : f_i > 0} f_i log f_i h^N  (x log x → 0 at x = 0).
double entropy(const Distribution& f);

double mass(const Distribution& f);
Vec momentum(const Distribution& f);
double kinetic_energy(const Distribution& f);  // Σ f |v|^2 h^N

Distribution maxwellian(const VelocityGrid& grid, double rho, const Vec& u,
                        double T);

struct MaxwellComponent {
  double rho;
  Vec u;
  double T;
};
Distribution mixture(const VelocityGrid& grid,
                     const std::vector<MaxwellComponent>& components);

}  // namespace boltzlp
