#include "boltzlp/ensemble.hpp"

#include <cmath>

namespace boltzlp {

std::vector<Distribution> make_mixture_ensemble(const VelocityGrid& grid,
                                                const EnsembleConfig& config) {
  if (config.size <= 0)
    throw std::invalid_argument("ensemble: size must be positive");
  if (config.min_components < 1 ||
      config.max_components < config.min_components)
    throw std::invalid_argument("ensemble: bad component count range");
  if (!(config.T_min > 0.0 && config.T_max >= config.T_min))
    throw std::invalid_argument("ensemble: bad temperature range");

  Rng rng(config.seed);
  std::vector<Distribution> members;
  members.reserve(config.size);
  for (int m = 0; m < config.size; ++m) {
    int k = rng.uniform_int(config.min_components, config.max_components);
    double target_mass = rng.uniform(config.mass_min, config.mass_max);
    std::vector<MaxwellComponent> comps(k);
    double raw_total = 0.0;
    for (MaxwellComponent& c : comps) {
      c.rho = rng.uniform(0.2, 1.0);
      raw_total += c.rho;
      for (int d = 0; d < grid.dim; ++d)
        c.u[d] = rng.uniform(-config.drift_max, config.drift_max);
      c.T = rng.uniform(config.T_min, config.T_max);
    }
    for (MaxwellComponent& c : comps) c.rho *= target_mass / raw_total;
    members.push_back(mixture(grid, comps));
  }
  return members;
}

std::vector<Distribution> make_scaling_family(
    const VelocityGrid& grid, const std::vector<MaxwellComponent>& base,
    int members, double shrink) {
  if (members < 2)
    throw std::invalid_argument("scaling family: need at least 2 members");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("scaling family: shrink must lie in (0,1)");
  std::vector<Distribution> family;
  family.reserve(members);
  double scale = 1.0;
  // keep the narrowest component resolvable on the grid
  const double T_floor = 2.25 * grid.h * grid.h;
  for (int j = 0; j < members; ++j) {
    std::vector<MaxwellComponent> comps = base;
    for (MaxwellComponent& c : comps)
      c.T = std::max(c.T * scale, T_floor);
    family.push_back(mixture(grid, comps));
    scale *= shrink;
  }
  return family;
}

}  // namespace boltzlp
