#pragma once

#include <cstdint>

#include "boltzlp/state.hpp"

namespace boltzlp {

/// Deterministic, platform-independent uniform stream (splitmix64).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(
                                             hi - lo + 1));
  }
};

struct EnsembleConfig {
  int size = 50;
  std::uint64_t seed = 0;
  int min_components = 1;
  int max_components = 3;
  double T_min = 0.5;
  double T_max = 1.5;
  double drift_max = 1.5;
  double mass_min = 0.5;
  double mass_max = 1.5;
};

/// Seeded ensemble of Maxwellian mixtures used by the inequality suites.
std::vector<Distribution> make_mixture_ensemble(const VelocityGrid& grid,
                                                const EnsembleConfig& config);

/// Family for the gain-exponent probe: the base mixture plus copies with
/// component temperatures scaled down geometrically, so the Lp_q norm grows
/// while mass stays fixed and the L1/entropy bounds stay finite.
std::vector<Distribution> make_scaling_family(
    const VelocityGrid& grid, const std::vector<MaxwellComponent>& base,
    int members, double shrink = 0.65);

}  // namespace boltzlp
