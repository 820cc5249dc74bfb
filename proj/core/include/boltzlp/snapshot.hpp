#pragma once

#include <string>

#include "boltzlp/flow.hpp"
#include "boltzlp/state.hpp"

namespace boltzlp {

/// Distribution snapshot: CSV with a `N,n,R` header line, one header value
/// line, then one value per line in row-major order (first axis slowest).
void write_distribution_csv(const Distribution& f, const std::string& path);
Distribution read_distribution_csv(const std::string& path);

/// Trajectory CSV: columns t, mass, momentum components, energy, entropy,
/// then one column per configured norm (lp_norm_p{p}_q{q}) and L1 moment
/// (l1_moment_s{s}).
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace boltzlp
