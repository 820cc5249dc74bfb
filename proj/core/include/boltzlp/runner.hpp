#pragma once

#include "boltzlp/config.hpp"

namespace boltzlp {

struct CheckOutcome {
  std::string json;
  bool all_pass = false;
};

/// Runs the named inequality suite on the configured ensemble/state and
/// returns the serialized report array.
CheckOutcome run_check(const RunConfig& config, const std::string& suite,
                       std::optional<std::uint64_t> seed_override);

/// Flow run from initial_state with the norm/moment lists the trajectory
/// checks need folded in.
Trajectory run_flow(const RunConfig& config);

void run_simulate(const RunConfig& config, const std::string& out_path);

void run_collide(const RunConfig& config, const std::string& f_path,
                 const std::string& g_path, const std::string& out_prefix);

}  // namespace boltzlp
