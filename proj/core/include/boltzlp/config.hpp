#pragma once

#include <optional>
#include <string>

#include "boltzlp/ensemble.hpp"
#include "boltzlp/flow.hpp"

namespace boltzlp {

/// Raised on malformed configs (missing files, unknown keys, invalid values,
/// incompatible parameter combinations); maps to the usage exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KernelConfig {
  double gamma = 1.0;
  std::string type = "constant";  // constant | table | singular
  double c = 1.0;
  double nu = -1.5;
  double strength = 1.0;
  double theta0 = kPi / 6.0;  // split angle used by the estim3/estim5 suites
  std::vector<double> cos_nodes;
  std::vector<double> values;
  std::optional<std::pair<double, double>> support;
};

struct RunConfig {
  int dimension = 2;
  int grid_n = 32;
  double grid_R = 8.0;
  KernelConfig kernel;
  std::vector<NormSpec> norms;
  std::vector<double> l1_orders;
  std::string suite;
  EnsembleConfig ensemble;
  bool has_ensemble = false;
  QuadOptions quad;
  FlowConfig flow;
  std::vector<double> bernoulli_r;
  double t_min = 0.1;
  std::vector<MaxwellComponent> initial_components;
  int probe_members = 8;
  double probe_shrink = 0.65;
  std::optional<double> probe_theta0;
  std::string out_trajectory = "trajectory.csv";
  std::string out_reports = "reports.json";
  std::string out_snapshot_prefix = "snapshot";
};

RunConfig load_config(const std::string& path);

AngularKernel build_angular(const KernelConfig& kc, int dim);
CollisionKernel build_kernel(const RunConfig& config);

/// Cross-field validation with actionable messages: (p, q) versus the
/// kernel's singularity class, cutoff-only flows, mandatory ensemble seeds.
void validate_config(const RunConfig& config);

}  // namespace boltzlp
