#include "boltzlp/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "boltzlp/report.hpp"

namespace boltzlp {

void write_distribution_csv(const Distribution& f, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("snapshot: cannot open for writing: " + path);
  out << "N,n,R\n";
  out << f.grid.dim << ',' << f.grid.n << ',' << format_double(f.grid.R)
      << '\n';
  for (double v : f.values) out << format_double(v) << '\n';
  if (!out)
    throw std::runtime_error("snapshot: write failed: " + path);
}

Distribution read_distribution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("snapshot: cannot open: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "N,n,R")
    throw std::runtime_error("snapshot: missing N,n,R header in " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("snapshot: truncated header in " + path);
  int dim = 0, n = 0;
  double R = 0.0;
  {
    std::istringstream ss(line);
    char comma;
    if (!(ss >> dim >> comma >> n >> comma >> R))
      throw std::runtime_error("snapshot: malformed header line in " + path);
  }
  VelocityGrid grid(dim, n, R);
  Distribution f(grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("snapshot: too few values in " + path);
    f.values[i] = std::stod(line);
  }
  return f;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("trajectory: cannot open for writing: " + path);
  auto tag = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return std::string(buf);
  };
  out << "t,mass,momentum_x,momentum_y";
  if (traj.dim == 3) out << ",momentum_z";
  out << ",energy,entropy";
  for (const NormSpec& spec : traj.norm_specs)
    out << ",lp_norm_p" << tag(spec.p) << "_q" << tag(spec.q);
  for (double s : traj.l1_orders) out << ",l1_moment_s" << tag(s);
  out << '\n';
  for (const TrajectorySample& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.mass) << ','
        << format_double(s.momentum[0]) << ',' << format_double(s.momentum[1]);
    if (traj.dim == 3) out << ',' << format_double(s.momentum[2]);
    out << ',' << format_double(s.energy) << ',' << format_double(s.entropy);
    for (double v : s.lp_norms) out << ',' << format_double(v);
    for (double v : s.l1_moments) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("trajectory: write failed: " + path);
}

}  // namespace boltzlp
