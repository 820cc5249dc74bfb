#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzlp {

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when a graded quadrature (or a sampled sup estimate) fails its
/// convergence criterion.  `observed_rate` carries the measured refinement
/// ratio so callers can report how badly things diverged.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double observed_rate)
      : std::runtime_error(what), rate_(observed_rate) {}
  double observed_rate() const { return rate_; }

 private:
  double rate_;
};

// pow with fast paths for the exponents that dominate the hot loops
inline double pow_fast(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.5) return x * std::sqrt(x);
  if (e == 0.0) return 1.0;
  if (e == 3.0) return x * x * x;
  if (e == 4.0) {
    double x2 = x * x;
    return x2 * x2;
  }
  return std::pow(x, e);
}

}  // namespace boltzlp
