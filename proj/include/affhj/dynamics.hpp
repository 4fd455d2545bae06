#pragma once

// Hamilton equations on (x, y) and the reduced field of a section, with a
// fixed-step RK4 integrator.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "affhj/affgebroid.hpp"

namespace affhj {

struct Trajectory {
  double t0 = 0.0;
  double step = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  bool aborted = false;
  std::string error;

  std::size_t size() const { return states.size(); }
  const std::vector<double>& back() const { return states.back(); }
};

using VectorField = std::function<std::vector<double>(std::span<const double>)>;

/// Classical RK4 from t0 to t_end with the last step shortened. Negative
/// steps integrate backwards (t_end < t0). Non-finite states or evaluation
/// errors abort the run; the partial trajectory is returned with the flag set.
Trajectory rk4(const VectorField& field, std::vector<double> state0, double t0, double t_end, double step);

/// (dx/dt, dy/dt) at a phase point.
std::vector<double> hamilton_rhs(const HamiltonianSection& h, std::span<const double> state);

/// Requires step > 0 and t_end > t0 (std::invalid_argument otherwise).
Trajectory integrate(const HamiltonianSection& h, std::vector<double> state0, double t0, double t_end, double step);

/// X(x) = rho_0(x) + dH/dy_a(x, alpha_V(x)) rho_a(x).
VectorField reduced_field(const CoSection& alpha, const HamiltonianSection& h);

Trajectory integrate_reduced(const CoSection& alpha, const HamiltonianSection& h, std::vector<double> x0, double t0,
                             double t_end, double step);

}  // namespace affhj
