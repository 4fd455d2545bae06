#pragma once

// f(h, alpha), the cocycle and Hamilton-Jacobi residuals, and the numeric
// check that the trajectory condition and the HJ condition agree.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "affhj/affgebroid.hpp"
#include "affhj/dynamics.hpp"
#include "affhj/sampling.hpp"

namespace affhj {

/// f(h, alpha)(x) = alpha_0(x) + H(x, alpha_V(x)) as a 0-section of the bidual
/// with an exact jet (chain rule through alpha).
FormField f_of(const HamiltonianSection& h, const CoSection& alpha);

struct ResidualReport {
  double max = 0.0;
  Point worst_point;
  std::size_t points = 0;
};

/// max |d alpha| with alpha read as a 1-section of the bidual.
ResidualReport cocycle_residual(const CoSection& alpha, const SamplePlan& plan);

struct HjReport : ResidualReport {
  double f_min = 0.0;
  double f_max = 0.0;
  double f_mean = 0.0;
};

/// max |rho^i_a df/dx^i| over the sample points and vertical indices.
HjReport hj_residual(const CoSection& alpha, const HamiltonianSection& h, const SamplePlan& plan);
/// The same quantity at one point.
double hj_residual_at(const CoSection& alpha, const HamiltonianSection& h, std::span<const double> x);

/// alpha = d S on the bidual, built symbolically.
CoSection coboundary(const AffgebroidChart& chart, const Expr& potential);

class NotCocycleError : public std::runtime_error {
 public:
  NotCocycleError(double residual, const std::string& what) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Raised when a quantity that holds by construction does not.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TheoremReport {
  Point x0;
  double cocycle = 0.0;
  double trajectory_residual = 0.0;  // max_t max_g |r_g|
  double x_residual = 0.0;           // |X - x-part of the Hamilton field along beta|
  double hj_along = 0.0;             // HJ residual at the trajectory points
  double hj_box = 0.0;               // HJ residual on the padded bounding box of the trajectory
  std::vector<Interval> box;
  std::size_t steps = 0;  // RK4 steps taken
  bool integration_failed = false;
  std::string error;

  bool trajectory_condition() const;  // (i) numerically
  bool hj_condition() const;          // (ii) numerically
  bool agree() const { return trajectory_condition() == hj_condition(); }
};

/// Integrates c(t) from x0 with the reduced field and compares the y
/// equations along beta(t) = (c(t), alpha_V(c(t))). `plan` supplies the box
/// for the cocycle precondition and the count/seed for the trajectory box.
/// Throws NotCocycleError when alpha fails the cocycle check.
TheoremReport verify_theorem(const CoSection& alpha, const HamiltonianSection& h, const Point& x0, double horizon,
                             double step, const SamplePlan& plan);

struct TheoremSetReport {
  double cocycle = 0.0;
  std::vector<TheoremReport> runs;
  bool trajectory_condition() const;
  bool hj_condition() const;
  bool agree() const { return trajectory_condition() == hj_condition(); }
  /// Index of the run with the largest trajectory residual.
  std::size_t witness() const;
};

TheoremSetReport verify_theorem(const CoSection& alpha, const HamiltonianSection& h, const std::vector<Point>& x0s,
                                double horizon, double step, const SamplePlan& plan);

struct Witness {
  bool found = false;
  Point x0;
  double trajectory_residual = 0.0;
  std::size_t tried = 0;
};

/// Searches `count` seeded initial points in the cube of half-width `radius`
/// around `center` for one whose trajectory residual reaches `threshold`.
Witness find_witness(const CoSection& alpha, const HamiltonianSection& h, const Point& center, double radius,
                     std::size_t count, std::uint64_t seed, double horizon, double step, double threshold);

}  // namespace affhj
