#include "affhj/sampling.hpp"

#include <ostream>

namespace affhj {

SamplePlan SamplePlan::unit(std::size_t dim) {
  SamplePlan plan;
  plan.box.assign(dim, {defaults::box_lo, defaults::box_hi});
  return plan;
}

SamplePlan SamplePlan::resized(std::size_t dim) const {
  SamplePlan out = *this;
  out.box.resize(dim, {defaults::box_lo, defaults::box_hi});
  return out;
}

std::vector<std::vector<double>> sample_points(const SamplePlan& plan) {
  SplitMix64 rng(plan.seed);
  std::vector<std::vector<double>> points(plan.count, std::vector<double>(plan.box.size()));
  for (auto& p : points) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(plan.box[i].first, plan.box[i].second);
  }
  return points;
}

namespace defaults {

void print(std::ostream& out) {
  out << "BOX = [" << box_lo << ", " << box_hi << "]\n"
      << "SAMPLES = " << sample_count << "\n"
      << "SEED = " << seed << "\n"
      << "STEP = " << step << "\n"
      << "HORIZON = " << horizon << "\n"
      << "VERIFY_POINTS = " << verify_points << "\n"
      << "FD_STEP = " << fd_step << "\n"
      << "ANTISYMMETRY_TOL = " << antisymmetry_tol << "\n"
      << "CHART_TOL = " << chart_tol << "\n"
      << "COCYCLE_E0_TOL = " << cocycle_e0_tol << "\n"
      << "REEB_RESIDUAL_TOL = " << reeb_residual_tol << "\n"
      << "REEB_DEGENERATE_TOL = " << reeb_degenerate_tol << "\n"
      << "COCYCLE_TOL = " << cocycle_tol << "\n"
      << "HJ_TOL = " << hj_tol << "\n"
      << "TRAJECTORY_TOL = " << trajectory_tol << "\n"
      << "REDUCED_X_TOL = " << reduced_x_tol << "\n"
      << "TRAJECTORY_BOX_PAD = " << trajectory_box_pad << "\n";
}

}  // namespace defaults

}  // namespace affhj
