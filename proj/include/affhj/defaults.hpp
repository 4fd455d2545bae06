#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>

namespace affhj::defaults {

// Sampling.
inline constexpr double box_lo = -1.0;
inline constexpr double box_hi = 1.0;
inline constexpr std::size_t sample_count = 100;
inline constexpr std::uint64_t seed = 42;

// Integration.
inline constexpr double step = 1e-3;
inline constexpr double horizon = 1.0;
inline constexpr std::size_t verify_points = 10;

// Central-difference step used when a derived coefficient has no exact jet.
inline constexpr double fd_step = 1e-5;

// Tolerances.
inline constexpr double antisymmetry_tol = 1e-10;
inline constexpr double chart_tol = 1e-8;
inline constexpr double cocycle_e0_tol = 1e-12;
inline constexpr double reeb_residual_tol = 1e-10;
inline constexpr double reeb_degenerate_tol = 1e-8;
inline constexpr double cocycle_tol = 1e-8;
inline constexpr double hj_tol = 1e-8;
inline constexpr double trajectory_tol = 1e-6;
inline constexpr double reduced_x_tol = 1e-12;
inline constexpr double trajectory_box_pad = 0.05;

void print(std::ostream& out);

}  // namespace affhj::defaults
