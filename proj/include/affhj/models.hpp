#pragma once

// Built-in models: the trivial fibration R x R^d -> R (classical
// time-dependent mechanics), algebroids embedded as affgebroids with a central
// e_0, and the reduced rigid body on R x so(3)*.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "affhj/affgebroid.hpp"
#include "affhj/algebroid.hpp"
#include "affhj/sampling.hpp"

namespace affhj {

struct ModelBundle {
  std::string name;
  AffgebroidChart chart;
  Expr hamiltonian;
  std::vector<std::pair<std::string, CoSection>> sections;
  /// Box over the phase space (m + n intervals); base checks use the first m.
  SamplePlan plan;

  HamiltonianSection hamiltonian_section() const { return HamiltonianSection(chart, hamiltonian); }
  bool has_section(const std::string& name) const;
  /// Throws std::out_of_range for unknown names.
  const CoSection& section(const std::string& name) const;
};

/// Coordinates (t, q...) and (p...); rho_0 = d/dt, rho_a = d/dq^a, C = 0.
/// H = sum p^2/2 with sections "free" (dW, W = sum q^2/(2(t+1))), "cubic"
/// (dW, W = sum q^3/3) and "zero". Box t in [0,1], q and p in [-1,1].
ModelBundle trivial_fibration(std::size_t dim_q);
ModelBundle free_particle(std::size_t dim_q = 1);
/// H = sum (p^2 + q^2)/2 with section "cot" (dW, W = sum (q^2/2) cot t) and
/// "zero". Box t in [0.2, 2.9] keeps away from the poles of cot.
ModelBundle harmonic_oscillator(std::size_t dim_q = 1);

/// Tangent algebroid of R^dim over x1..x<dim>.
AlgebroidChart tangent_algebroid(std::size_t dim);
/// so(3) with zero anchor over a one-dimensional base x.
AlgebroidChart so3_chart();
/// so(3) with [e1, e2] = 1.1 e3, [e3, e1] = e2, [e2, e3] = e1.
AlgebroidChart perturbed_so3_chart();
/// [e1, e2] = e3, [e1, e3] = e1; violates the Jacobi identity.
AlgebroidChart broken_jacobi_chart();

/// Embeds an algebroid with a central, anchorless e_0. Fiber coordinates
/// default to y1..yn. Throws std::invalid_argument for an invalid chart.
AffgebroidChart linear_algebroid(const AlgebroidChart& chart, std::vector<std::string> fiber_vars = {});
/// linear_algebroid(tangent_algebroid(dim)) with H = sum y^2/2 and sections
/// "zero", "constant" (alpha_V = 1) and "radial" (alpha_V = x).
ModelBundle linear_tangent(std::size_t dim);

/// Base t, fiber Pi1..Pi3, C^g_ab = eps_abg, H = sum Pi_a^2/(2 I_a). Sections
/// "time" (alpha_0 = t, alpha_V = 0) and "spin" (alpha_V = (0, 0, 1)).
ModelBundle rigid_body(const std::array<double, 3>& inertia);

/// "trivial:<d>", "free:<d>", "oscillator:<d>", "linear:tangent<d>" or
/// "rigid:<I1>,<I2>,<I3>". Throws std::invalid_argument otherwise.
ModelBundle model_by_name(const std::string& name);
bool is_model_name(const std::string& name);

}  // namespace affhj
