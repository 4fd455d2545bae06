#pragma once

// Lie affgebroids through their bidual algebroid in a basis {e_0, e_a}
// adapted to the cocycle 1_A (1_A(e_0) = 1, 1_A(e_a) = 0), the Hamiltonian
// cosymplectic pair (Omega_h, eta) on the prolongation over V*, and the Reeb
// section.
//
// Index layout used throughout:
//   bidual          0 = e_0, 1..n = e_a
//   vertical        0..n-1 = e_a
//   prolongation    0 = e~_0, 1..n = e~_a, n+1..2n = e-_a
//                   over the coordinates (x^1..x^m, y_1..y_n)

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "affhj/algebroid.hpp"
#include "affhj/expr.hpp"
#include "affhj/sampling.hpp"

namespace affhj {

class AffgebroidChart {
 public:
  /// rho0: m entries (rho^i_0). rhoV: n rows of m (rho^i_a).
  /// c0: n rows of n, c0[a][g] = C^g_{0a}. cv: n^3 entries, cv_index(n, a, b, g) = C^g_{ab}.
  AffgebroidChart(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars, std::vector<Expr> rho0,
                  std::vector<std::vector<Expr>> rhoV, std::vector<std::vector<Expr>> c0, std::vector<Expr> cv);

  static std::size_t cv_index(std::size_t n, std::size_t a, std::size_t b, std::size_t g) {
    return (a * n + b) * n + g;
  }

  std::size_t m() const;
  std::size_t n() const;
  const std::vector<std::string>& base_vars() const;
  const std::vector<std::string>& fiber_vars() const;
  /// base_vars followed by fiber_vars: the coordinates of V*.
  const std::vector<std::string>& phase_vars() const;

  const Expr& rho0(std::size_t i) const;
  const Expr& rhoV(std::size_t a, std::size_t i) const;
  const Expr& c0(std::size_t a, std::size_t g) const;
  const Expr& cv(std::size_t a, std::size_t b, std::size_t g) const;

  const AlgebroidChart& bidual() const;
  const AlgebroidChart& vertical() const;
  const AlgebroidChart& prolongation() const;
  /// T^A~ A^+ with its Liouville and canonical symplectic sections; fiber
  /// coordinates (y_0, y_1..y_n).
  const DualProlongation& bidual_dual_prolongation() const;
  const DualProlongation& vertical_dual_prolongation() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

AlgebroidChart bidual_chart(const AffgebroidChart& a);
AlgebroidChart vertical_chart(const AffgebroidChart& a);
AlgebroidChart prolongation_chart(const AffgebroidChart& a);

/// h(x, y) = (x, -H(x, y), y).
class HamiltonianSection {
 public:
  HamiltonianSection(AffgebroidChart chart, Expr hamiltonian);

  const AffgebroidChart& chart() const { return chart_; }
  const Expr& hamiltonian() const { return h_; }

  double operator()(std::span<const double> phase_point) const;
  /// Value and the m + n partials (x first, then y).
  double operator()(std::span<const double> phase_point, std::span<double> gradient) const;

 private:
  AffgebroidChart chart_;
  Expr h_;
  BoundExpr bound_;
};

/// Section alpha of A^+: alpha_0 e^0 + alpha_a e^a with coefficients in x.
class CoSection {
 public:
  CoSection(AffgebroidChart chart, Expr alpha0, std::vector<Expr> alphaV);

  const AffgebroidChart& chart() const { return chart_; }
  const Expr& alpha0() const { return alpha0_; }
  const std::vector<Expr>& alphaV() const { return alphaV_; }

  /// value = (alpha_0, alpha_1..alpha_n), gradient = (n+1) x m.
  FormJet jet(std::span<const double> x) const;
  /// As a 1-section of the bidual chart (exact jet).
  FormField field() const;

 private:
  AffgebroidChart chart_;
  Expr alpha0_;
  std::vector<Expr> alphaV_;
  std::shared_ptr<const std::vector<BoundExpr>> bound_;
};

/// Section gamma = gamma_a e^a of V*.
class VStarSection {
 public:
  VStarSection(AffgebroidChart chart, std::vector<Expr> gammaV);

  const AffgebroidChart& chart() const { return chart_; }
  const std::vector<Expr>& gammaV() const { return gammaV_; }
  /// value = (gamma_1..gamma_n), gradient = n x m.
  FormJet jet(std::span<const double> x) const;

 private:
  AffgebroidChart chart_;
  std::vector<Expr> gammaV_;
  std::shared_ptr<const std::vector<BoundExpr>> bound_;
};

/// eta = e~^0 on the prolongation.
KSection eta(const AffgebroidChart& a);

/// Omega_h from its local formula.
FormField omega_h(const HamiltonianSection& h);
/// lambda_h = (Th, h)^* lambda_{A~}.
FormField lambda_h(const HamiltonianSection& h);
/// (Th, h)^* Omega_{A~}, an independent route to Omega_h.
FormField omega_h_by_pullback(const HamiltonianSection& h);

/// (Th, h): T^{A~} V* -> T^{A~} A^+.
AlgebroidMorphism hamiltonian_prolongation_map(const HamiltonianSection& h);
/// (T gamma, gamma): A~ -> T^{A~} V*.
AlgebroidMorphism section_prolongation_map(const VStarSection& gamma);
/// (i_V, Id): T^V V* -> T^{A~} V*.
AlgebroidMorphism vertical_inclusion_map(const AffgebroidChart& a);

/// h o gamma as a 1-section of the bidual: (-H(x, gamma(x)), gamma_a(x)), exact jet.
FormField h_compose(const HamiltonianSection& h, const VStarSection& gamma);

/// Reeb section from the closed formula, 2n+1 coefficients at (x, y).
std::vector<double> reeb(const HamiltonianSection& h, std::span<const double> phase_point);

struct ReebSolution {
  std::vector<double> coefficients;
  double residual = 0.0;  // max |A v - b|
  std::size_t rank = 0;
  bool nondegenerate = false;
};

class DegenerateCosymplecticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves [Omega^T; eta] v = [0; 1] by least squares. Throws
/// DegenerateCosymplecticError when the system is rank deficient or the
/// residual exceeds defaults::reeb_degenerate_tol.
ReebSolution reeb_solve(const HamiltonianSection& h, std::span<const double> phase_point);

struct PullbackReport {
  double liouville = 0.0;   // |(T gamma)^* lambda_h - h o gamma|
  double symplectic = 0.0;  // |(T gamma)^* Omega_h + d(h o gamma)|
  double bar = 0.0;         // |(T gamma)^* e-^a - d gamma_a|
  double morphism = 0.0;    // |d (T gamma)^* phi - (T gamma)^* d phi| over a corpus of phi
  std::size_t points = 0;
};

PullbackReport pullback_identities(const VStarSection& gamma, const HamiltonianSection& h, const SamplePlan& plan);

struct RestrictionReport {
  double omega = 0.0;   // |(i_V)^* Omega_h - Omega_V|
  double lambda = 0.0;  // |(i_V)^* lambda_h - lambda_V|
  double eta = 0.0;     // |(i_V)^* eta|
  std::size_t points = 0;
};

/// `plan` samples the phase space (m + n coordinates).
RestrictionReport vertical_restriction_check(const HamiltonianSection& h, const SamplePlan& plan);

struct CosymplecticReport {
  double d_eta = 0.0;
  double d_omega = 0.0;
  double omega_transcription = 0.0;  // |Omega_h - (Th)^* Omega_A~| and |Omega_h + d lambda_h|
  double reeb_residual = 0.0;        // worst reeb_solve residual
  double reeb_agreement = 0.0;       // |reeb - reeb_solve|
  double reeb_contraction = 0.0;     // |i_R Omega_h| and |i_R eta - 1| for the closed formula
  std::size_t min_rank = 0;
  std::size_t points = 0;
  bool nondegenerate = true;
};

CosymplecticReport cosymplectic_check(const HamiltonianSection& h, const SamplePlan& plan);

struct AffgebroidValidation {
  double cv_antisymmetry = 0.0;
  double e0_differential = 0.0;  // max |d e^0| on the bidual
  ValidationReport bidual;
  ValidationReport vertical;
  ValidationReport prolongation;
  bool valid() const;
};

/// `plan` samples the phase space; the base charts use its first m axes.
AffgebroidValidation validate_affgebroid(const AffgebroidChart& a, const SamplePlan& plan);

}  // namespace affhj
