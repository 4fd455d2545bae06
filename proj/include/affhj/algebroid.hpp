#pragma once

// Lie algebroids in a single chart: structure data, alternating k-sections,
// the differential d^E, morphism pullbacks and numeric axiom validation.
//
// Conventions. Basis sections e_a, dual basis e^a. Anchor rho(e_a) =
// rho^i_a d/dx^i and bracket [e_a, e_b] = C^c_{ab} e_c. A k-section is stored
// by its coefficients on e^{a1} ^ ... ^ e^{ak} with a1 < ... < ak, and the
// wedge uses the determinant convention (e^1 ^ e^2)(e_1, e_2) = 1, so the
// stored coefficient is the value on (e_{a1}, ..., e_{ak}).

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affhj/expr.hpp"
#include "affhj/sampling.hpp"

namespace affhj {

using Point = std::vector<double>;

/// Enumerates sorted k-subsets of {0, ..., rank-1} (k <= 3) lexicographically
/// and resolves arbitrary index tuples to (component, sign).
class FormIndex {
 public:
  static constexpr int max_degree = 3;

  FormIndex(std::size_t rank, int degree);

  std::size_t rank() const { return rank_; }
  int degree() const { return degree_; }
  std::size_t size() const { return tuples_.size(); }
  const std::array<int, max_degree>& tuple(std::size_t component) const { return tuples_[component]; }

  struct Slot {
    std::size_t component;
    int sign;  // +1 or -1
  };
  /// nullopt when an index repeats (the alternating value is zero).
  std::optional<Slot> locate(std::span<const int> indices) const;

 private:
  std::size_t rank_;
  int degree_;
  std::vector<std::array<int, max_degree>> tuples_;
  std::vector<int> table_;  // rank^degree entries: signed (component + 1), 0 if degenerate
};

/// Anchor and structure functions evaluated at one base point.
struct ChartValues {
  std::size_t base_dim = 0;
  std::size_t rank = 0;
  std::vector<double> anchor;     // [a * base_dim + i] = rho^i_a
  std::vector<double> structure;  // [(a * rank + b) * rank + c] = C^c_{ab}

  double rho(std::size_t a, std::size_t i) const { return anchor[a * base_dim + i]; }
  double c(std::size_t a, std::size_t b, std::size_t c) const {
    return structure[(a * rank + b) * rank + c];
  }
};

class AlgebroidChart {
 public:
  /// `anchor` has rank * m entries indexed [a * m + i]; `structure` has rank^3
  /// entries indexed by structure_index(rank, a, b, c) and holds C^c_{ab}.
  AlgebroidChart(std::vector<std::string> base_vars, std::size_t rank, std::vector<Expr> anchor,
                 std::vector<Expr> structure);

  static std::size_t structure_index(std::size_t rank, std::size_t a, std::size_t b, std::size_t c) {
    return (a * rank + b) * rank + c;
  }

  std::size_t base_dim() const;
  std::size_t rank() const;
  const std::vector<std::string>& base_vars() const;
  const Expr& anchor(std::size_t a, std::size_t i) const;
  const Expr& structure(std::size_t a, std::size_t b, std::size_t c) const;

  ChartValues evaluate(std::span<const double> point) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Coefficients of a k-form and their first partials in the base coordinates.
struct FormJet {
  std::vector<double> value;
  std::vector<double> gradient;  // [component * base_dim + j]
};

/// A k-section given by point evaluators. Expression-backed sections carry an
/// exact jet; derived sections (outputs of d, pullbacks) fall back to central
/// differences (five-point stencil) with step defaults::fd_step.
class FormField {
 public:
  using Evaluator = std::function<std::vector<double>(std::span<const double>)>;
  using JetEvaluator = std::function<FormJet(std::span<const double>)>;

  FormField(std::size_t base_dim, std::size_t rank, int degree, Evaluator values,
            JetEvaluator jet = {});

  std::size_t base_dim() const { return base_dim_; }
  std::size_t rank() const { return rank_; }
  int degree() const { return degree_; }
  std::size_t size() const { return size_; }
  bool has_exact_jet() const { return static_cast<bool>(jet_); }

  std::vector<double> operator()(std::span<const double> point) const { return values_(point); }
  FormJet jet(std::span<const double> point) const;

  /// Scalar multiple and sum; both keep exact jets when the inputs have them.
  friend FormField operator*(double s, const FormField& f);
  friend FormField operator+(const FormField& a, const FormField& b);
  friend FormField operator-(const FormField& a, const FormField& b);

 private:
  std::size_t base_dim_;
  std::size_t rank_;
  int degree_;
  std::size_t size_;
  Evaluator values_;
  JetEvaluator jet_;
};

/// Alternating k-section with expression coefficients (k <= 3).
class KSection {
 public:
  KSection(AlgebroidChart chart, int degree);

  static KSection function(AlgebroidChart chart, Expr f);
  /// The dual basis 1-section e^a.
  static KSection basis(AlgebroidChart chart, std::size_t a);

  const AlgebroidChart& chart() const { return chart_; }
  int degree() const { return degree_; }

  /// Sets the coefficient of e^{i1} ^ ... ^ e^{ik}; indices in any order
  /// (the sign of the sorting permutation is applied).
  KSection& set(std::span<const int> indices, const Expr& coefficient);
  KSection& set(std::initializer_list<int> indices, const Expr& coefficient) {
    return set(std::span<const int>(indices.begin(), indices.size()), coefficient);
  }
  const std::vector<Expr>& coefficients() const { return coeffs_; }

  FormField field() const;

 private:
  AlgebroidChart chart_;
  int degree_;
  std::vector<Expr> coeffs_;
};

/// d^E on sections of degree <= 2.
FormField differential(const AlgebroidChart& chart, const FormField& section);
FormField differential(const KSection& section);

/// Interior product i_X of a vector given by its components in the basis.
std::vector<double> contract(const FormIndex& index, std::span<const double> coefficients,
                             std::span<const double> vector);

struct ValidationReport {
  double antisymmetry = 0.0;  // max |C^c_ab + C^c_ba|
  double anchor = 0.0;        // max |d(d x^i)|
  double jacobi = 0.0;        // max |d(d e^a)|
  std::size_t points = 0;
  Point worst_jacobi_point;
  bool valid() const;
};

ValidationReport validate_chart(const AlgebroidChart& chart, const SamplePlan& plan);

/// Vector bundle map F covering f. fiber_map(x) is target_rank x source_rank,
/// row-major, with F(e_a) = sum_b F[b][a] e'_b.
struct AlgebroidMorphism {
  std::size_t source_base_dim = 0;
  std::size_t source_rank = 0;
  std::size_t target_base_dim = 0;
  std::size_t target_rank = 0;
  std::function<Point(std::span<const double>)> base_map;
  std::function<std::vector<double>(std::span<const double>)> fiber_map;

  static AlgebroidMorphism identity(const AlgebroidChart& chart);
  static AlgebroidMorphism from_expressions(const AlgebroidChart& source, const AlgebroidChart& target,
                                            const std::vector<Expr>& base_map,
                                            const std::vector<std::vector<Expr>>& fiber_map);
};

FormField pullback(const AlgebroidMorphism& morphism, const FormField& section);
FormField pullback(const AlgebroidChart& source, const AlgebroidChart& target,
                   const std::vector<Expr>& base_map, const std::vector<std::vector<Expr>>& fiber_map,
                   const KSection& section);

/// Prolongation T^E E* of E over its dual bundle, with basis (e~_a, e-_a),
/// together with the Liouville section y_a e~^a and the canonical symplectic
/// section e~^a ^ e-^a + 1/2 C^c_ab y_c e~^a ^ e~^b.
struct DualProlongation {
  AlgebroidChart chart;
  KSection liouville;
  KSection symplectic;
};

DualProlongation prolong_over_dual(const AlgebroidChart& algebroid,
                                   const std::vector<std::string>& fiber_vars);

/// Max |coefficient| of a form over a set of points.
double max_abs(const FormField& form, const std::vector<Point>& points);

}  // namespace affhj
