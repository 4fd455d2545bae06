#include "affhj/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace affhj {

// ---------------------------------------------------------------------------
// FormIndex

FormIndex::FormIndex(std::size_t rank, int degree) : rank_(rank), degree_(degree) {
  if (degree < 0 || degree > max_degree) throw std::invalid_argument("FormIndex: degree must be in [0, 3]");
  std::array<int, max_degree> t{};
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == degree) {
      tuples_.push_back(t);
      return;
    }
    for (int a = start; a < static_cast<int>(rank); ++a) {
      t[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, a + 1);
    }
  };
  rec(rec, 0, 0);

  std::size_t cells = 1;
  for (int k = 0; k < degree; ++k) cells *= rank;
  table_.assign(cells, 0);
  for (std::size_t comp = 0; comp < tuples_.size(); ++comp) {
    std::array<int, max_degree> perm{0, 1, 2};
    do {
      bool canonical = true;
      for (int k = degree; k < max_degree; ++k) canonical = canonical && perm[static_cast<std::size_t>(k)] == k;
      if (!canonical) continue;
      // sign of perm restricted to the first `degree` slots
      int inversions = 0;
      for (int i = 0; i < degree; ++i)
        for (int j = i + 1; j < degree; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
      std::size_t cell = 0;
      for (int i = 0; i < degree; ++i) {
        cell = cell * rank + static_cast<std::size_t>(tuples_[comp][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      }
      const int sign = (inversions % 2 == 0) ? 1 : -1;
      table_[cell] = sign * static_cast<int>(comp + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

std::optional<FormIndex::Slot> FormIndex::locate(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw std::invalid_argument("FormIndex: wrong tuple length");
  std::size_t cell = 0;
  for (int a : indices) {
    if (a < 0 || static_cast<std::size_t>(a) >= rank_) throw std::out_of_range("FormIndex: index out of range");
    cell = cell * rank_ + static_cast<std::size_t>(a);
  }
  const int v = table_[cell];
  if (v == 0) return std::nullopt;
  return Slot{static_cast<std::size_t>(std::abs(v) - 1), v > 0 ? 1 : -1};
}

// ---------------------------------------------------------------------------
// AlgebroidChart

struct AlgebroidChart::Impl {
  std::vector<std::string> vars;
  std::size_t rank = 0;
  std::vector<Expr> anchor;
  std::vector<Expr> structure;
  struct Entry {
    std::size_t slot;
    BoundExpr f;
  };
  std::vector<Entry> anchor_nz;
  std::vector<Entry> structure_nz;
};

AlgebroidChart::AlgebroidChart(std::vector<std::string> base_vars, std::size_t rank, std::vector<Expr> anchor,
                               std::vector<Expr> structure) {
  const std::size_t m = base_vars.size();
  if (anchor.size() != rank * m) throw std::invalid_argument("AlgebroidChart: anchor must have rank * m entries");
  if (structure.size() != rank * rank * rank) {
    throw std::invalid_argument("AlgebroidChart: structure must have rank^3 entries");
  }
  auto impl = std::make_shared<Impl>();
  impl->vars = std::move(base_vars);
  impl->rank = rank;
  impl->anchor = std::move(anchor);
  impl->structure = std::move(structure);
  for (std::size_t s = 0; s < impl->anchor.size(); ++s) {
    if (!impl->anchor[s].is_literal(0.0)) impl->anchor_nz.push_back({s, BoundExpr(impl->anchor[s], impl->vars)});
  }
  for (std::size_t s = 0; s < impl->structure.size(); ++s) {
    if (!impl->structure[s].is_literal(0.0)) {
      impl->structure_nz.push_back({s, BoundExpr(impl->structure[s], impl->vars)});
    }
  }
  impl_ = std::move(impl);
}

std::size_t AlgebroidChart::base_dim() const { return impl_->vars.size(); }
std::size_t AlgebroidChart::rank() const { return impl_->rank; }
const std::vector<std::string>& AlgebroidChart::base_vars() const { return impl_->vars; }
const Expr& AlgebroidChart::anchor(std::size_t a, std::size_t i) const {
  return impl_->anchor.at(a * base_dim() + i);
}
const Expr& AlgebroidChart::structure(std::size_t a, std::size_t b, std::size_t c) const {
  return impl_->structure.at(structure_index(rank(), a, b, c));
}

ChartValues AlgebroidChart::evaluate(std::span<const double> point) const {
  ChartValues v;
  v.base_dim = base_dim();
  v.rank = rank();
  v.anchor.assign(impl_->anchor.size(), 0.0);
  v.structure.assign(impl_->structure.size(), 0.0);
  for (const auto& e : impl_->anchor_nz) v.anchor[e.slot] = e.f(point);
  for (const auto& e : impl_->structure_nz) v.structure[e.slot] = e.f(point);
  return v;
}

// ---------------------------------------------------------------------------
// FormField

namespace {

std::size_t binomial(std::size_t n, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > n) return 0;
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - static_cast<std::size_t>(i)) / static_cast<std::size_t>(i + 1);
  return r;
}

}  // namespace

FormField::FormField(std::size_t base_dim, std::size_t rank, int degree, Evaluator values, JetEvaluator jet)
    : base_dim_(base_dim),
      rank_(rank),
      degree_(degree),
      size_(binomial(rank, degree)),
      values_(std::move(values)),
      jet_(std::move(jet)) {
  if (degree < 0 || degree > FormIndex::max_degree) throw std::invalid_argument("FormField: degree must be in [0, 3]");
}

FormJet FormField::jet(std::span<const double> point) const {
  if (jet_) return jet_(point);
  FormJet out;
  out.value = values_(point);
  out.gradient.assign(size_ * base_dim_, 0.0);
  Point shifted(point.begin(), point.end());
  const double h = defaults::fd_step;
  // fourth-order central stencil
  for (std::size_t j = 0; j < base_dim_; ++j) {
    const double x = shifted[j];
    shifted[j] = x + h;
    const auto p1 = values_(shifted);
    shifted[j] = x + 2.0 * h;
    const auto p2 = values_(shifted);
    shifted[j] = x - h;
    const auto m1 = values_(shifted);
    shifted[j] = x - 2.0 * h;
    const auto m2 = values_(shifted);
    shifted[j] = x;
    for (std::size_t c = 0; c < size_; ++c)
      out.gradient[c * base_dim_ + j] = (8.0 * (p1[c] - m1[c]) - (p2[c] - m2[c])) / (12.0 * h);
  }
  return out;
}

FormField operator*(double s, const FormField& f) {
  FormField::JetEvaluator jet;
  if (f.jet_) {
    jet = [s, g = f.jet_](std::span<const double> p) {
      FormJet j = g(p);
      for (auto& v : j.value) v *= s;
      for (auto& v : j.gradient) v *= s;
      return j;
    };
  }
  return FormField(f.base_dim_, f.rank_, f.degree_,
                   [s, g = f.values_](std::span<const double> p) {
                     auto v = g(p);
                     for (auto& x : v) x *= s;
                     return v;
                   },
                   std::move(jet));
}

namespace {

FormField combine(const FormField& a, const FormField& b, double sign, const FormField::Evaluator& va,
                  const FormField::Evaluator& vb, const FormField::JetEvaluator& ja,
                  const FormField::JetEvaluator& jb) {
  if (a.base_dim() != b.base_dim() || a.rank() != b.rank() || a.degree() != b.degree()) {
    throw std::invalid_argument("FormField: cannot combine sections of different shapes");
  }
  FormField::JetEvaluator jet;
  if (ja && jb) {
    jet = [ja, jb, sign](std::span<const double> p) {
      FormJet x = ja(p);
      const FormJet y = jb(p);
      for (std::size_t i = 0; i < x.value.size(); ++i) x.value[i] += sign * y.value[i];
      for (std::size_t i = 0; i < x.gradient.size(); ++i) x.gradient[i] += sign * y.gradient[i];
      return x;
    };
  }
  return FormField(a.base_dim(), a.rank(), a.degree(),
                   [va, vb, sign](std::span<const double> p) {
                     auto x = va(p);
                     const auto y = vb(p);
                     for (std::size_t i = 0; i < x.size(); ++i) x[i] += sign * y[i];
                     return x;
                   },
                   std::move(jet));
}

}  // namespace

FormField operator+(const FormField& a, const FormField& b) {
  return combine(a, b, 1.0, a.values_, b.values_, a.jet_, b.jet_);
}

FormField operator-(const FormField& a, const FormField& b) {
  return combine(a, b, -1.0, a.values_, b.values_, a.jet_, b.jet_);
}

// ---------------------------------------------------------------------------
// KSection

KSection::KSection(AlgebroidChart chart, int degree)
    : chart_(std::move(chart)), degree_(degree), coeffs_(binomial(chart_.rank(), degree), Expr(0.0)) {
  if (degree < 0 || degree > FormIndex::max_degree) throw std::invalid_argument("KSection: degree must be in [0, 3]");
}

KSection KSection::function(AlgebroidChart chart, Expr f) {
  KSection s(std::move(chart), 0);
  s.coeffs_[0] = std::move(f);
  return s;
}

KSection KSection::basis(AlgebroidChart chart, std::size_t a) {
  KSection s(std::move(chart), 1);
  s.set({static_cast<int>(a)}, Expr(1.0));
  return s;
}

KSection& KSection::set(std::span<const int> indices, const Expr& coefficient) {
  const FormIndex index(chart_.rank(), degree_);
  const auto slot = index.locate(indices);
  if (!slot) throw std::invalid_argument("KSection: repeated index in a basis k-vector");
  coeffs_[slot->component] = slot->sign > 0 ? coefficient : -coefficient;
  return *this;
}

FormField KSection::field() const {
  struct Compiled {
    std::vector<BoundExpr> coeffs;
  };
  auto compiled = std::make_shared<Compiled>();
  for (const auto& c : coeffs_) compiled->coeffs.emplace_back(c, chart_.base_vars());
  const std::size_t m = chart_.base_dim();
  auto values = [compiled](std::span<const double> p) {
    std::vector<double> out;
    out.reserve(compiled->coeffs.size());
    for (const auto& c : compiled->coeffs) out.push_back(c.is_zero() ? 0.0 : c(p));
    return out;
  };
  auto jet = [compiled, m](std::span<const double> p) {
    FormJet j;
    j.value.resize(compiled->coeffs.size());
    j.gradient.assign(compiled->coeffs.size() * m, 0.0);
    for (std::size_t c = 0; c < compiled->coeffs.size(); ++c) {
      const auto& f = compiled->coeffs[c];
      if (f.is_zero()) {
        j.value[c] = 0.0;
        continue;
      }
      j.value[c] = f(p, std::span<double>(j.gradient.data() + c * m, m));
    }
    return j;
  };
  return FormField(m, chart_.rank(), degree_, std::move(values), std::move(jet));
}

// ---------------------------------------------------------------------------
// Differential

FormField differential(const AlgebroidChart& chart, const FormField& section) {
  const int k = section.degree();
  if (k > 2) throw std::invalid_argument("differential: degree must be <= 2");
  if (section.rank() != chart.rank() || section.base_dim() != chart.base_dim()) {
    throw std::invalid_argument("differential: section does not live on this chart");
  }
  auto in_index = std::make_shared<const FormIndex>(chart.rank(), k);
  auto out_index = std::make_shared<const FormIndex>(chart.rank(), k + 1);
  const std::size_t m = chart.base_dim();
  const std::size_t r = chart.rank();

  auto values = [chart, section, in_index, out_index, k, m, r](std::span<const double> p) {
    const FormJet mu = section.jet(p);
    const ChartValues cv = chart.evaluate(p);
    std::vector<double> out(out_index->size(), 0.0);
    std::array<int, FormIndex::max_degree> rest{};
    for (std::size_t comp = 0; comp < out_index->size(); ++comp) {
      const auto& t = out_index->tuple(comp);
      double acc = 0.0;
      // sum_i (-1)^i rho(X_i) mu(..., X_i omitted, ...)
      for (int i = 0; i <= k; ++i) {
        int n = 0;
        for (int q = 0; q <= k; ++q)
          if (q != i) rest[static_cast<std::size_t>(n++)] = t[static_cast<std::size_t>(q)];
        const auto slot = in_index->locate(std::span<const int>(rest.data(), static_cast<std::size_t>(k)));
        if (!slot) continue;
        const std::size_t a = static_cast<std::size_t>(t[static_cast<std::size_t>(i)]);
        double deriv = 0.0;
        for (std::size_t j = 0; j < m; ++j) deriv += cv.rho(a, j) * mu.gradient[slot->component * m + j];
        acc += ((i % 2 == 0) ? 1.0 : -1.0) * slot->sign * deriv;
      }
      // sum_{i<j} (-1)^{i+j} mu([X_i, X_j], ..., X_i, X_j omitted, ...)
      for (int i = 0; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
          const std::size_t a = static_cast<std::size_t>(t[static_cast<std::size_t>(i)]);
          const std::size_t b = static_cast<std::size_t>(t[static_cast<std::size_t>(j)]);
          int n = 1;
          for (int q = 0; q <= k; ++q)
            if (q != i && q != j) rest[static_cast<std::size_t>(n++)] = t[static_cast<std::size_t>(q)];
          double term = 0.0;
          for (std::size_t c = 0; c < r; ++c) {
            const double cab = cv.c(a, b, c);
            if (cab == 0.0) continue;
            if (k == 0) continue;  // mu is a function: bracket terms are absent
            rest[0] = static_cast<int>(c);
            const auto slot = in_index->locate(std::span<const int>(rest.data(), static_cast<std::size_t>(k)));
            if (!slot) continue;
            term += cab * slot->sign * mu.value[slot->component];
          }
          acc += (((i + j) % 2 == 0) ? 1.0 : -1.0) * term;
        }
      }
      out[comp] = acc;
    }
    return out;
  };
  return FormField(m, r, k + 1, std::move(values));
}

FormField differential(const KSection& section) { return differential(section.chart(), section.field()); }

std::vector<double> contract(const FormIndex& index, std::span<const double> coefficients,
                             std::span<const double> vector) {
  const int k = index.degree();
  if (k == 0) throw std::invalid_argument("contract: cannot contract a function");
  const FormIndex lower(index.rank(), k - 1);
  std::vector<double> out(lower.size(), 0.0);
  std::array<int, FormIndex::max_degree> full{};
  for (std::size_t comp = 0; comp < lower.size(); ++comp) {
    const auto& t = lower.tuple(comp);
    double acc = 0.0;
    for (std::size_t a = 0; a < index.rank(); ++a) {
      if (vector[a] == 0.0) continue;
      full[0] = static_cast<int>(a);
      for (int q = 0; q < k - 1; ++q) full[static_cast<std::size_t>(q + 1)] = t[static_cast<std::size_t>(q)];
      const auto slot = index.locate(std::span<const int>(full.data(), static_cast<std::size_t>(k)));
      if (!slot) continue;
      acc += vector[a] * slot->sign * coefficients[slot->component];
    }
    out[comp] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::valid() const {
  return antisymmetry <= defaults::chart_tol && anchor <= defaults::chart_tol && jacobi <= defaults::chart_tol;
}

double max_abs(const FormField& form, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    for (double v : form(p)) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

ValidationReport validate_chart(const AlgebroidChart& chart, const SamplePlan& plan) {
  const auto points = sample_points(plan.resized(chart.base_dim()));
  const std::size_t r = chart.rank();
  ValidationReport report;
  report.points = points.size();

  std::vector<FormField> anchor_checks;
  for (const auto& v : chart.base_vars()) {
    anchor_checks.push_back(differential(chart, differential(KSection::function(chart, Expr::variable(v)))));
  }
  std::vector<FormField> jacobi_checks;
  for (std::size_t a = 0; a < r; ++a) {
    jacobi_checks.push_back(differential(chart, differential(KSection::basis(chart, a))));
  }

  for (const auto& p : points) {
    const ChartValues cv = chart.evaluate(p);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        for (std::size_t c = 0; c < r; ++c)
          report.antisymmetry = std::max(report.antisymmetry, std::abs(cv.c(a, b, c) + cv.c(b, a, c)));
    for (const auto& f : anchor_checks)
      for (double v : f(p)) report.anchor = std::max(report.anchor, std::abs(v));
    for (const auto& f : jacobi_checks) {
      for (double v : f(p)) {
        if (std::abs(v) > report.jacobi) {
          report.jacobi = std::abs(v);
          report.worst_jacobi_point = p;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Morphisms and pullback

AlgebroidMorphism AlgebroidMorphism::identity(const AlgebroidChart& chart) {
  AlgebroidMorphism f;
  f.source_base_dim = f.target_base_dim = chart.base_dim();
  f.source_rank = f.target_rank = chart.rank();
  f.base_map = [](std::span<const double> p) { return Point(p.begin(), p.end()); };
  const std::size_t r = chart.rank();
  f.fiber_map = [r](std::span<const double>) {
    std::vector<double> id(r * r, 0.0);
    for (std::size_t a = 0; a < r; ++a) id[a * r + a] = 1.0;
    return id;
  };
  return f;
}

AlgebroidMorphism AlgebroidMorphism::from_expressions(const AlgebroidChart& source, const AlgebroidChart& target,
                                                      const std::vector<Expr>& base_map,
                                                      const std::vector<std::vector<Expr>>& fiber_map) {
  if (base_map.size() != target.base_dim()) {
    throw std::invalid_argument("pullback: base map must give every target coordinate");
  }
  if (fiber_map.size() != target.rank()) throw std::invalid_argument("pullback: fiber map needs target-rank rows");
  for (const auto& row : fiber_map) {
    if (row.size() != source.rank()) throw std::invalid_argument("pullback: fiber map needs source-rank columns");
  }
  auto base = std::make_shared<std::vector<BoundExpr>>();
  for (const auto& e : base_map) base->emplace_back(e, source.base_vars());
  auto fiber = std::make_shared<std::vector<BoundExpr>>();
  for (const auto& row : fiber_map)
    for (const auto& e : row) fiber->emplace_back(e, source.base_vars());

  AlgebroidMorphism f;
  f.source_base_dim = source.base_dim();
  f.source_rank = source.rank();
  f.target_base_dim = target.base_dim();
  f.target_rank = target.rank();
  f.base_map = [base](std::span<const double> p) {
    Point out;
    out.reserve(base->size());
    for (const auto& e : *base) out.push_back(e(p));
    return out;
  };
  f.fiber_map = [fiber](std::span<const double> p) {
    std::vector<double> out;
    out.reserve(fiber->size());
    for (const auto& e : *fiber) out.push_back(e.is_zero() ? 0.0 : e(p));
    return out;
  };
  return f;
}

namespace {

double minor_det(const std::vector<double>& fm, std::size_t cols, const std::array<int, 3>& rows_idx,
                 const std::array<int, 3>& cols_idx, int k) {
  auto at = [&](int i, int j) {
    return fm[static_cast<std::size_t>(rows_idx[static_cast<std::size_t>(i)]) * cols +
              static_cast<std::size_t>(cols_idx[static_cast<std::size_t>(j)])];
  };
  switch (k) {
    case 0: return 1.0;
    case 1: return at(0, 0);
    case 2: return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    case 3:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    default: return 0.0;
  }
}

}  // namespace

FormField pullback(const AlgebroidMorphism& morphism, const FormField& section) {
  if (section.rank() != morphism.target_rank || section.base_dim() != morphism.target_base_dim) {
    throw std::invalid_argument("pullback: section does not live on the target chart");
  }
  const int k = section.degree();
  auto src_index = std::make_shared<const FormIndex>(morphism.source_rank, k);
  auto dst_index = std::make_shared<const FormIndex>(morphism.target_rank, k);
  auto values = [morphism, section, src_index, dst_index, k](std::span<const double> p) {
    const Point q = morphism.base_map(p);
    const auto phi = section(q);
    const auto fm = morphism.fiber_map(p);
    std::vector<double> out(src_index->size(), 0.0);
    for (std::size_t a = 0; a < src_index->size(); ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < dst_index->size(); ++b) {
        if (phi[b] == 0.0) continue;
        acc += phi[b] * minor_det(fm, morphism.source_rank, dst_index->tuple(b), src_index->tuple(a), k);
      }
      out[a] = acc;
    }
    return out;
  };
  return FormField(morphism.source_base_dim, morphism.source_rank, k, std::move(values));
}

FormField pullback(const AlgebroidChart& source, const AlgebroidChart& target, const std::vector<Expr>& base_map,
                   const std::vector<std::vector<Expr>>& fiber_map, const KSection& section) {
  if (section.degree() > 2) throw std::invalid_argument("pullback: degree must be <= 2");
  return pullback(AlgebroidMorphism::from_expressions(source, target, base_map, fiber_map), section.field());
}

// ---------------------------------------------------------------------------
// Prolongation over the dual bundle

DualProlongation prolong_over_dual(const AlgebroidChart& algebroid, const std::vector<std::string>& fiber_vars) {
  const std::size_t r = algebroid.rank();
  const std::size_t m = algebroid.base_dim();
  if (fiber_vars.size() != r) throw std::invalid_argument("prolong_over_dual: need one fiber variable per rank");
  std::vector<std::string> vars = algebroid.base_vars();
  for (const auto& v : fiber_vars) {
    if (std::find(vars.begin(), vars.end(), v) != vars.end()) {
      throw std::invalid_argument("prolong_over_dual: fiber variable '" + v + "' clashes with a base variable");
    }
    vars.push_back(v);
  }
  const std::size_t dim = m + r;
  const std::size_t rank = 2 * r;
  std::vector<Expr> anchor(rank * dim, Expr(0.0));
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t i = 0; i < m; ++i) anchor[a * dim + i] = algebroid.anchor(a, i);
    anchor[(r + a) * dim + m + a] = Expr(1.0);
  }
  std::vector<Expr> structure(rank * rank * rank, Expr(0.0));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        structure[AlgebroidChart::structure_index(rank, a, b, c)] = algebroid.structure(a, b, c);

  AlgebroidChart chart(std::move(vars), rank, std::move(anchor), std::move(structure));

  KSection liouville(chart, 1);
  for (std::size_t a = 0; a < r; ++a) liouville.set({static_cast<int>(a)}, Expr::variable(fiber_vars[a]));

  KSection symplectic(chart, 2);
  for (std::size_t a = 0; a < r; ++a) symplectic.set({static_cast<int>(a), static_cast<int>(r + a)}, Expr(1.0));
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      // 1/2 C^c_ab y_c e~^a ^ e~^b summed over all (a, b) gives C^c_ab y_c on a < b.
      std::optional<Expr> sum;
      for (std::size_t c = 0; c < r; ++c) {
        const Expr& cab = algebroid.structure(a, b, c);
        if (cab.is_literal(0.0)) continue;
        Expr term = cab * Expr::variable(fiber_vars[c]);
        sum = sum ? *sum + term : term;
      }
      if (sum) symplectic.set({static_cast<int>(a), static_cast<int>(b)}, *sum);
    }
  }
  return {chart, liouville, symplectic};
}

}  // namespace affhj
