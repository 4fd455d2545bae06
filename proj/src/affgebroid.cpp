#include "affhj/affgebroid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace affhj {

struct AffgebroidChart::Impl {
  std::vector<std::string> base_vars;
  std::vector<std::string> fiber_vars;
  std::vector<std::string> phase_vars;
  std::vector<Expr> rho0;
  std::vector<std::vector<Expr>> rhoV;
  std::vector<std::vector<Expr>> c0;
  std::vector<Expr> cv;
  std::unique_ptr<AlgebroidChart> bidual;
  std::unique_ptr<AlgebroidChart> vertical;
  std::unique_ptr<AlgebroidChart> prolongation;
  std::unique_ptr<DualProlongation> bidual_dual;
  std::unique_ptr<DualProlongation> vertical_dual;
};

namespace {

std::string fresh_name(const std::vector<std::string>& taken, std::string name) {
  while (std::find(taken.begin(), taken.end(), name) != taken.end()) name = "_" + name;
  return name;
}

AlgebroidChart build_bidual(const AffgebroidChart::Impl& a) {
  const std::size_t m = a.base_vars.size();
  const std::size_t n = a.fiber_vars.size();
  const std::size_t r = n + 1;
  std::vector<Expr> anchor(r * m, Expr(0.0));
  for (std::size_t i = 0; i < m; ++i) anchor[i] = a.rho0[i];
  for (std::size_t al = 0; al < n; ++al)
    for (std::size_t i = 0; i < m; ++i) anchor[(al + 1) * m + i] = a.rhoV[al][i];
  std::vector<Expr> structure(r * r * r, Expr(0.0));
  for (std::size_t al = 0; al < n; ++al) {
    for (std::size_t g = 0; g < n; ++g) {
      structure[AlgebroidChart::structure_index(r, 0, al + 1, g + 1)] = a.c0[al][g];
      structure[AlgebroidChart::structure_index(r, al + 1, 0, g + 1)] = -a.c0[al][g];
    }
  }
  for (std::size_t al = 0; al < n; ++al)
    for (std::size_t be = 0; be < n; ++be)
      for (std::size_t g = 0; g < n; ++g)
        structure[AlgebroidChart::structure_index(r, al + 1, be + 1, g + 1)] =
            a.cv[AffgebroidChart::cv_index(n, al, be, g)];
  return AlgebroidChart(a.base_vars, r, std::move(anchor), std::move(structure));
}

AlgebroidChart build_vertical(const AffgebroidChart::Impl& a) {
  const std::size_t m = a.base_vars.size();
  const std::size_t n = a.fiber_vars.size();
  std::vector<Expr> anchor(n * m, Expr(0.0));
  for (std::size_t al = 0; al < n; ++al)
    for (std::size_t i = 0; i < m; ++i) anchor[al * m + i] = a.rhoV[al][i];
  return AlgebroidChart(a.base_vars, n, std::move(anchor), a.cv);
}

AlgebroidChart build_prolongation(const AffgebroidChart::Impl& a) {
  const std::size_t m = a.base_vars.size();
  const std::size_t n = a.fiber_vars.size();
  const std::size_t dim = m + n;
  const std::size_t r = 2 * n + 1;
  std::vector<Expr> anchor(r * dim, Expr(0.0));
  for (std::size_t i = 0; i < m; ++i) anchor[i] = a.rho0[i];
  for (std::size_t al = 0; al < n; ++al) {
    for (std::size_t i = 0; i < m; ++i) anchor[(al + 1) * dim + i] = a.rhoV[al][i];
    anchor[(n + 1 + al) * dim + m + al] = Expr(1.0);
  }
  std::vector<Expr> structure(r * r * r, Expr(0.0));
  for (std::size_t be = 0; be < n; ++be) {
    for (std::size_t g = 0; g < n; ++g) {
      structure[AlgebroidChart::structure_index(r, 0, be + 1, g + 1)] = a.c0[be][g];
      structure[AlgebroidChart::structure_index(r, be + 1, 0, g + 1)] = -a.c0[be][g];
    }
  }
  for (std::size_t al = 0; al < n; ++al)
    for (std::size_t be = 0; be < n; ++be)
      for (std::size_t g = 0; g < n; ++g)
        structure[AlgebroidChart::structure_index(r, al + 1, be + 1, g + 1)] =
            a.cv[AffgebroidChart::cv_index(n, al, be, g)];
  return AlgebroidChart(a.phase_vars, r, std::move(anchor), std::move(structure));
}

}  // namespace

AffgebroidChart::AffgebroidChart(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars,
                                 std::vector<Expr> rho0, std::vector<std::vector<Expr>> rhoV,
                                 std::vector<std::vector<Expr>> c0, std::vector<Expr> cv) {
  const std::size_t m = base_vars.size();
  const std::size_t n = fiber_vars.size();
  if (m == 0) throw std::invalid_argument("AffgebroidChart: base dimension must be positive");
  if (rho0.size() != m) throw std::invalid_argument("AffgebroidChart: rho0 needs m entries");
  if (rhoV.size() != n) throw std::invalid_argument("AffgebroidChart: rhoV needs n rows");
  for (const auto& row : rhoV)
    if (row.size() != m) throw std::invalid_argument("AffgebroidChart: rhoV rows need m entries");
  if (c0.size() != n) throw std::invalid_argument("AffgebroidChart: C0 needs n rows");
  for (const auto& row : c0)
    if (row.size() != n) throw std::invalid_argument("AffgebroidChart: C0 rows need n entries");
  if (cv.size() != n * n * n) throw std::invalid_argument("AffgebroidChart: CV needs n^3 entries");

  auto impl = std::make_shared<Impl>();
  impl->base_vars = std::move(base_vars);
  impl->fiber_vars = std::move(fiber_vars);
  impl->phase_vars = impl->base_vars;
  for (const auto& v : impl->fiber_vars) {
    if (std::find(impl->phase_vars.begin(), impl->phase_vars.end(), v) != impl->phase_vars.end()) {
      throw std::invalid_argument("AffgebroidChart: duplicate variable name '" + v + "'");
    }
    impl->phase_vars.push_back(v);
  }
  impl->rho0 = std::move(rho0);
  impl->rhoV = std::move(rhoV);
  impl->c0 = std::move(c0);
  impl->cv = std::move(cv);
  for (const auto& e : impl->rho0)
    for (const auto& v : e.free_variables())
      if (std::find(impl->base_vars.begin(), impl->base_vars.end(), v) == impl->base_vars.end())
        throw std::invalid_argument("AffgebroidChart: structure data may only depend on base variables, got '" + v + "'");
  impl->bidual = std::make_unique<AlgebroidChart>(build_bidual(*impl));
  impl->vertical = std::make_unique<AlgebroidChart>(build_vertical(*impl));
  impl->prolongation = std::make_unique<AlgebroidChart>(build_prolongation(*impl));

  std::vector<std::string> dual_fibers{fresh_name(impl->phase_vars, "y0")};
  for (const auto& v : impl->fiber_vars) dual_fibers.push_back(v);
  impl->bidual_dual = std::make_unique<DualProlongation>(prolong_over_dual(*impl->bidual, dual_fibers));
  impl->vertical_dual = std::make_unique<DualProlongation>(prolong_over_dual(*impl->vertical, impl->fiber_vars));
  impl_ = std::move(impl);
}

std::size_t AffgebroidChart::m() const { return impl_->base_vars.size(); }
std::size_t AffgebroidChart::n() const { return impl_->fiber_vars.size(); }
const std::vector<std::string>& AffgebroidChart::base_vars() const { return impl_->base_vars; }
const std::vector<std::string>& AffgebroidChart::fiber_vars() const { return impl_->fiber_vars; }
const std::vector<std::string>& AffgebroidChart::phase_vars() const { return impl_->phase_vars; }
const Expr& AffgebroidChart::rho0(std::size_t i) const { return impl_->rho0.at(i); }
const Expr& AffgebroidChart::rhoV(std::size_t a, std::size_t i) const { return impl_->rhoV.at(a).at(i); }
const Expr& AffgebroidChart::c0(std::size_t a, std::size_t g) const { return impl_->c0.at(a).at(g); }
const Expr& AffgebroidChart::cv(std::size_t a, std::size_t b, std::size_t g) const {
  return impl_->cv.at(cv_index(n(), a, b, g));
}
const AlgebroidChart& AffgebroidChart::bidual() const { return *impl_->bidual; }
const AlgebroidChart& AffgebroidChart::vertical() const { return *impl_->vertical; }
const AlgebroidChart& AffgebroidChart::prolongation() const { return *impl_->prolongation; }
const DualProlongation& AffgebroidChart::bidual_dual_prolongation() const { return *impl_->bidual_dual; }
const DualProlongation& AffgebroidChart::vertical_dual_prolongation() const { return *impl_->vertical_dual; }

AlgebroidChart bidual_chart(const AffgebroidChart& a) { return a.bidual(); }
AlgebroidChart vertical_chart(const AffgebroidChart& a) { return a.vertical(); }
AlgebroidChart prolongation_chart(const AffgebroidChart& a) { return a.prolongation(); }

// ---------------------------------------------------------------------------
// Sections

HamiltonianSection::HamiltonianSection(AffgebroidChart chart, Expr hamiltonian)
    : chart_(std::move(chart)), h_(std::move(hamiltonian)), bound_(h_, chart_.phase_vars()) {}

double HamiltonianSection::operator()(std::span<const double> phase_point) const { return bound_(phase_point); }

double HamiltonianSection::operator()(std::span<const double> phase_point, std::span<double> gradient) const {
  return bound_(phase_point, gradient);
}

namespace {

std::shared_ptr<const std::vector<BoundExpr>> bind_all(const std::vector<Expr>& exprs,
                                                       const std::vector<std::string>& vars) {
  auto out = std::make_shared<std::vector<BoundExpr>>();
  for (const auto& e : exprs) out->emplace_back(e, vars);
  return out;
}

FormJet jet_of(const std::vector<BoundExpr>& fs, std::size_t m, std::span<const double> x) {
  FormJet j;
  j.value.resize(fs.size());
  j.gradient.assign(fs.size() * m, 0.0);
  for (std::size_t c = 0; c < fs.size(); ++c) {
    j.value[c] = fs[c](x, std::span<double>(j.gradient.data() + c * m, m));
  }
  return j;
}

}  // namespace

CoSection::CoSection(AffgebroidChart chart, Expr alpha0, std::vector<Expr> alphaV)
    : chart_(std::move(chart)), alpha0_(std::move(alpha0)), alphaV_(std::move(alphaV)) {
  if (alphaV_.size() != chart_.n()) throw std::invalid_argument("CoSection: alphaV needs n entries");
  std::vector<Expr> all{alpha0_};
  all.insert(all.end(), alphaV_.begin(), alphaV_.end());
  bound_ = bind_all(all, chart_.base_vars());
}

FormJet CoSection::jet(std::span<const double> x) const { return jet_of(*bound_, chart_.m(), x); }

FormField CoSection::field() const {
  auto bound = bound_;
  const std::size_t m = chart_.m();
  return FormField(
      m, chart_.n() + 1, 1,
      [bound, m](std::span<const double> x) { return jet_of(*bound, m, x).value; },
      [bound, m](std::span<const double> x) { return jet_of(*bound, m, x); });
}

VStarSection::VStarSection(AffgebroidChart chart, std::vector<Expr> gammaV)
    : chart_(std::move(chart)), gammaV_(std::move(gammaV)) {
  if (gammaV_.size() != chart_.n()) throw std::invalid_argument("VStarSection: gammaV needs n entries");
  bound_ = bind_all(gammaV_, chart_.base_vars());
}

FormJet VStarSection::jet(std::span<const double> x) const { return jet_of(*bound_, chart_.m(), x); }

// ---------------------------------------------------------------------------
// Cosymplectic pair

KSection eta(const AffgebroidChart& a) { return KSection::basis(a.prolongation(), 0); }

FormField omega_h(const HamiltonianSection& h) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  const std::size_t r = 2 * n + 1;
  auto index = std::make_shared<const FormIndex>(r, 2);
  const AlgebroidChart bidual = a.bidual();
  auto values = [h, bidual, index, m, n](std::span<const double> p) {
    std::vector<double> grad(m + n);
    h(p, grad);
    const ChartValues cv = bidual.evaluate(p.first(m));
    std::vector<double> out(index->size(), 0.0);
    auto add = [&](int i, int j, double v) {
      const int ij[2] = {i, j};
      const auto slot = index->locate(ij);
      if (slot) out[slot->component] += slot->sign * v;
    };
    const auto y = p.subspan(m, n);
    for (std::size_t g = 0; g < n; ++g) {
      const int tg = static_cast<int>(g + 1);
      const int bg = static_cast<int>(n + 1 + g);
      // e~^g ^ e-^g
      add(tg, bg, 1.0);
      // 1/2 C^a_{g b} y_a e~^g ^ e~^b (full double sum, so each pair is visited twice)
      for (std::size_t b = 0; b < n; ++b) {
        if (b == g) continue;
        double s = 0.0;
        for (std::size_t al = 0; al < n; ++al) s += cv.c(g + 1, b + 1, al + 1) * y[al];
        add(tg, static_cast<int>(b + 1), 0.5 * s);
      }
      // (rho^i_g dH/dx^i - C^a_{0g} y_a) e~^g ^ e~^0
      double coeff = 0.0;
      for (std::size_t i = 0; i < m; ++i) coeff += cv.rho(g + 1, i) * grad[i];
      for (std::size_t al = 0; al < n; ++al) coeff -= cv.c(0, g + 1, al + 1) * y[al];
      add(tg, 0, coeff);
      // dH/dy_g e-^g ^ e~^0
      add(bg, 0, grad[m + g]);
    }
    return out;
  };
  return FormField(m + n, r, 2, std::move(values));
}

AlgebroidMorphism hamiltonian_prolongation_map(const HamiltonianSection& h) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  const AlgebroidChart bidual = a.bidual();
  AlgebroidMorphism f;
  f.source_base_dim = m + n;
  f.source_rank = 2 * n + 1;
  f.target_base_dim = m + n + 1;
  f.target_rank = 2 * n + 2;
  f.base_map = [h, m, n](std::span<const double> p) {
    Point q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m));
    q.push_back(-h(p));
    q.insert(q.end(), p.begin() + static_cast<std::ptrdiff_t>(m), p.begin() + static_cast<std::ptrdiff_t>(m + n));
    return q;
  };
  f.fiber_map = [h, bidual, m, n](std::span<const double> p) {
    const std::size_t rows = 2 * n + 2;
    const std::size_t cols = 2 * n + 1;
    std::vector<double> fm(rows * cols, 0.0);
    std::vector<double> grad(m + n);
    h(p, grad);
    const ChartValues cv = bidual.evaluate(p.first(m));
    const std::size_t bar0 = n + 1;  // row of e-_0 in T^A~ A^+
    for (std::size_t A = 0; A <= n; ++A) {
      fm[A * cols + A] = 1.0;
      double d = 0.0;
      for (std::size_t i = 0; i < m; ++i) d += cv.rho(A, i) * grad[i];
      fm[bar0 * cols + A] = -d;
    }
    for (std::size_t al = 0; al < n; ++al) {
      fm[(bar0 + 1 + al) * cols + (n + 1 + al)] = 1.0;
      fm[bar0 * cols + (n + 1 + al)] = -grad[m + al];
    }
    return fm;
  };
  return f;
}

FormField lambda_h(const HamiltonianSection& h) {
  return pullback(hamiltonian_prolongation_map(h), h.chart().bidual_dual_prolongation().liouville.field());
}

FormField omega_h_by_pullback(const HamiltonianSection& h) {
  return pullback(hamiltonian_prolongation_map(h), h.chart().bidual_dual_prolongation().symplectic.field());
}

AlgebroidMorphism section_prolongation_map(const VStarSection& gamma) {
  const AffgebroidChart& a = gamma.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  const AlgebroidChart bidual = a.bidual();
  AlgebroidMorphism f;
  f.source_base_dim = m;
  f.source_rank = n + 1;
  f.target_base_dim = m + n;
  f.target_rank = 2 * n + 1;
  f.base_map = [gamma](std::span<const double> x) {
    Point q(x.begin(), x.end());
    const auto j = gamma.jet(x);
    q.insert(q.end(), j.value.begin(), j.value.end());
    return q;
  };
  f.fiber_map = [gamma, bidual, m, n](std::span<const double> x) {
    const std::size_t cols = n + 1;
    std::vector<double> fm((2 * n + 1) * cols, 0.0);
    const auto j = gamma.jet(x);
    const ChartValues cv = bidual.evaluate(x);
    for (std::size_t A = 0; A <= n; ++A) {
      fm[A * cols + A] = 1.0;
      for (std::size_t nu = 0; nu < n; ++nu) {
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) d += cv.rho(A, i) * j.gradient[nu * m + i];
        fm[(n + 1 + nu) * cols + A] = d;
      }
    }
    return fm;
  };
  return f;
}

AlgebroidMorphism vertical_inclusion_map(const AffgebroidChart& a) {
  const std::size_t n = a.n();
  const std::size_t dim = a.m() + n;
  AlgebroidMorphism f;
  f.source_base_dim = f.target_base_dim = dim;
  f.source_rank = 2 * n;
  f.target_rank = 2 * n + 1;
  f.base_map = [](std::span<const double> p) { return Point(p.begin(), p.end()); };
  f.fiber_map = [n](std::span<const double>) {
    const std::size_t cols = 2 * n;
    std::vector<double> fm((2 * n + 1) * cols, 0.0);
    for (std::size_t al = 0; al < n; ++al) {
      fm[(1 + al) * cols + al] = 1.0;
      fm[(n + 1 + al) * cols + (n + al)] = 1.0;
    }
    return fm;
  };
  return f;
}

FormField h_compose(const HamiltonianSection& h, const VStarSection& gamma) {
  const std::size_t m = h.chart().m();
  const std::size_t n = h.chart().n();
  auto jet = [h, gamma, m, n](std::span<const double> x) {
    const FormJet g = gamma.jet(x);
    Point p(x.begin(), x.end());
    p.insert(p.end(), g.value.begin(), g.value.end());
    std::vector<double> grad(m + n);
    const double hv = h(p, grad);
    FormJet out;
    out.value.push_back(-hv);
    out.value.insert(out.value.end(), g.value.begin(), g.value.end());
    out.gradient.assign((n + 1) * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      // d/dx^i H(x, gamma(x)) by the chain rule
      double d = grad[i];
      for (std::size_t b = 0; b < n; ++b) d += grad[m + b] * g.gradient[b * m + i];
      out.gradient[i] = -d;
    }
    std::copy(g.gradient.begin(), g.gradient.end(), out.gradient.begin() + static_cast<std::ptrdiff_t>(m));
    return out;
  };
  return FormField(
      m, n + 1, 1, [jet](std::span<const double> x) { return jet(x).value; }, jet);
}

// ---------------------------------------------------------------------------
// Reeb section

std::vector<double> reeb(const HamiltonianSection& h, std::span<const double> phase_point) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  std::vector<double> grad(m + n);
  h(phase_point, grad);
  const ChartValues cv = a.bidual().evaluate(phase_point.first(m));
  const auto y = phase_point.subspan(m, n);
  std::vector<double> out(2 * n + 1, 0.0);
  out[0] = 1.0;
  for (std::size_t al = 0; al < n; ++al) {
    out[1 + al] = grad[m + al];
    double s = 0.0;
    for (std::size_t be = 0; be < n; ++be)
      for (std::size_t g = 0; g < n; ++g) s += cv.c(al + 1, be + 1, g + 1) * y[g] * grad[m + be];
    for (std::size_t i = 0; i < m; ++i) s += cv.rho(al + 1, i) * grad[i];
    for (std::size_t g = 0; g < n; ++g) s -= cv.c(0, al + 1, g + 1) * y[g];
    out[n + 1 + al] = -s;
  }
  return out;
}

namespace {

ReebSolution solve_reeb_system(const std::vector<double>& omega, std::size_t r) {
  const FormIndex index(r, 2);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r + 1), static_cast<Eigen::Index>(r));
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      const int ab[2] = {static_cast<int>(a), static_cast<int>(b)};
      const auto slot = index.locate(ab);
      if (!slot) continue;
      // row b of i_v Omega: sum_a v^a Omega(e_a, e_b)
      A(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = slot->sign * omega[slot->component];
    }
  }
  A(static_cast<Eigen::Index>(r), 0) = 1.0;  // eta = e~^0
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r + 1));
  rhs(static_cast<Eigen::Index>(r)) = 1.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::VectorXd v = qr.solve(rhs);
  ReebSolution out;
  out.coefficients.assign(v.data(), v.data() + v.size());
  out.residual = (A * v - rhs).cwiseAbs().maxCoeff();
  out.rank = static_cast<std::size_t>(qr.rank());
  out.nondegenerate = out.rank == r && out.residual <= defaults::reeb_degenerate_tol;
  return out;
}

}  // namespace

ReebSolution reeb_solve(const HamiltonianSection& h, std::span<const double> phase_point) {
  const std::size_t r = 2 * h.chart().n() + 1;
  ReebSolution s = solve_reeb_system(omega_h(h)(phase_point), r);
  if (!s.nondegenerate) {
    throw DegenerateCosymplecticError("cosymplectic pair degenerate: rank " + std::to_string(s.rank) + " of " +
                                      std::to_string(r) + ", residual " + std::to_string(s.residual));
  }
  return s;
}

CosymplecticReport cosymplectic_check(const HamiltonianSection& h, const SamplePlan& plan) {
  const AffgebroidChart& a = h.chart();
  const std::size_t r = 2 * a.n() + 1;
  const auto points = sample_points(plan.resized(a.m() + a.n()));
  const AlgebroidChart& pro = a.prolongation();
  const FormField omega = omega_h(h);
  const FormField d_eta = differential(eta(a));
  const FormField d_omega = differential(pro, omega);
  const FormField omega_pb = omega_h_by_pullback(h);
  const FormField d_lambda = differential(pro, lambda_h(h));
  const FormIndex two(r, 2);

  CosymplecticReport rep;
  rep.points = points.size();
  rep.min_rank = r;
  for (const auto& p : points) {
    for (double v : d_eta(p)) rep.d_eta = std::max(rep.d_eta, std::abs(v));
    for (double v : d_omega(p)) rep.d_omega = std::max(rep.d_omega, std::abs(v));
    const auto w = omega(p);
    const auto wp = omega_pb(p);
    const auto dl = d_lambda(p);
    for (std::size_t c = 0; c < w.size(); ++c) {
      rep.omega_transcription = std::max(rep.omega_transcription, std::abs(w[c] - wp[c]));
      rep.omega_transcription = std::max(rep.omega_transcription, std::abs(w[c] + dl[c]));
    }
    const ReebSolution s = solve_reeb_system(w, r);
    rep.reeb_residual = std::max(rep.reeb_residual, s.residual);
    rep.min_rank = std::min(rep.min_rank, s.rank);
    rep.nondegenerate = rep.nondegenerate && s.nondegenerate;
    const auto R = reeb(h, p);
    for (std::size_t c = 0; c < r; ++c) {
      rep.reeb_agreement = std::max(rep.reeb_agreement, std::abs(R[c] - s.coefficients[c]));
    }
    for (double v : contract(two, w, R)) rep.reeb_contraction = std::max(rep.reeb_contraction, std::abs(v));
    rep.reeb_contraction = std::max(rep.reeb_contraction, std::abs(R[0] - 1.0));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pullback identities and vertical restriction

PullbackReport pullback_identities(const VStarSection& gamma, const HamiltonianSection& h, const SamplePlan& plan) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  const AlgebroidChart& bidual = a.bidual();
  const AlgebroidChart& pro = a.prolongation();
  const auto points = sample_points(plan.resized(m));
  const AlgebroidMorphism tg = section_prolongation_map(gamma);

  const FormField lam = lambda_h(h);
  const FormField omega = omega_h(h);
  const FormField hg = h_compose(h, gamma);
  const FormField pb_lambda = pullback(tg, lam);
  const FormField pb_omega = pullback(tg, omega);
  const FormField d_hg = differential(bidual, hg);

  std::vector<std::pair<FormField, FormField>> bars;
  for (std::size_t al = 0; al < n; ++al) {
    FormField lhs = pullback(tg, KSection::basis(pro, n + 1 + al).field());
    FormField rhs = differential(KSection::function(bidual, gamma.gammaV()[al]));
    bars.emplace_back(std::move(lhs), std::move(rhs));
  }

  std::vector<FormField> corpus{KSection::function(pro, h.hamiltonian()).field(), eta(a).field(), lam, omega};
  for (std::size_t c = 0; c < pro.rank(); ++c) corpus.push_back(KSection::basis(pro, c).field());
  std::vector<std::pair<FormField, FormField>> commute;
  for (const auto& phi : corpus) {
    commute.emplace_back(differential(bidual, pullback(tg, phi)), pullback(tg, differential(pro, phi)));
  }

  PullbackReport rep;
  rep.points = points.size();
  auto dev = [](const std::vector<double>& x, const std::vector<double>& y, double sign) {
    double d = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) d = std::max(d, std::abs(x[c] + sign * y[c]));
    return d;
  };
  for (const auto& x : points) {
    rep.liouville = std::max(rep.liouville, dev(pb_lambda(x), hg(x), -1.0));
    rep.symplectic = std::max(rep.symplectic, dev(pb_omega(x), d_hg(x), 1.0));
    for (const auto& [l, r] : bars) rep.bar = std::max(rep.bar, dev(l(x), r(x), -1.0));
    for (const auto& [l, r] : commute) rep.morphism = std::max(rep.morphism, dev(l(x), r(x), -1.0));
  }
  return rep;
}

RestrictionReport vertical_restriction_check(const HamiltonianSection& h, const SamplePlan& plan) {
  const AffgebroidChart& a = h.chart();
  const auto points = sample_points(plan.resized(a.m() + a.n()));
  const AlgebroidMorphism inc = vertical_inclusion_map(a);
  const DualProlongation& vdual = a.vertical_dual_prolongation();
  const FormField omega = pullback(inc, omega_h(h));
  const FormField lambda = pullback(inc, lambda_h(h));
  const FormField eta_v = pullback(inc, eta(a).field());
  const FormField omega_v = vdual.symplectic.field();
  const FormField lambda_v = vdual.liouville.field();

  RestrictionReport rep;
  rep.points = points.size();
  for (const auto& p : points) {
    const auto w = omega(p);
    const auto wv = omega_v(p);
    for (std::size_t c = 0; c < w.size(); ++c) rep.omega = std::max(rep.omega, std::abs(w[c] - wv[c]));
    const auto l = lambda(p);
    const auto lv = lambda_v(p);
    for (std::size_t c = 0; c < l.size(); ++c) rep.lambda = std::max(rep.lambda, std::abs(l[c] - lv[c]));
    for (double v : eta_v(p)) rep.eta = std::max(rep.eta, std::abs(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Validation

bool AffgebroidValidation::valid() const {
  return cv_antisymmetry <= defaults::antisymmetry_tol && e0_differential <= defaults::cocycle_e0_tol &&
         bidual.valid() && vertical.valid() && prolongation.valid();
}

AffgebroidValidation validate_affgebroid(const AffgebroidChart& a, const SamplePlan& plan) {
  AffgebroidValidation v;
  const SamplePlan base_plan = plan.resized(a.m());
  const SamplePlan phase_plan = plan.resized(a.m() + a.n());
  v.bidual = validate_chart(a.bidual(), base_plan);
  v.vertical = validate_chart(a.vertical(), base_plan);
  v.prolongation = validate_chart(a.prolongation(), phase_plan);

  const std::size_t n = a.n();
  const auto points = sample_points(base_plan);
  const FormField de0 = differential(KSection::basis(a.bidual(), 0));
  for (const auto& x : points) {
    const ChartValues cv = a.vertical().evaluate(x);
    for (std::size_t al = 0; al < n; ++al)
      for (std::size_t be = 0; be < n; ++be)
        for (std::size_t g = 0; g < n; ++g)
          v.cv_antisymmetry = std::max(v.cv_antisymmetry, std::abs(cv.c(al, be, g) + cv.c(be, al, g)));
    for (double d : de0(x)) v.e0_differential = std::max(v.e0_differential, std::abs(d));
  }
  return v;
}

}  // namespace affhj
