#include "affhj/hj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affhj/defaults.hpp"

namespace affhj {

namespace {

// f and its base gradient at x.
FormJet f_jet(const HamiltonianSection& h, const CoSection& alpha, std::span<const double> x) {
  const std::size_t m = h.chart().m();
  const std::size_t n = h.chart().n();
  const FormJet aj = alpha.jet(x);
  Point p(x.begin(), x.end());
  p.insert(p.end(), aj.value.begin() + 1, aj.value.end());
  std::vector<double> grad(m + n);
  const double hv = h(p, grad);
  FormJet out;
  out.value = {aj.value[0] + hv};
  out.gradient.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double d = aj.gradient[i] + grad[i];
    for (std::size_t b = 0; b < n; ++b) d += grad[m + b] * aj.gradient[(b + 1) * m + i];
    out.gradient[i] = d;
  }
  return out;
}

double vertical_derivative(const ChartValues& cv, std::size_t n, const std::vector<double>& df) {
  double worst = 0.0;
  for (std::size_t al = 0; al < n; ++al) {
    double s = 0.0;
    for (std::size_t i = 0; i < df.size(); ++i) s += cv.rho(al + 1, i) * df[i];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::vector<Interval> padded_bounds(const std::vector<std::vector<double>>& states, double pad) {
  std::vector<Interval> box(states.front().size(),
                            {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  for (const auto& s : states) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      box[i].first = std::min(box[i].first, s[i]);
      box[i].second = std::max(box[i].second, s[i]);
    }
  }
  for (auto& b : box) {
    b.first -= pad;
    b.second += pad;
  }
  return box;
}

bool is_zero_literal(const Expr& e) { return e.is_literal(0.0); }

}  // namespace

FormField f_of(const HamiltonianSection& h, const CoSection& alpha) {
  auto jet = [h, alpha](std::span<const double> x) { return f_jet(h, alpha, x); };
  return FormField(
      h.chart().m(), h.chart().n() + 1, 0, [jet](std::span<const double> x) { return jet(x).value; }, jet);
}

ResidualReport cocycle_residual(const CoSection& alpha, const SamplePlan& plan) {
  const AffgebroidChart& a = alpha.chart();
  const FormField d_alpha = differential(a.bidual(), alpha.field());
  ResidualReport rep;
  const auto points = sample_points(plan.resized(a.m()));
  rep.points = points.size();
  for (const auto& x : points) {
    for (double v : d_alpha(x)) {
      if (std::abs(v) > rep.max || rep.worst_point.empty()) {
        rep.max = std::max(rep.max, std::abs(v));
        rep.worst_point = x;
      }
    }
  }
  return rep;
}

double hj_residual_at(const CoSection& alpha, const HamiltonianSection& h, std::span<const double> x) {
  const FormJet fj = f_jet(h, alpha, x);
  return vertical_derivative(h.chart().bidual().evaluate(x), h.chart().n(), fj.gradient);
}

HjReport hj_residual(const CoSection& alpha, const HamiltonianSection& h, const SamplePlan& plan) {
  const AffgebroidChart& a = h.chart();
  const auto points = sample_points(plan.resized(a.m()));
  HjReport rep;
  rep.points = points.size();
  rep.f_min = std::numeric_limits<double>::infinity();
  rep.f_max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& x : points) {
    const FormJet fj = f_jet(h, alpha, x);
    const double r = vertical_derivative(a.bidual().evaluate(x), a.n(), fj.gradient);
    if (r > rep.max || rep.worst_point.empty()) {
      rep.max = std::max(rep.max, r);
      rep.worst_point = x;
    }
    rep.f_min = std::min(rep.f_min, fj.value[0]);
    rep.f_max = std::max(rep.f_max, fj.value[0]);
    sum += fj.value[0];
  }
  if (points.empty()) {
    rep.f_min = rep.f_max = 0.0;
  } else {
    rep.f_mean = sum / static_cast<double>(points.size());
  }
  return rep;
}

CoSection coboundary(const AffgebroidChart& chart, const Expr& potential) {
  const auto& vars = chart.base_vars();
  std::vector<Expr> partials;
  for (const auto& v : vars) partials.push_back(derivative(potential, v));
  auto along = [&](auto anchor) {
    Expr sum(0.0);
    bool first = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Expr& r = anchor(i);
      if (is_zero_literal(r)) continue;
      Expr term = r.is_literal(1.0) ? partials[i] : r * partials[i];
      sum = first ? term : sum + term;
      first = false;
    }
    return sum;
  };
  Expr a0 = along([&](std::size_t i) -> const Expr& { return chart.rho0(i); });
  std::vector<Expr> av;
  for (std::size_t al = 0; al < chart.n(); ++al) {
    av.push_back(along([&](std::size_t i) -> const Expr& { return chart.rhoV(al, i); }));
  }
  return CoSection(chart, std::move(a0), std::move(av));
}

bool TheoremReport::trajectory_condition() const {
  return !integration_failed && trajectory_residual <= defaults::trajectory_tol;
}

bool TheoremReport::hj_condition() const { return hj_box <= defaults::hj_tol; }

namespace {

void require_cocycle(const CoSection& alpha, const SamplePlan& plan, double& residual) {
  const ResidualReport c = cocycle_residual(alpha, plan);
  residual = c.max;
  if (c.max > defaults::cocycle_tol) {
    throw NotCocycleError(c.max, "section is not a cocycle: max |d alpha| = " + std::to_string(c.max));
  }
}

TheoremReport verify_one(const CoSection& alpha, const HamiltonianSection& h, const Point& x0, double horizon,
                         double step, const SamplePlan& plan, double cocycle) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  TheoremReport rep;
  rep.x0 = x0;
  rep.cocycle = cocycle;

  const Trajectory c = integrate_reduced(alpha, h, x0, 0.0, horizon, step);
  rep.steps = c.size() - 1;
  if (c.aborted) {
    rep.integration_failed = true;
    rep.error = c.error;
  }
  const VectorField X = reduced_field(alpha, h);
  for (const auto& x : c.states) {
    const FormJet aj = alpha.jet(x);
    Point beta(x.begin(), x.end());
    beta.insert(beta.end(), aj.value.begin() + 1, aj.value.end());
    const auto rhs = hamilton_rhs(h, beta);
    const auto xdot = X(x);
    for (std::size_t i = 0; i < m; ++i) rep.x_residual = std::max(rep.x_residual, std::abs(xdot[i] - rhs[i]));
    for (std::size_t g = 0; g < n; ++g) {
      double dy = 0.0;
      for (std::size_t i = 0; i < m; ++i) dy += aj.gradient[(g + 1) * m + i] * xdot[i];
      rep.trajectory_residual = std::max(rep.trajectory_residual, std::abs(dy - rhs[m + g]));
    }
    rep.hj_along = std::max(rep.hj_along, hj_residual_at(alpha, h, x));
  }
  if (rep.x_residual > defaults::reduced_x_tol) {
    throw InconsistencyError("reduced field disagrees with the Hamilton field: " + std::to_string(rep.x_residual));
  }
  rep.box = padded_bounds(c.states, defaults::trajectory_box_pad);
  SamplePlan box_plan = plan;
  box_plan.box = rep.box;
  rep.hj_box = std::max(rep.hj_along, hj_residual(alpha, h, box_plan).max);
  return rep;
}

}  // namespace

TheoremReport verify_theorem(const CoSection& alpha, const HamiltonianSection& h, const Point& x0, double horizon,
                             double step, const SamplePlan& plan) {
  if (x0.size() != h.chart().m()) throw std::invalid_argument("verify_theorem: initial point needs m entries");
  double cocycle = 0.0;
  require_cocycle(alpha, plan, cocycle);
  return verify_one(alpha, h, x0, horizon, step, plan, cocycle);
}

bool TheoremSetReport::trajectory_condition() const {
  return std::all_of(runs.begin(), runs.end(), [](const TheoremReport& r) { return r.trajectory_condition(); });
}

bool TheoremSetReport::hj_condition() const {
  return std::all_of(runs.begin(), runs.end(), [](const TheoremReport& r) { return r.hj_condition(); });
}

std::size_t TheoremSetReport::witness() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].trajectory_residual > runs[best].trajectory_residual) best = k;
  return best;
}

TheoremSetReport verify_theorem(const CoSection& alpha, const HamiltonianSection& h, const std::vector<Point>& x0s,
                                double horizon, double step, const SamplePlan& plan) {
  for (const auto& x0 : x0s)
    if (x0.size() != h.chart().m()) throw std::invalid_argument("verify_theorem: initial point needs m entries");
  TheoremSetReport rep;
  require_cocycle(alpha, plan, rep.cocycle);
  for (const auto& x0 : x0s) rep.runs.push_back(verify_one(alpha, h, x0, horizon, step, plan, rep.cocycle));
  return rep;
}

Witness find_witness(const CoSection& alpha, const HamiltonianSection& h, const Point& center, double radius,
                     std::size_t count, std::uint64_t seed, double horizon, double step, double threshold) {
  SamplePlan near;
  near.count = count;
  near.seed = seed;
  for (double c : center) near.box.emplace_back(c - radius, c + radius);
  Witness w;
  for (const auto& x0 : sample_points(near)) {
    ++w.tried;
    const TheoremReport r = verify_one(alpha, h, x0, horizon, step, near, 0.0);
    if (r.trajectory_residual > w.trajectory_residual || w.x0.empty()) {
      w.trajectory_residual = std::max(w.trajectory_residual, r.trajectory_residual);
      w.x0 = x0;
    }
    if (r.trajectory_residual >= threshold) {
      w.found = true;
      w.x0 = x0;
      w.trajectory_residual = r.trajectory_residual;
      break;
    }
  }
  return w;
}

}  // namespace affhj
