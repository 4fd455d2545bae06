#include "affhj/models.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "affhj/hj.hpp"

namespace affhj {

bool ModelBundle::has_section(const std::string& key) const {
  return std::any_of(sections.begin(), sections.end(), [&](const auto& s) { return s.first == key; });
}

const CoSection& ModelBundle::section(const std::string& key) const {
  for (const auto& [n, s] : sections)
    if (n == key) return s;
  throw std::out_of_range("model '" + name + "' has no section '" + key + "'");
}

namespace {

std::vector<std::string> numbered(const std::string& stem, std::size_t count) {
  if (count == 1) return {stem};
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= count; ++k) out.push_back(stem + std::to_string(k));
  return out;
}

// sum over names of pattern with '#' replaced by the name
Expr sum_of(const std::vector<std::string>& names, const std::string& pattern) {
  std::string src;
  for (const auto& v : names) {
    std::string term = pattern;
    for (std::size_t pos; (pos = term.find('#')) != std::string::npos;) term.replace(pos, 1, v);
    if (!src.empty()) src += " + ";
    src += term;
  }
  return parse(src);
}

AffgebroidChart trivial_chart(std::size_t dim_q) {
  if (dim_q == 0) throw std::invalid_argument("trivial fibration needs at least one q coordinate");
  std::vector<std::string> base{"t"};
  const auto q = numbered("q", dim_q);
  base.insert(base.end(), q.begin(), q.end());
  const auto p = numbered("p", dim_q);
  const std::size_t m = dim_q + 1;
  std::vector<Expr> rho0(m, Expr(0.0));
  rho0[0] = Expr(1.0);
  std::vector<std::vector<Expr>> rhoV(dim_q, std::vector<Expr>(m, Expr(0.0)));
  for (std::size_t a = 0; a < dim_q; ++a) rhoV[a][a + 1] = Expr(1.0);
  std::vector<std::vector<Expr>> c0(dim_q, std::vector<Expr>(dim_q, Expr(0.0)));
  std::vector<Expr> cv(dim_q * dim_q * dim_q, Expr(0.0));
  return AffgebroidChart(base, p, rho0, rhoV, c0, cv);
}

SamplePlan trivial_plan(std::size_t dim_q, double t_lo, double t_hi) {
  SamplePlan plan = SamplePlan::unit(1 + 2 * dim_q);
  plan.box[0] = {t_lo, t_hi};
  return plan;
}

}  // namespace

ModelBundle free_particle(std::size_t dim_q) {
  AffgebroidChart chart = trivial_chart(dim_q);
  const auto q = std::vector<std::string>(chart.base_vars().begin() + 1, chart.base_vars().end());
  ModelBundle b{"free:" + std::to_string(dim_q), chart, sum_of(chart.fiber_vars(), "#^2/2"), {}, trivial_plan(dim_q, 0.0, 1.0)};
  b.sections.emplace_back("free", coboundary(chart, sum_of(q, "#^2/(2*(t+1))")));
  b.sections.emplace_back("cubic", coboundary(chart, sum_of(q, "#^3/3")));
  b.sections.emplace_back("zero", CoSection(chart, Expr(0.0), std::vector<Expr>(dim_q, Expr(0.0))));
  return b;
}

ModelBundle trivial_fibration(std::size_t dim_q) {
  ModelBundle b = free_particle(dim_q);
  b.name = "trivial:" + std::to_string(dim_q);
  return b;
}

ModelBundle harmonic_oscillator(std::size_t dim_q) {
  AffgebroidChart chart = trivial_chart(dim_q);
  const auto q = std::vector<std::string>(chart.base_vars().begin() + 1, chart.base_vars().end());
  Expr h = sum_of(chart.fiber_vars(), "#^2/2") + sum_of(q, "#^2/2");
  ModelBundle b{"oscillator:" + std::to_string(dim_q), chart, h, {}, trivial_plan(dim_q, 0.2, 2.9)};
  b.sections.emplace_back("cot", coboundary(chart, sum_of(q, "#^2/2*cos(t)/sin(t)")));
  b.sections.emplace_back("zero", CoSection(chart, Expr(0.0), std::vector<Expr>(dim_q, Expr(0.0))));
  return b;
}

AlgebroidChart tangent_algebroid(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("tangent algebroid needs a positive dimension");
  std::vector<Expr> anchor(dim * dim, Expr(0.0));
  for (std::size_t a = 0; a < dim; ++a) anchor[a * dim + a] = Expr(1.0);
  std::vector<std::string> vars;
  for (std::size_t k = 1; k <= dim; ++k) vars.push_back("x" + std::to_string(k));
  return AlgebroidChart(vars, dim, anchor, std::vector<Expr>(dim * dim * dim, Expr(0.0)));
}

namespace {

AlgebroidChart three_dim_algebra(const std::vector<std::tuple<int, int, int, double>>& brackets) {
  std::vector<Expr> structure(27, Expr(0.0));
  for (const auto& [a, b, c, v] : brackets) {
    structure[AlgebroidChart::structure_index(3, a, b, c)] = Expr(v);
    structure[AlgebroidChart::structure_index(3, b, a, c)] = Expr(-v);
  }
  return AlgebroidChart({"x"}, 3, std::vector<Expr>(3, Expr(0.0)), structure);
}

}  // namespace

AlgebroidChart so3_chart() { return three_dim_algebra({{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}}); }

AlgebroidChart perturbed_so3_chart() {
  return three_dim_algebra({{0, 1, 2, 1.1}, {2, 0, 1, 1.0}, {1, 2, 0, 1.0}});
}

AlgebroidChart broken_jacobi_chart() { return three_dim_algebra({{0, 1, 2, 1.0}, {0, 2, 0, 1.0}}); }

AffgebroidChart linear_algebroid(const AlgebroidChart& chart, std::vector<std::string> fiber_vars) {
  const std::size_t m = chart.base_dim();
  const std::size_t n = chart.rank();
  if (!validate_chart(chart, SamplePlan::unit(m)).valid())
    throw std::invalid_argument("linear_algebroid: input chart fails validation");
  if (fiber_vars.empty()) {
    for (std::size_t k = 1; k <= n; ++k) {
      std::string v = "y" + std::to_string(k);
      while (std::find(chart.base_vars().begin(), chart.base_vars().end(), v) != chart.base_vars().end()) v = "_" + v;
      fiber_vars.push_back(v);
    }
  }
  if (fiber_vars.size() != n) throw std::invalid_argument("linear_algebroid: need one fiber name per basis section");
  std::vector<Expr> rho0(m, Expr(0.0));
  std::vector<std::vector<Expr>> rhoV(n, std::vector<Expr>(m));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < m; ++i) rhoV[a][i] = chart.anchor(a, i);
  std::vector<std::vector<Expr>> c0(n, std::vector<Expr>(n, Expr(0.0)));
  std::vector<Expr> cv(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t g = 0; g < n; ++g) cv[AffgebroidChart::cv_index(n, a, b, g)] = chart.structure(a, b, g);
  return AffgebroidChart(chart.base_vars(), fiber_vars, rho0, rhoV, c0, cv);
}

ModelBundle linear_tangent(std::size_t dim) {
  AffgebroidChart chart = linear_algebroid(tangent_algebroid(dim));
  std::vector<Expr> ones(dim, Expr(1.0));
  std::vector<Expr> radial;
  for (const auto& v : chart.base_vars()) radial.push_back(Expr::variable(v));
  ModelBundle b{"linear:tangent" + std::to_string(dim), chart, sum_of(chart.fiber_vars(), "#^2/2"), {},
                SamplePlan::unit(2 * dim)};
  b.sections.emplace_back("zero", CoSection(chart, Expr(0.0), std::vector<Expr>(dim, Expr(0.0))));
  b.sections.emplace_back("constant", CoSection(chart, Expr(0.0), ones));
  b.sections.emplace_back("radial", CoSection(chart, Expr(0.0), radial));
  return b;
}

ModelBundle rigid_body(const std::array<double, 3>& inertia) {
  for (double i : inertia)
    if (!(i > 0.0)) throw std::invalid_argument("rigid_body: moments of inertia must be positive");
  std::vector<std::string> pi{"Pi1", "Pi2", "Pi3"};
  std::vector<std::vector<Expr>> rhoV(3, std::vector<Expr>{Expr(0.0)});
  std::vector<std::vector<Expr>> c0(3, std::vector<Expr>(3, Expr(0.0)));
  std::vector<Expr> cv(27, Expr(0.0));
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int g = (a + 2) % 3;
    cv[AffgebroidChart::cv_index(3, a, b, g)] = Expr(1.0);
    cv[AffgebroidChart::cv_index(3, b, a, g)] = Expr(-1.0);
  }
  AffgebroidChart chart({"t"}, pi, {Expr(1.0)}, rhoV, c0, cv);
  Expr h(0.0);
  for (std::size_t a = 0; a < 3; ++a) {
    Expr term = pow(Expr::variable(pi[a]), Expr(2.0)) / Expr(2.0 * inertia[a]);
    h = a == 0 ? term : h + term;
  }
  std::string label = "rigid:";
  for (std::size_t a = 0; a < 3; ++a) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, inertia[a]);
    (void)ec;
    label += std::string(buf, end) + (a < 2 ? "," : "");
  }
  ModelBundle b{label, chart, h, {}, SamplePlan::unit(4)};
  b.plan.box[0] = {0.0, 1.0};
  b.sections.emplace_back("time", CoSection(chart, Expr::variable("t"), {Expr(0.0), Expr(0.0), Expr(0.0)}));
  b.sections.emplace_back("spin", CoSection(chart, Expr(0.0), {Expr(0.0), Expr(0.0), Expr(1.0)}));
  return b;
}

namespace {

std::size_t parse_count(const std::string& text, const std::string& name) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0)
    throw std::invalid_argument("bad dimension in model name '" + name + "'");
  return v;
}

double parse_real(const std::string& text, const std::string& name) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad number '" + text + "' in model name '" + name + "'");
  return v;
}

}  // namespace

bool is_model_name(const std::string& name) {
  for (const char* prefix : {"trivial:", "free:", "oscillator:", "linear:tangent", "rigid:"})
    if (name.rfind(prefix, 0) == 0) return true;
  return false;
}

ModelBundle model_by_name(const std::string& name) {
  auto rest = [&](const std::string& prefix) { return name.substr(prefix.size()); };
  if (name.rfind("trivial:", 0) == 0) return trivial_fibration(parse_count(rest("trivial:"), name));
  if (name.rfind("free:", 0) == 0) return free_particle(parse_count(rest("free:"), name));
  if (name.rfind("oscillator:", 0) == 0) return harmonic_oscillator(parse_count(rest("oscillator:"), name));
  if (name.rfind("linear:tangent", 0) == 0) return linear_tangent(parse_count(rest("linear:tangent"), name));
  if (name.rfind("rigid:", 0) == 0) {
    const std::string body = rest("rigid:");
    std::array<double, 3> inertia{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t comma = body.find(',', start);
      if ((k < 2) != (comma != std::string::npos))
        throw std::invalid_argument("rigid body needs three moments of inertia: '" + name + "'");
      inertia[k] = parse_real(body.substr(start, k < 2 ? comma - start : std::string::npos), name);
      start = comma + 1;
    }
    return rigid_body(inertia);
  }
  throw std::invalid_argument("unknown model name '" + name + "'");
}

}  // namespace affhj
