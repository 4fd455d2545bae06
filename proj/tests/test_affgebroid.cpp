#include <cmath>

#include "affhj/affgebroid.hpp"
#include "affhj/models.hpp"
#include "doctest.h"

using namespace affhj;

namespace {

std::vector<ModelBundle> all_models() {
  return {free_particle(1), harmonic_oscillator(1), free_particle(2), linear_tangent(2), rigid_body({1.0, 2.0, 3.0})};
}

// Explicit formula for the trivial fibration, basis (dt, dq, dp) in the
// identification e~_0 = dt, e~_1 = dq, e-_1 = dp.
std::vector<double> omega_classical(double hq, double hp) {
  // components on (0,1), (0,2), (1,2): dq ^ dp + H_q dq ^ dt + H_p dp ^ dt
  return {-hq, -hp, 1.0};
}

// A model with every structure term switched on: m = 2, n = 2 over (u, v).
// rho_0 = d/du, rho_1 = d/dv, rho_2 = u d/dv, [e_1, e_2] = 0, [e_0, e_2] = e_1,
// [e_0, e_1] = 0. Brackets of the anchors: [d/du, u d/dv] = d/dv = rho_1.
AffgebroidChart coupled_chart() {
  std::vector<std::vector<Expr>> rhoV{{Expr(0.0), Expr(1.0)}, {Expr(0.0), parse("u")}};
  std::vector<std::vector<Expr>> c0{{Expr(0.0), Expr(0.0)}, {Expr(1.0), Expr(0.0)}};
  return AffgebroidChart({"u", "v"}, {"y1", "y2"}, {Expr(1.0), Expr(0.0)}, rhoV, c0, std::vector<Expr>(8, Expr(0.0)));
}

}  // namespace

TEST_SUITE("affgebroid") {
  TEST_CASE("bidual of the trivial fibration is the tangent algebroid") {
    const auto b = free_particle(1);
    const AlgebroidChart bidual = bidual_chart(b.chart);
    CHECK(bidual.rank() == 2);
    const ChartValues cv = bidual.evaluate(Point{0.3, -0.2});
    CHECK(cv.anchor == std::vector<double>{1.0, 0.0, 0.0, 1.0});
    for (double c : cv.structure) CHECK(c == 0.0);
  }

  TEST_CASE("rigid body charts") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    const auto bid = validate_chart(b.chart.bidual(), b.plan.resized(b.chart.m()));
    CHECK(bid.valid());
    const AlgebroidChart v = vertical_chart(b.chart);
    const ChartValues cv = v.evaluate(Point{0.5});
    for (double a : cv.anchor) CHECK(a == 0.0);
    CHECK(cv.c(0, 1, 2) == 1.0);
    CHECK(cv.c(1, 2, 0) == 1.0);
    CHECK(cv.c(2, 0, 1) == 1.0);
    CHECK(cv.c(1, 0, 2) == -1.0);
    CHECK(validate_chart(v, b.plan.resized(b.chart.m())).valid());
  }

  TEST_CASE("vertical anchor of the trivial fibration is d/dq") {
    const auto b = free_particle(1);
    const ChartValues cv = b.chart.vertical().evaluate(Point{0.1, 0.2});
    CHECK(cv.anchor == std::vector<double>{0.0, 1.0});
  }

  TEST_CASE("every shipped model validates, with d e^0 exactly zero") {
    for (const auto& b : all_models()) {
      CAPTURE(b.name);
      const auto v = validate_affgebroid(b.chart, b.plan);
      CHECK(v.valid());
      CHECK(v.e0_differential == 0.0);
      CHECK(v.prolongation.valid());
    }
    const auto v = validate_affgebroid(coupled_chart(), SamplePlan::unit(4));
    CHECK(v.valid());
  }

  TEST_CASE("prolongation differentials") {
    const AffgebroidChart a = coupled_chart();
    const AlgebroidChart& pro = a.prolongation();
    SamplePlan plan = SamplePlan::unit(4);
    plan.count = 20;
    const auto points = sample_points(plan);
    const std::size_t n = a.n();
    const FormIndex two(2 * n + 1, 2);
    CHECK(max_abs(differential(KSection::basis(pro, 0)), points) == 0.0);
    for (std::size_t g = 0; g < n; ++g) {
      CHECK(max_abs(differential(KSection::basis(pro, n + 1 + g)), points) == 0.0);
      const FormField d = differential(KSection::basis(pro, 1 + g));
      for (const auto& p : points) {
        const auto v = d(p);
        const ChartValues cv = a.bidual().evaluate(std::span<const double>(p).first(2));
        // d e~^g = -C^g_{0a} e~^0 ^ e~^a - 1/2 C^g_{ab} e~^a ^ e~^b
        for (std::size_t al = 0; al < n; ++al) {
          const int idx[2] = {0, static_cast<int>(1 + al)};
          CHECK(v[two.locate(idx)->component] == -cv.c(0, al + 1, g + 1));
        }
        const int ab[2] = {1, 2};
        CHECK(v[two.locate(ab)->component] == -cv.c(1, 2, g + 1));
      }
    }
  }

  TEST_CASE("eta is the constant first basis section") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    const KSection e = eta(b.chart);
    const auto v = e.field()(Point{0.2, 0.1, -0.3, 0.4});
    CHECK(v[0] == 1.0);
    for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] == 0.0);
    CHECK(max_abs(differential(e), sample_points(b.plan)) == 0.0);
  }

  TEST_CASE("omega_h of the trivial fibration") {
    const auto b = free_particle(1);
    const HamiltonianSection h(b.chart, parse("p^2/2 + q^3*t"));
    const FormField w = omega_h(h);
    for (const auto& p : sample_points(b.plan)) {
      const double t = p[0], q = p[1], pp = p[2];
      const auto v = w(p);
      const auto expected = omega_classical(3.0 * q * q * t, pp);
      for (std::size_t k = 0; k < 3; ++k) CHECK(v[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    }
  }

  TEST_CASE("omega_h with constant H and no structure") {
    const auto b = linear_tangent(2);
    const HamiltonianSection h(b.chart, Expr(4.0));
    const FormField w = omega_h(h);
    const FormIndex two(5, 2);
    const auto v = w(Point{0.1, 0.2, 0.3, 0.4});
    for (std::size_t c = 0; c < two.size(); ++c) {
      const auto& t = two.tuple(c);
      const bool pair = t[0] >= 1 && t[0] <= 2 && t[1] == t[0] + 2;
      CHECK(v[c] == (pair ? 1.0 : 0.0));
    }
  }

  TEST_CASE("cosymplectic package on every model") {
    auto models = all_models();
    ModelBundle coupled{"coupled", coupled_chart(), parse("y1^2/2 + u*y2 + v*y1*y2"), {}, SamplePlan::unit(4)};
    models.push_back(coupled);
    for (const auto& b : models) {
      CAPTURE(b.name);
      const auto r = cosymplectic_check(b.hamiltonian_section(), b.plan);
      CHECK(r.d_eta == 0.0);
      CHECK(r.d_omega <= 1e-8);
      CHECK(r.omega_transcription <= 1e-9);
      CHECK(r.reeb_residual <= 1e-10);
      CHECK(r.reeb_agreement <= 1e-10);
      CHECK(r.reeb_contraction <= 1e-10);
      CHECK(r.nondegenerate);
      CHECK(r.min_rank == 2 * b.chart.n() + 1);
    }
  }

  TEST_CASE("Reeb section of the trivial fibration") {
    const auto b = free_particle(1);
    const HamiltonianSection h(b.chart, parse("p^2/2"));
    const Point p{0.0, 0.0, 1.0};
    const auto r = reeb(h, p);
    CHECK(r == std::vector<double>{1.0, 1.0, 0.0});
    const auto s = reeb_solve(h, p);
    CHECK(s.residual <= 1e-10);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(s.coefficients[k] - r[k]) <= 1e-12);

    const HamiltonianSection g(b.chart, parse("q^2*p + t"));
    const Point x{0.3, 0.5, -0.7};
    // R = d/dt + H_p d/dq - H_q d/dp
    const auto rg = reeb(g, x);
    CHECK(rg[0] == 1.0);
    CHECK(rg[1] == doctest::Approx(0.25));
    CHECK(rg[2] == doctest::Approx(-2.0 * 0.5 * -0.7));
  }

  TEST_CASE("zero Hamiltonian and zero structure give the first basis vector") {
    const auto b = linear_tangent(2);
    const HamiltonianSection h(b.chart, Expr(0.0));
    const Point p{0.3, -0.1, 0.8, 0.2};
    const auto r = reeb(h, p);
    const auto s = reeb_solve(h, p);
    for (std::size_t k = 0; k < r.size(); ++k) {
      CHECK(r[k] == (k == 0 ? 1.0 : 0.0));
      CHECK(std::abs(s.coefficients[k] - r[k]) <= 1e-14);
    }
  }

  TEST_CASE("the Reeb system has full rank") {
    const auto b = free_particle(1);
    const HamiltonianSection h(b.chart, parse("p^2/2"));
    const auto s = reeb_solve(h, Point{0.1, 0.2, 0.3});
    CHECK(s.rank == 3);
    CHECK(s.nondegenerate);
  }

  TEST_CASE("pullback identities for seeded polynomial sections") {
    SplitMix64 rng(2024);
    for (const auto& b : all_models()) {
      CAPTURE(b.name);
      const auto& vars = b.chart.base_vars();
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<Expr> gamma;
        for (std::size_t a = 0; a < b.chart.n(); ++a) {
          Expr e(rng.uniform(-1, 1));
          for (const auto& v : vars) {
            e = e + Expr(rng.uniform(-1, 1)) * Expr::variable(v) +
                Expr(rng.uniform(-1, 1)) * pow(Expr::variable(v), Expr(2.0));
          }
          gamma.push_back(e);
        }
        SamplePlan plan = b.plan;
        plan.count = 20;
        const auto r = pullback_identities(VStarSection(b.chart, gamma), b.hamiltonian_section(), plan);
        CHECK(r.liouville <= 1e-8);
        CHECK(r.symplectic <= 1e-8);
        CHECK(r.bar <= 1e-8);
        CHECK(r.morphism <= 1e-8);
      }
    }
  }

  TEST_CASE("pullback of lambda_h along the zero section with constant H") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    const double c = 2.5;
    const HamiltonianSection h(b.chart, Expr(c));
    const VStarSection zero(b.chart, {Expr(0.0), Expr(0.0), Expr(0.0)});
    const FormField pb = pullback(section_prolongation_map(zero), lambda_h(h));
    const auto v = pb(Point{0.4});
    CHECK(v[0] == -c);
    for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] == 0.0);
    const auto hg = h_compose(h, zero)(Point{0.4});
    CHECK(hg == v);
  }

  TEST_CASE("restriction to the vertical prolongation") {
    for (const auto& b : all_models()) {
      CAPTURE(b.name);
      const auto r = vertical_restriction_check(b.hamiltonian_section(), b.plan);
      CHECK(r.omega <= 1e-10);
      CHECK(r.lambda <= 1e-10);
      CHECK(r.eta == 0.0);
    }
    // trivial fibration: the restriction is dq ^ dp
    const auto b = free_particle(1);
    const FormField w = pullback(vertical_inclusion_map(b.chart), omega_h(b.hamiltonian_section()));
    CHECK(w(Point{0.2, 0.3, 0.4}) == std::vector<double>{1.0});
  }

  TEST_CASE("chart construction errors") {
    CHECK_THROWS_AS(AffgebroidChart({"t"}, {"t"}, {Expr(1.0)}, {{Expr(0.0)}}, {{Expr(0.0)}}, {Expr(0.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(AffgebroidChart({"t"}, {"p"}, {}, {{Expr(0.0)}}, {{Expr(0.0)}}, {Expr(0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(AffgebroidChart({"t"}, {"p"}, {parse("p")}, {{Expr(0.0)}}, {{Expr(0.0)}}, {Expr(0.0)}),
                    std::invalid_argument);
  }
}
