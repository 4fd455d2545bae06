#include <cmath>
#include <numbers>

#include "affhj/dynamics.hpp"
#include "affhj/models.hpp"
#include "doctest.h"

using namespace affhj;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double oscillator_return_error(double step) {
  const auto b = harmonic_oscillator(1);
  const auto tr = integrate(b.hamiltonian_section(), {0.0, 1.0, 0.0}, 0.0, two_pi, step);
  REQUIRE_FALSE(tr.aborted);
  return std::hypot(tr.back()[1] - 1.0, tr.back()[2]);
}

double casimir(const std::vector<double>& s) { return s[1] * s[1] + s[2] * s[2] + s[3] * s[3]; }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("Hamilton right-hand sides") {
    const auto free = free_particle(1);
    CHECK(hamilton_rhs(free.hamiltonian_section(), std::vector<double>{0.0, 0.0, 1.0}) ==
          std::vector<double>{1.0, 1.0, 0.0});

    const auto rigid = rigid_body({1.0, 2.0, 3.0});
    const auto r = hamilton_rhs(rigid.hamiltonian_section(), std::vector<double>{0.0, 0.0, 0.0, 1.0});
    CHECK(r == std::vector<double>{1.0, 0.0, 0.0, 0.0});

    const HamiltonianSection zero(rigid.chart, Expr(0.0));
    CHECK(hamilton_rhs(zero, std::vector<double>{0.3, 1.0, -2.0, 0.5}) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  }

  TEST_CASE("rigid body equations are the Euler equations") {
    const std::array<double, 3> inertia{1.0, 2.0, 3.0};
    const auto rigid = rigid_body(inertia);
    const std::vector<double> s{0.0, 0.4, -1.1, 0.7};
    const auto r = hamilton_rhs(rigid.hamiltonian_section(), s);
    const double w[3] = {s[1] / inertia[0], s[2] / inertia[1], s[3] / inertia[2]};
    // dPi/dt = Pi x Omega
    CHECK(r[1] == doctest::Approx(s[2] * w[2] - s[3] * w[1]).epsilon(1e-15));
    CHECK(r[2] == doctest::Approx(s[3] * w[0] - s[1] * w[2]).epsilon(1e-15));
    CHECK(r[3] == doctest::Approx(s[1] * w[1] - s[2] * w[0]).epsilon(1e-15));
  }

  TEST_CASE("geodesic flow of the tangent algebroid") {
    const auto b = linear_tangent(2);
    const auto r = hamilton_rhs(b.hamiltonian_section(), std::vector<double>{0.1, 0.2, 0.7, -0.3});
    CHECK(r == std::vector<double>{0.7, -0.3, 0.0, 0.0});
  }

  TEST_CASE("constant fields give straight lines exactly") {
    const auto b = free_particle(2);
    const HamiltonianSection zero(b.chart, Expr(0.0));
    const auto tr = integrate(zero, {0.0, 0.5, -0.5, 1.0, 2.0}, 0.0, 1.0, 1e-3);
    REQUIRE_FALSE(tr.aborted);
    CHECK(tr.size() == 1001);
    CHECK(tr.times.back() == 1.0);
    for (std::size_t k = 0; k < tr.size(); k += 97) {
      const auto& s = tr.states[k];
      CHECK(s[0] == doctest::Approx(tr.times[k]).epsilon(1e-14));
      CHECK(s[1] == 0.5);
      CHECK(s[2] == -0.5);
      CHECK(s[3] == 1.0);
      CHECK(s[4] == 2.0);
    }
  }

  TEST_CASE("last step is shortened to land on the end time") {
    const auto b = free_particle(1);
    const auto tr = integrate(b.hamiltonian_section(), {0.0, 0.0, 1.0}, 0.0, 0.25, 0.1);
    REQUIRE(tr.size() == 4);
    CHECK(tr.times.back() == 0.25);
    CHECK(tr.back()[1] == doctest::Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("harmonic oscillator returns after one period") {
    CHECK(oscillator_return_error(1e-3) <= 1e-9);
  }

  TEST_CASE("RK4 error drops sixteenfold under step halving") {
    const double coarse = oscillator_return_error(two_pi / 50.0);
    const double fine = oscillator_return_error(two_pi / 100.0);
    const double factor = coarse / fine;
    CAPTURE(factor);
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
  }

  TEST_CASE("forward then backward returns to the start") {
    const std::vector<std::pair<ModelBundle, std::vector<double>>> cases{
        {harmonic_oscillator(1), {0.3, 0.8, -0.2}},
        {free_particle(2), {0.0, 0.1, 0.2, -0.4, 0.9}},
        {rigid_body({1.0, 2.0, 3.0}), {0.0, 0.6, -0.8, 0.3}},
        {linear_tangent(2), {0.5, -0.5, 1.0, 0.25}},
    };
    for (const auto& [b, s0] : cases) {
      CAPTURE(b.name);
      const HamiltonianSection h = b.hamiltonian_section();
      const auto fwd = integrate(h, s0, 0.0, 1.0, 1e-3);
      REQUIRE_FALSE(fwd.aborted);
      const VectorField field = [&h](std::span<const double> s) { return hamilton_rhs(h, s); };
      const auto back = rk4(field, fwd.back(), 1.0, 0.0, -1e-3);
      REQUIRE_FALSE(back.aborted);
      CHECK(back.times.back() == 0.0);
      for (std::size_t i = 0; i < s0.size(); ++i) CHECK(std::abs(back.back()[i] - s0[i]) <= 1e-7);
    }
  }

  TEST_CASE("rigid body conserves the Casimir and the energy") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    const HamiltonianSection h = b.hamiltonian_section();
    const std::vector<double> s0{0.0, 1.0, 0.5, -0.3};
    const auto tr = integrate(h, s0, 0.0, 10.0, 1e-3);
    REQUIRE_FALSE(tr.aborted);
    double casimir_drift = 0.0, energy_drift = 0.0;
    for (const auto& s : tr.states) {
      casimir_drift = std::max(casimir_drift, std::abs(casimir(s) - casimir(s0)));
      energy_drift = std::max(energy_drift, std::abs(h(s) - h(s0)));
    }
    CHECK(casimir_drift <= 1e-8);
    CHECK(energy_drift <= 1e-8);

    // reference run at a tenth of the step
    const auto ref = integrate(h, s0, 0.0, 10.0, 1e-4);
    for (std::size_t i = 0; i < s0.size(); ++i) CHECK(std::abs(ref.back()[i] - tr.back()[i]) <= 1e-8);
    CHECK(std::abs(casimir(ref.back()) - casimir(s0)) <= 1e-8);
  }

  TEST_CASE("principal axis equilibrium") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    const auto tr = integrate(b.hamiltonian_section(), {0.0, 0.0, 0.0, 1.0}, 0.0, 2.0, 1e-3);
    CHECK(tr.back()[1] == 0.0);
    CHECK(tr.back()[2] == 0.0);
    CHECK(tr.back()[3] == 1.0);
  }

  TEST_CASE("reduced fields") {
    const auto free = free_particle(1);
    const auto x = reduced_field(free.section("free"), free.hamiltonian_section())(std::vector<double>{0.5, 0.3});
    CHECK(x[0] == 1.0);
    CHECK(x[1] == doctest::Approx(0.3 / 1.5).epsilon(1e-15));

    const HamiltonianSection zero(free.chart, Expr(0.0));
    CHECK(reduced_field(free.section("cubic"), zero)(std::vector<double>{0.2, 0.7}) == std::vector<double>{1.0, 0.0});

    const auto lin = linear_tangent(2);
    const auto y = reduced_field(lin.section("radial"), lin.hamiltonian_section())(std::vector<double>{0.4, -0.9});
    CHECK(y == std::vector<double>{0.4, -0.9});
  }

  TEST_CASE("reduced trajectory of the free particle") {
    const auto b = free_particle(1);
    for (double q0 : {1.0, -0.4, 2.5}) {
      const auto tr = integrate_reduced(b.section("free"), b.hamiltonian_section(), {0.0, q0}, 0.0, 1.0, 1e-3);
      REQUIRE_FALSE(tr.aborted);
      for (std::size_t k = 0; k < tr.size(); k += 50) {
        const double t = tr.times[k];
        CHECK(std::abs(tr.states[k][0] - t) <= 1e-8);
        CHECK(std::abs(tr.states[k][1] - q0 * (t + 1.0)) <= 1e-8);
      }
    }
  }

  TEST_CASE("full and reduced flows agree for Hamilton-Jacobi solutions") {
    struct Case {
      ModelBundle bundle;
      std::string section;
      std::vector<double> x0;
    };
    const std::vector<Case> cases{
        {free_particle(1), "free", {0.0, 1.0}},
        {free_particle(2), "free", {0.0, 0.3, -0.7}},
        {harmonic_oscillator(1), "cot", {0.3, 0.8}},
        {linear_tangent(2), "constant", {0.2, 0.1}},
    };
    for (const auto& c : cases) {
      CAPTURE(c.bundle.name);
      const HamiltonianSection h = c.bundle.hamiltonian_section();
      const CoSection& alpha = c.bundle.section(c.section);
      std::vector<double> s0 = c.x0;
      const auto value = alpha.jet(c.x0).value;
      s0.insert(s0.end(), value.begin() + 1, value.end());
      const double t0 = c.x0[0];
      const auto full = integrate(h, s0, t0, t0 + 1.0, 1e-3);
      const auto red = integrate_reduced(alpha, h, c.x0, t0, t0 + 1.0, 1e-3);
      REQUIRE(full.size() == red.size());
      double worst = 0.0;
      for (std::size_t k = 0; k < full.size(); ++k) {
        for (std::size_t i = 0; i < c.x0.size(); ++i) worst = std::max(worst, std::abs(full.states[k][i] - red.states[k][i]));
      }
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("evaluation errors abort with a partial trajectory") {
    const auto b = free_particle(1);
    const HamiltonianSection h(b.chart, parse("-p + sqrt(q)"));
    const auto tr = integrate(h, {0.0, 0.5, 0.0}, 0.0, 2.0, 1e-3);
    CHECK(tr.aborted);
    CHECK_FALSE(tr.error.empty());
    CHECK(tr.size() >= 2);
    CHECK(tr.times.back() < 0.51);
    for (const auto& s : tr.states)
      for (double v : s) CHECK(std::isfinite(v));
  }

  TEST_CASE("blow-up aborts") {
    // dx/dt = x^2 leaves every bounded set before t = 1
    const VectorField field = [](std::span<const double> s) { return std::vector<double>{s[0] * s[0]}; };
    const auto tr = rk4(field, {1.0}, 0.0, 2.0, 1e-2);
    CHECK(tr.aborted);
  }

  TEST_CASE("argument validation") {
    const auto b = free_particle(1);
    const auto h = b.hamiltonian_section();
    CHECK_THROWS_AS(integrate(h, {0.0, 0.0, 1.0}, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(h, {0.0, 0.0, 1.0}, 0.0, 1.0, -1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate(h, {0.0, 0.0, 1.0}, 1.0, 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate(h, {0.0, 0.0}, 0.0, 1.0, 1e-3), std::invalid_argument);
  }
}
