#include "affhj/hj.hpp"
#include "affhj/models.hpp"
#include "doctest.h"

using namespace affhj;

TEST_SUITE("models") {
  TEST_CASE("shipped charts validate") {
    for (const auto& b : {free_particle(1), free_particle(3), trivial_fibration(2), harmonic_oscillator(1),
                          linear_tangent(1), linear_tangent(3), rigid_body({1.0, 2.0, 3.0}), rigid_body({2.0, 2.0, 0.5})}) {
      CAPTURE(b.name);
      const auto v = validate_affgebroid(b.chart, b.plan);
      CHECK(v.valid());
      CHECK(v.bidual.jacobi <= 1e-8);
      CHECK(v.prolongation.jacobi <= 1e-8);
      CHECK(b.plan.box.size() == b.chart.m() + b.chart.n());
    }
    CHECK(validate_chart(so3_chart(), SamplePlan::unit(1)).valid());
    CHECK(validate_chart(tangent_algebroid(3), SamplePlan::unit(3)).valid());
  }

  TEST_CASE("trivial fibration layout") {
    const auto b = trivial_fibration(2);
    CHECK(b.name == "trivial:2");
    CHECK(b.chart.base_vars() == std::vector<std::string>{"t", "q1", "q2"});
    CHECK(b.chart.fiber_vars() == std::vector<std::string>{"p1", "p2"});
    CHECK(free_particle(1).chart.base_vars() == std::vector<std::string>{"t", "q"});
    CHECK(free_particle(1).chart.fiber_vars() == std::vector<std::string>{"p"});
    CHECK(harmonic_oscillator(1).plan.box[0] == Interval{0.2, 2.9});
    CHECK(b.has_section("free"));
    CHECK_FALSE(b.has_section("nope"));
    CHECK_THROWS_AS(b.section("nope"), std::out_of_range);
  }

  TEST_CASE("rigid body layout") {
    const auto b = rigid_body({1.0, 2.0, 3.0});
    CHECK(b.name == "rigid:1,2,3");
    CHECK(b.chart.m() == 1);
    CHECK(b.chart.n() == 3);
    const auto h = b.hamiltonian_section();
    CHECK(h(std::vector<double>{0.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.5 + 0.25 + 1.0 / 6.0).epsilon(1e-15));
  }

  TEST_CASE("linear algebroid embedding has a central anchorless e_0") {
    const AffgebroidChart a = linear_algebroid(so3_chart());
    CHECK(a.fiber_vars() == std::vector<std::string>{"y1", "y2", "y3"});
    const ChartValues cv = a.bidual().evaluate(std::vector<double>{0.5});
    for (std::size_t b = 0; b < 4; ++b) {
      CHECK(cv.rho(b, 0) == 0.0);
      for (std::size_t g = 0; g < 4; ++g) CHECK(cv.c(0, b, g) == 0.0);
    }
    CHECK(cv.c(1, 2, 3) == 1.0);
    CHECK(validate_affgebroid(a, SamplePlan::unit(4)).valid());

    const AffgebroidChart named = linear_algebroid(tangent_algebroid(2), {"u", "v"});
    CHECK(named.fiber_vars() == std::vector<std::string>{"u", "v"});
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(trivial_fibration(0), std::invalid_argument);
    CHECK_THROWS_AS(free_particle(0), std::invalid_argument);
    CHECK_THROWS_AS(tangent_algebroid(0), std::invalid_argument);
    CHECK_THROWS_AS(rigid_body({1.0, 0.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(rigid_body({1.0, 2.0, -3.0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_algebroid(broken_jacobi_chart()), std::invalid_argument);
    CHECK_THROWS_AS(linear_algebroid(so3_chart(), {"a", "b"}), std::invalid_argument);
  }

  TEST_CASE("model names") {
    CHECK(model_by_name("free:2").name == "free:2");
    CHECK(model_by_name("trivial:1").name == "trivial:1");
    CHECK(model_by_name("oscillator:1").name == "oscillator:1");
    CHECK(model_by_name("linear:tangent2").chart.n() == 2);
    CHECK(model_by_name("rigid:1,2,3").name == "rigid:1,2,3");
    CHECK(model_by_name("rigid:0.5,2,3.25").name == "rigid:0.5,2,3.25");
    CHECK(is_model_name("free:1"));
    CHECK_FALSE(is_model_name("models/free_particle.model"));
    CHECK_THROWS_AS(model_by_name("free:0"), std::invalid_argument);
    CHECK_THROWS_AS(model_by_name("free:x"), std::invalid_argument);
    CHECK_THROWS_AS(model_by_name("rigid:1,2"), std::invalid_argument);
    CHECK_THROWS_AS(model_by_name("rigid:1,2,-1"), std::invalid_argument);
    CHECK_THROWS_AS(model_by_name("pendulum"), std::invalid_argument);
  }

  TEST_CASE("preset solutions and non-solutions") {
    for (const auto& b : {free_particle(1), free_particle(2), harmonic_oscillator(1), harmonic_oscillator(2)}) {
      CAPTURE(b.name);
      const SamplePlan base = b.plan.resized(b.chart.m());
      const auto h = b.hamiltonian_section();
      const std::string solution = b.name.starts_with("free") ? "free" : "cot";
      CHECK(hj_residual(b.section(solution), h, base).max <= 1e-8);
      if (b.has_section("cubic")) CHECK(hj_residual(b.section("cubic"), h, base).max >= 0.1);
    }
  }
}
