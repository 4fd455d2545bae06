#include <cmath>
#include <thread>

#include "affhj/expr.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace affhj;

TEST_SUITE("expr") {
  TEST_CASE("division of a power parses with power binding tighter") {
    const Expr e = parse("p^2/2");
    const Expr expected =
        Expr::binary(BinaryOperator::div, Expr::binary(BinaryOperator::pow, Expr::variable("p"), Expr(2.0)), Expr(2.0));
    CHECK(e == expected);
  }

  TEST_CASE("unary minus applies after the power") {
    const Expr e = parse("-x^2");
    REQUIRE(e.kind() == Expr::Kind::negate);
    CHECK(e.operand(0) == parse("x^2"));
    CHECK(eval(e, {{"x", 3.0}}) == -9.0);
  }

  TEST_CASE("precedence and associativity") {
    CHECK(eval(parse("2^3^2"), {}) == 512.0);
    CHECK(eval(parse("2*-3"), {}) == -6.0);
    CHECK(eval(parse("1-2-3"), {}) == -4.0);
    CHECK(eval(parse("8/4/2"), {}) == 1.0);
    CHECK(eval(parse("2+3*4"), {}) == 14.0);
    CHECK(eval(parse("-(2+3)"), {}) == -5.0);
    CHECK(eval(parse("2^-1"), {}) == 0.5);
    CHECK(eval(parse("sqrt(4)^3"), {}) == 8.0);
    CHECK(eval(parse("1.5e1 + .5"), {}) == 15.5);
  }

  TEST_CASE("simple evaluations") {
    CHECK(eval(parse("sin(x)*cos(x)"), {{"x", 0.0}}) == 0.0);
    CHECK(eval(parse("x+2*y"), {{"x", 1.0}, {"y", 3.0}}) == 7.0);
    CHECK(eval(parse("exp(0)"), {}) == 1.0);
    CHECK(eval(parse("log(exp(2))"), {}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eval(parse("tan(0)"), {}) == 0.0);
  }

  TEST_CASE("domain violations name the subexpression") {
    try {
      eval(parse("1 + log(x)"), {{"x", -1.0}});
      FAIL("expected a domain violation");
    } catch (const EvalError& e) {
      CHECK(e.kind() == EvalError::Kind::domain_violation);
      CHECK(e.subexpression() == parse("log(x)").str());
    }
    CHECK_THROWS_AS(eval(parse("sqrt(x)"), {{"x", -0.5}}), EvalError);
    CHECK_THROWS_AS(eval(parse("1/x"), {{"x", 0.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("0^(-1)"), {}), EvalError);
    CHECK_THROWS_AS(eval(parse("x^0.5"), {{"x", -4.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("x^y"), {{"x", -2.0}, {"y", 2.0}}), EvalError);
  }

  TEST_CASE("unbound variables are errors, never zero") {
    try {
      eval(parse("x + y"), {{"x", 1.0}});
      FAIL("expected an unbound variable error");
    } catch (const EvalError& e) {
      CHECK(e.kind() == EvalError::Kind::unbound_variable);
    }
    CHECK_THROWS_AS(BoundExpr(parse("x + y"), {"x"}), EvalError);
  }

  TEST_CASE("syntax errors carry offset and expected tokens") {
    try {
      parse("x + * 2");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
      CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse("(x + 1"), ParseError);
    CHECK_THROWS_AS(parse("x y"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("1e"), ParseError);
  }

  TEST_CASE("unknown functions are rejected") {
    try {
      parse("cosh(x)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 0);
    }
  }

  TEST_CASE("exact partials") {
    const std::vector<std::string> wrt{"x", "y"};
    const auto r = eval_with_partials(parse("x^2*y"), {{"x", 3.0}, {"y", 2.0}}, wrt);
    CHECK(r.value == 18.0);
    REQUIRE(r.partials.size() == 2);
    CHECK(r.partials[0] == 12.0);
    CHECK(r.partials[1] == 9.0);

    const std::vector<std::string> x{"x"};
    const auto s = eval_with_partials(parse("sin(x)"), {{"x", 0.0}}, x);
    CHECK(s.value == 0.0);
    CHECK(s.partials[0] == 1.0);
  }

  TEST_CASE("powers") {
    const std::vector<std::string> x{"x"};
    const auto zero = eval_with_partials(parse("x^0"), {{"x", 0.0}}, x);
    CHECK(zero.value == 1.0);
    CHECK(zero.partials[0] == 0.0);
    const auto sq = eval_with_partials(parse("x^2"), {{"x", 0.0}}, x);
    CHECK(sq.partials[0] == 0.0);
    const auto cube = eval_with_partials(parse("x^3"), {{"x", -2.0}}, x);
    CHECK(cube.value == -8.0);
    CHECK(cube.partials[0] == 12.0);
    // constant but non-literal exponent takes the power rule
    const auto third = eval_with_partials(parse("x^(1/2)"), {{"x", 4.0}}, x);
    CHECK(third.value == 2.0);
    CHECK(third.partials[0] == doctest::Approx(0.25).epsilon(1e-15));

    const std::vector<std::string> xy{"x", "y"};
    const auto gen = eval_with_partials(parse("x^y"), {{"x", 2.0}, {"y", 3.0}}, xy);
    CHECK(gen.value == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(gen.partials[0] == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(gen.partials[1] == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-14));
  }

  TEST_CASE("partials only for requested variables") {
    const std::vector<std::string> y{"y"};
    const auto r = eval_with_partials(parse("x*y"), {{"x", 5.0}, {"y", 7.0}}, y);
    REQUIRE(r.partials.size() == 1);
    CHECK(r.partials[0] == 5.0);
  }

  TEST_CASE("bound expressions match map evaluation") {
    const Expr e = parse("x*exp(y) - z/(1+x^2)");
    const BoundExpr b(e, {"x", "y", "z"});
    const std::vector<double> p{0.3, -0.7, 1.9};
    CHECK(b(p) == eval(e, {{"x", 0.3}, {"y", -0.7}, {"z", 1.9}}));
    std::vector<double> g(2);
    b(p, g);
    const std::vector<std::string> wrt{"x", "y"};
    const auto r = eval_with_partials(e, {{"x", 0.3}, {"y", -0.7}, {"z", 1.9}}, wrt);
    CHECK(g[0] == r.partials[0]);
    CHECK(g[1] == r.partials[1]);
  }

  TEST_CASE("symbolic derivative agrees with forward mode") {
    for (const auto& c : corpus::make(40, 7)) {
      const BoundExpr f(c.expr, c.vars);
      std::vector<BoundExpr> d;
      for (const auto& v : c.vars) d.emplace_back(derivative(c.expr, v), c.vars);
      affhj::SamplePlan plan;
      plan.box.assign(c.vars.size(), {-2.0, 2.0});
      plan.count = 10;
      for (const auto& p : sample_points(plan)) {
        std::vector<double> g(c.vars.size());
        try {
          f(p, g);
        } catch (const EvalError&) {
          continue;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double sym = d[i](p);
          CHECK(std::abs(sym - g[i]) <= 1e-10 * (1.0 + std::abs(g[i])));
        }
      }
    }
  }

  TEST_CASE("forward mode agrees with central differences on the corpus") {
    const auto cases = corpus::make(200, 20240611);
    double worst = 0.0;
    std::size_t evaluated = 0;
    for (const auto& c : cases) {
      const auto r = corpus::ad_vs_fd(c, 100, 99);
      worst = std::max(worst, r.worst);
      evaluated += r.evaluated;
    }
    CHECK(evaluated > 15000);
    CHECK(worst <= 1e-5);
  }

  TEST_CASE("printing round-trips on the corpus") {
    for (const auto& c : corpus::make(200, 20240611)) {
      CHECK(corpus::round_trips(c.expr));
      CHECK(parse(c.expr.str()) == c.expr);
    }
    CHECK(corpus::round_trips(parse("-x^2 - -3 * (y - 1e-7)")));
  }

  TEST_CASE("evaluation is pure") {
    const Expr e = parse("sin(x)^2 + log(1+y^2)*exp(x)");
    const BoundExpr b(e, {"x", "y"});
    const std::vector<double> p{0.123, -1.7};
    const double first = b(p);
    for (int k = 0; k < 100; ++k) CHECK(b(p) == first);

    std::vector<double> results(4);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < results.size(); ++t) {
      threads.emplace_back([&, t] {
        double v = 0.0;
        for (int k = 0; k < 1000; ++k) v = b(p);
        results[t] = v;
      });
    }
    for (auto& t : threads) t.join();
    for (double r : results) CHECK(r == first);
  }
}
