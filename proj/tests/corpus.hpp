#pragma once

// Seeded random expressions for differentiation and round-trip checks. The
// shapes keep every function inside its domain on [-2, 2]^k: divisions by
// c + v^2, logs and square roots of c + v^2, tan of a sine, and general
// powers only with a positive base.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "affhj/expr.hpp"
#include "affhj/sampling.hpp"

namespace corpus {

struct Case {
  affhj::Expr expr;
  std::vector<std::string> vars;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, int depth = 3) : rng_(seed), depth_(depth) {}

  Case next() {
    const std::size_t k = 1 + pick(3);
    vars_.clear();
    for (std::size_t i = 0; i < k; ++i) vars_.push_back(std::string(1, "xyz"[i]));
    return {grow(depth_), vars_};
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_.uniform() * static_cast<double>(n)) % n; }

  affhj::Expr leaf() {
    static const double constants[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    if (pick(4) == 0) return affhj::Expr(constants[pick(5)]);
    return affhj::Expr::variable(vars_[pick(vars_.size())]);
  }

  affhj::Expr positive(const affhj::Expr& v) { return affhj::Expr(1.0 + static_cast<double>(pick(2))) + pow(v, 2.0); }

  affhj::Expr grow(int depth) {
    using affhj::Expr;
    if (depth == 0) return leaf();
    const Expr a = grow(depth - 1);
    switch (pick(14)) {
      case 0: return a + grow(depth - 1);
      case 1: return a - grow(depth - 1);
      case 2: return a * grow(depth - 1);
      case 3: return -a;
      case 4: return a / positive(grow(depth - 1));
      case 5: return pow(a, Expr(2.0 + static_cast<double>(pick(2))));
      case 6: return pow(positive(a), sin(grow(depth - 1)));
      case 7: return sin(a);
      case 8: return cos(a);
      case 9: return tan(sin(a));
      case 10: return exp(sin(a));
      case 11: return log(positive(a));
      case 12: return sqrt(positive(a));
      default: return exp(leaf()) * a;
    }
  }

  affhj::SplitMix64 rng_;
  int depth_;
  std::vector<std::string> vars_;
};

inline std::vector<Case> make(std::size_t count, std::uint64_t seed, int depth = 3) {
  Generator g(seed, depth);
  std::vector<Case> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(g.next());
  return out;
}

/// Worst value of |AD - FD| / (1 + |FD|) over `points` seeded points in
/// [-2, 2]^k; points where evaluation fails are skipped.
struct FdResult {
  double worst = 0.0;
  std::size_t evaluated = 0;
};

inline FdResult ad_vs_fd(const Case& c, std::size_t points, std::uint64_t seed, double h = 1e-6) {
  affhj::SamplePlan plan;
  plan.box.assign(c.vars.size(), {-2.0, 2.0});
  plan.count = points;
  plan.seed = seed;
  const affhj::BoundExpr f(c.expr, c.vars);
  FdResult r;
  std::vector<double> grad(c.vars.size());
  for (auto p : affhj::sample_points(plan)) {
    try {
      f(p, grad);
      for (std::size_t i = 0; i < p.size(); ++i) {
        auto q = p;
        q[i] = p[i] + h;
        const double up = f(q);
        q[i] = p[i] - h;
        const double down = f(q);
        const double fd = (up - down) / (2.0 * h);
        r.worst = std::max(r.worst, std::abs(grad[i] - fd) / (1.0 + std::abs(fd)));
      }
      ++r.evaluated;
    } catch (const affhj::EvalError&) {
    }
  }
  return r;
}

inline bool round_trips(const affhj::Expr& e) {
  const affhj::Expr first = affhj::parse(e.str());
  return affhj::parse(first.str()) == first;
}

}  // namespace corpus
