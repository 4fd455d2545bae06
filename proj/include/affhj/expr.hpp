#pragma once

// Scalar expression language: parsing, printing, evaluation and exact
// first derivatives by forward-mode dual arithmetic.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace affhj {

enum class BinaryOperator { add, sub, mul, div, pow };
enum class UnaryFunction { sin, cos, tan, exp, log, sqrt };

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  enum class Kind { number, variable, negate, binary, call };

  /// Literal constant; implicit so that `2.0 * x` reads naturally.
  Expr(double value = 0.0);  // NOLINT(google-explicit-constructor)

  static Expr number(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOperator op, Expr lhs, Expr rhs);
  static Expr call(UnaryFunction fn, Expr argument);

  Kind kind() const;
  double literal() const;
  const std::string& name() const;
  BinaryOperator op() const;
  UnaryFunction function() const;
  /// Child `i` of a negate (0), binary (0, 1) or call (0) node.
  const Expr& operand(std::size_t i) const;

  bool is_literal(double value) const;
  /// True when the tree references no variables.
  bool is_constant() const;
  std::set<std::string> free_variables() const;

  /// Re-parseable text; parse(e.str()) == e.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

std::string_view function_name(UnaryFunction fn);

using Env = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { unbound_variable, domain_violation };
  EvalError(Kind kind, std::string subexpression, const std::string& detail);
  Kind kind() const { return kind_; }
  const std::string& subexpression() const { return subexpression_; }

 private:
  Kind kind_;
  std::string subexpression_;
};

Expr parse(std::string_view source);

double eval(const Expr& e, const Env& env);

struct ValueWithPartials {
  double value = 0.0;
  std::vector<double> partials;
};

ValueWithPartials eval_with_partials(const Expr& e, const Env& env,
                                     std::span<const std::string> wrt);

/// First derivative as an (unsimplified) expression tree.
Expr derivative(const Expr& e, std::string_view var);

/// An expression compiled against a fixed variable ordering. Evaluation takes
/// a point in that ordering; the gradient variant differentiates with respect
/// to the leading `gradient.size()` variables.
class BoundExpr {
 public:
  BoundExpr() = default;
  /// Throws EvalError(unbound_variable) when `e` uses a name not in `vars`.
  BoundExpr(const Expr& e, const std::vector<std::string>& vars);

  std::size_t arity() const { return arity_; }
  bool is_zero() const { return zero_; }
  const Expr& expr() const { return source_; }

  double operator()(std::span<const double> point) const;
  double operator()(std::span<const double> point, std::span<double> gradient) const;

  struct Instruction;

 private:
  Expr source_;
  std::size_t arity_ = 0;
  std::size_t max_depth_ = 0;
  bool zero_ = true;
  std::shared_ptr<const std::vector<Instruction>> program_;
};

}  // namespace affhj
