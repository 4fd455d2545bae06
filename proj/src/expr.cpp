#include "affhj/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

namespace affhj {

struct Expr::Node {
  Kind kind = Kind::number;
  double value = 0.0;
  std::string name;
  BinaryOperator op = BinaryOperator::add;
  UnaryFunction fn = UnaryFunction::sin;
  std::vector<Expr> children;
  bool constant = true;
};

namespace {

constexpr std::array<std::pair<std::string_view, UnaryFunction>, 6> kFunctions{{
    {"sin", UnaryFunction::sin},
    {"cos", UnaryFunction::cos},
    {"tan", UnaryFunction::tan},
    {"exp", UnaryFunction::exp},
    {"log", UnaryFunction::log},
    {"sqrt", UnaryFunction::sqrt},
}};

char op_char(BinaryOperator op) {
  switch (op) {
    case BinaryOperator::add: return '+';
    case BinaryOperator::sub: return '-';
    case BinaryOperator::mul: return '*';
    case BinaryOperator::div: return '/';
    case BinaryOperator::pow: return '^';
  }
  return '?';
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view function_name(UnaryFunction fn) {
  for (const auto& [name, f] : kFunctions) {
    if (f == fn) return name;
  }
  return "?";
}

Expr::Expr(double value) : Expr(number(value)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::number;
  n->value = value;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->name = std::move(name);
  n->constant = false;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->constant = operand.is_constant();
  n->children.push_back(std::move(operand));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::binary(BinaryOperator op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->constant = lhs.is_constant() && rhs.is_constant();
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::call(UnaryFunction fn, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->fn = fn;
  n->constant = argument.is_constant();
  n->children.push_back(std::move(argument));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::literal() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinaryOperator Expr::op() const { return node_->op; }
UnaryFunction Expr::function() const { return node_->fn; }
const Expr& Expr::operand(std::size_t i) const { return node_->children.at(i); }
bool Expr::is_literal(double value) const {
  return node_->kind == Kind::number && node_->value == value;
}
bool Expr::is_constant() const { return node_->constant; }

std::set<std::string> Expr::free_variables() const {
  std::set<std::string> out;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::variable) out.insert(n->name);
    for (const auto& c : n->children) stack.push_back(c.node_.get());
  }
  return out;
}

std::string Expr::str() const {
  auto wrap = [](const Expr& e) {
    const Kind k = e.kind();
    if (k == Kind::number || k == Kind::variable || k == Kind::call) return e.str();
    return "(" + e.str() + ")";
  };
  switch (node_->kind) {
    case Kind::number: return format_number(node_->value);
    case Kind::variable: return node_->name;
    case Kind::negate: return "-" + wrap(operand(0));
    case Kind::binary: {
      std::string s = wrap(operand(0));
      s += op_char(node_->op);
      s += wrap(operand(1));
      return s;
    }
    case Kind::call:
      return std::string(function_name(node_->fn)) + "(" + operand(0).str() + ")";
  }
  return {};
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expr::Kind::number: return x.value == y.value;
    case Expr::Kind::variable: return x.name == y.name;
    case Expr::Kind::negate: return x.children[0] == y.children[0];
    case Expr::Kind::binary:
      return x.op == y.op && x.children[0] == y.children[0] && x.children[1] == y.children[1];
    case Expr::Kind::call: return x.fn == y.fn && x.children[0] == y.children[0];
  }
  return false;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOperator::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOperator::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOperator::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOperator::div, a, b); }
Expr operator-(const Expr& a) { return Expr::negate(a); }
Expr pow(const Expr& base, const Expr& exponent) {
  return Expr::binary(BinaryOperator::pow, base, exponent);
}
Expr sin(const Expr& e) { return Expr::call(UnaryFunction::sin, e); }
Expr cos(const Expr& e) { return Expr::call(UnaryFunction::cos, e); }
Expr tan(const Expr& e) { return Expr::call(UnaryFunction::tan, e); }
Expr exp(const Expr& e) { return Expr::call(UnaryFunction::exp, e); }
Expr log(const Expr& e) { return Expr::call(UnaryFunction::log, e); }
Expr sqrt(const Expr& e) { return Expr::call(UnaryFunction::sqrt, e); }

// ---------------------------------------------------------------------------
// Errors

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) s += ", ";
    s += expected[i];
  }
  return s;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset) +
                         (expected.empty() ? std::string() : "; expected one of: " + join_expected(expected))),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(Kind kind, std::string subexpression, const std::string& detail)
    : std::runtime_error(detail + " in '" + subexpression + "'"),
      kind_(kind),
      subexpression_(std::move(subexpression)) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      fail("unexpected '" + std::string(1, src_[pos_]) + "'", {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    throw ParseError(what, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_factor();
      } else if (accept('/')) {
        lhs = lhs / parse_factor();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    if (accept('-')) return -parse_factor();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) return pow(base, parse_factor());
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    static const std::vector<std::string> kAtom{"number", "identifier", "'('", "'-'"};
    if (pos_ >= src_.size()) fail("unexpected end of input", kAtom);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      std::string ident(src_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        const auto it = std::find_if(kFunctions.begin(), kFunctions.end(),
                                     [&](const auto& f) { return f.first == ident; });
        if (it == kFunctions.end()) {
          pos_ = start;
          fail("unknown function '" + ident + "'", {"sin", "cos", "tan", "exp", "log", "sqrt"});
        }
        ++pos_;
        Expr arg = parse_expr();
        if (!accept(')')) fail("unterminated call to '" + ident + "'", {"')'"});
        return Expr::call(it->second, std::move(arg));
      }
      return Expr::variable(std::move(ident));
    }
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'", kAtom);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", {"digit"});
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("number out of range", {"number"});
    }
    return Expr::number(v);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

// ---------------------------------------------------------------------------
// Compiled evaluation

struct BoundExpr::Instruction {
  enum class Code { constant, load, negate, add, sub, mul, div, pow_const, pow_general, call };
  Code code = Code::constant;
  double value = 0.0;
  std::size_t index = 0;
  UnaryFunction fn = UnaryFunction::sin;
};

namespace {

using Instruction = BoundExpr::Instruction;
using Code = Instruction::Code;

struct Compiler {
  const std::vector<std::string>& vars;
  std::vector<Instruction> program;
  std::size_t depth = 0;
  std::size_t max_depth = 0;

  void push() { max_depth = std::max(max_depth, ++depth); }

  void emit(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::number:
        program.push_back({Code::constant, e.literal(), 0, UnaryFunction::sin});
        push();
        return;
      case Expr::Kind::variable: {
        const auto it = std::find(vars.begin(), vars.end(), e.name());
        if (it == vars.end()) {
          throw EvalError(EvalError::Kind::unbound_variable, e.name(),
                          "unbound variable '" + e.name() + "'");
        }
        Instruction ins;
        ins.code = Code::load;
        ins.index = static_cast<std::size_t>(it - vars.begin());
        program.push_back(ins);
        push();
        return;
      }
      case Expr::Kind::negate:
        emit(e.operand(0));
        program.push_back({Code::negate, 0.0, 0, UnaryFunction::sin});
        return;
      case Expr::Kind::binary: {
        emit(e.operand(0));
        emit(e.operand(1));
        Instruction ins;
        switch (e.op()) {
          case BinaryOperator::add: ins.code = Code::add; break;
          case BinaryOperator::sub: ins.code = Code::sub; break;
          case BinaryOperator::mul: ins.code = Code::mul; break;
          case BinaryOperator::div: ins.code = Code::div; break;
          case BinaryOperator::pow:
            ins.code = e.operand(1).is_constant() ? Code::pow_const : Code::pow_general;
            break;
        }
        program.push_back(ins);
        --depth;
        return;
      }
      case Expr::Kind::call: {
        emit(e.operand(0));
        Instruction ins;
        ins.code = Code::call;
        ins.fn = e.function();
        program.push_back(ins);
        return;
      }
    }
  }
};

// Rebuild the subexpression text for an instruction position (error paths only).
std::string describe(const Expr& root, std::size_t target) {
  std::size_t counter = 0;
  std::string found;
  auto walk = [&](auto&& self, const Expr& e) -> void {
    switch (e.kind()) {
      case Expr::Kind::number:
      case Expr::Kind::variable: break;
      case Expr::Kind::negate:
      case Expr::Kind::call: self(self, e.operand(0)); break;
      case Expr::Kind::binary:
        self(self, e.operand(0));
        self(self, e.operand(1));
        break;
    }
    if (counter++ == target) found = e.str();
  };
  walk(walk, root);
  return found;
}

[[noreturn]] void domain(const Expr& root, std::size_t pc, const std::string& what) {
  throw EvalError(EvalError::Kind::domain_violation, describe(root, pc), what);
}

struct Scratch {
  std::vector<double> value;
  std::vector<double> grad;
};

}  // namespace

BoundExpr::BoundExpr(const Expr& e, const std::vector<std::string>& vars)
    : source_(e), arity_(vars.size()), zero_(e.is_literal(0.0)) {
  Compiler c{vars, {}, 0, 0};
  c.emit(e);
  max_depth_ = c.max_depth;
  program_ = std::make_shared<const std::vector<Instruction>>(std::move(c.program));
}

double BoundExpr::operator()(std::span<const double> point) const {
  return (*this)(point, std::span<double>{});
}

double BoundExpr::operator()(std::span<const double> point, std::span<double> gradient) const {
  if (!program_) {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    return 0.0;
  }
  if (point.size() < arity_) throw std::invalid_argument("BoundExpr: point has too few coordinates");
  const std::size_t nd = gradient.size();
  if (nd > arity_) throw std::invalid_argument("BoundExpr: gradient larger than arity");

  thread_local Scratch scratch;
  auto& val = scratch.value;
  auto& grad = scratch.grad;
  val.resize(max_depth_);
  grad.resize(max_depth_ * nd);

  std::size_t sp = 0;  // stack pointer (number of live entries)
  const auto& prog = *program_;
  for (std::size_t pc = 0; pc < prog.size(); ++pc) {
    const Instruction& ins = prog[pc];
    switch (ins.code) {
      case Code::constant: {
        val[sp] = ins.value;
        std::fill_n(grad.begin() + static_cast<std::ptrdiff_t>(sp * nd), nd, 0.0);
        ++sp;
        break;
      }
      case Code::load: {
        val[sp] = point[ins.index];
        double* g = grad.data() + sp * nd;
        std::fill_n(g, nd, 0.0);
        if (ins.index < nd) g[ins.index] = 1.0;
        ++sp;
        break;
      }
      case Code::negate: {
        val[sp - 1] = -val[sp - 1];
        double* g = grad.data() + (sp - 1) * nd;
        for (std::size_t k = 0; k < nd; ++k) g[k] = -g[k];
        break;
      }
      case Code::add:
      case Code::sub:
      case Code::mul:
      case Code::div:
      case Code::pow_const:
      case Code::pow_general: {
        const double a = val[sp - 2];
        const double b = val[sp - 1];
        double* ga = grad.data() + (sp - 2) * nd;
        const double* gb = grad.data() + (sp - 1) * nd;
        double r = 0.0;
        switch (ins.code) {
          case Code::add:
            r = a + b;
            for (std::size_t k = 0; k < nd; ++k) ga[k] += gb[k];
            break;
          case Code::sub:
            r = a - b;
            for (std::size_t k = 0; k < nd; ++k) ga[k] -= gb[k];
            break;
          case Code::mul:
            r = a * b;
            for (std::size_t k = 0; k < nd; ++k) ga[k] = ga[k] * b + a * gb[k];
            break;
          case Code::div:
            if (b == 0.0) domain(source_, pc, "division by zero");
            r = a / b;
            for (std::size_t k = 0; k < nd; ++k) ga[k] = (ga[k] - r * gb[k]) / b;
            break;
          case Code::pow_const: {
            // Constant exponent: d(u^c) = c u^(c-1) du, with 0^0 = 1.
            if (a < 0.0 && b != std::floor(b)) domain(source_, pc, "negative base with non-integer exponent");
            if (a == 0.0 && b < 0.0) domain(source_, pc, "zero raised to a negative power");
            r = (b == 0.0) ? 1.0 : std::pow(a, b);
            if (b == 0.0) {
              std::fill_n(ga, nd, 0.0);
            } else {
              bool moving = false;
              for (std::size_t k = 0; k < nd; ++k) moving = moving || ga[k] != 0.0;
              if (moving) {
                if (a == 0.0 && b < 1.0) domain(source_, pc, "derivative of fractional power at zero");
                const double slope = b * std::pow(a, b - 1.0);
                for (std::size_t k = 0; k < nd; ++k) ga[k] *= slope;
              }
            }
            break;
          }
          case Code::pow_general: {
            if (a <= 0.0) domain(source_, pc, "non-positive base with variable exponent");
            const double la = std::log(a);
            r = std::exp(b * la);
            for (std::size_t k = 0; k < nd; ++k) ga[k] = r * (gb[k] * la + b * ga[k] / a);
            break;
          }
          default: break;
        }
        val[sp - 2] = r;
        --sp;
        break;
      }
      case Code::call: {
        const double u = val[sp - 1];
        double* g = grad.data() + (sp - 1) * nd;
        double r = 0.0;
        double slope = 0.0;
        switch (ins.fn) {
          case UnaryFunction::sin:
            r = std::sin(u);
            slope = std::cos(u);
            break;
          case UnaryFunction::cos:
            r = std::cos(u);
            slope = -std::sin(u);
            break;
          case UnaryFunction::tan: {
            const double c = std::cos(u);
            if (c == 0.0) domain(source_, pc, "tan at a pole");
            r = std::tan(u);
            slope = 1.0 / (c * c);
            break;
          }
          case UnaryFunction::exp:
            r = std::exp(u);
            slope = r;
            break;
          case UnaryFunction::log:
            if (u <= 0.0) domain(source_, pc, "log of non-positive value");
            r = std::log(u);
            slope = 1.0 / u;
            break;
          case UnaryFunction::sqrt:
            if (u < 0.0) domain(source_, pc, "sqrt of negative value");
            r = std::sqrt(u);
            if (nd > 0 && u == 0.0 && std::any_of(g, g + nd, [](double x) { return x != 0.0; })) {
              domain(source_, pc, "derivative of sqrt at zero");
            }
            slope = (u == 0.0) ? 0.0 : 0.5 / r;
            break;
        }
        val[sp - 1] = r;
        for (std::size_t k = 0; k < nd; ++k) g[k] *= slope;
        break;
      }
    }
  }
  std::copy_n(grad.begin(), nd, gradient.begin());
  return val[0];
}

// ---------------------------------------------------------------------------
// Map-based entry points

namespace {

std::vector<std::string> ordering(const Env& env, std::span<const std::string> wrt) {
  std::vector<std::string> vars(wrt.begin(), wrt.end());
  for (const auto& [name, _] : env) {
    if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
  }
  return vars;
}

std::vector<double> coordinates(const Env& env, const std::vector<std::string>& vars) {
  std::vector<double> point(vars.size(), 0.0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto it = env.find(vars[i]);
    // A differentiation variable that is not bound can only appear as "unused".
    point[i] = it == env.end() ? 0.0 : it->second;
  }
  return point;
}

}  // namespace

double eval(const Expr& e, const Env& env) {
  const auto vars = ordering(env, {});
  const BoundExpr bound(e, vars);
  const auto point = coordinates(env, vars);
  return bound(point);
}

ValueWithPartials eval_with_partials(const Expr& e, const Env& env,
                                     std::span<const std::string> wrt) {
  for (const auto& w : wrt) {
    if (!env.contains(w) && e.free_variables().contains(w)) {
      throw EvalError(EvalError::Kind::unbound_variable, w, "unbound variable '" + w + "'");
    }
  }
  std::vector<std::string> bound_vars;
  for (const auto& w : wrt) {
    if (std::find(bound_vars.begin(), bound_vars.end(), w) == bound_vars.end()) bound_vars.push_back(w);
  }
  const std::size_t nd = bound_vars.size();
  for (const auto& [name, _] : env) {
    if (std::find(bound_vars.begin(), bound_vars.end(), name) == bound_vars.end()) {
      bound_vars.push_back(name);
    }
  }
  const BoundExpr bound(e, bound_vars);
  const auto point = coordinates(env, bound_vars);
  std::vector<double> grad(nd, 0.0);
  ValueWithPartials out;
  out.value = bound(point, grad);
  out.partials.reserve(wrt.size());
  for (const auto& w : wrt) {
    const auto idx = static_cast<std::size_t>(std::find(bound_vars.begin(), bound_vars.end(), w) -
                                              bound_vars.begin());
    out.partials.push_back(grad[idx]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic first derivative

Expr derivative(const Expr& e, std::string_view var) {
  if (e.is_constant()) return Expr(0.0);
  switch (e.kind()) {
    case Expr::Kind::number: return Expr(0.0);
    case Expr::Kind::variable: return Expr(e.name() == var ? 1.0 : 0.0);
    case Expr::Kind::negate: return -derivative(e.operand(0), var);
    case Expr::Kind::binary: {
      const Expr& u = e.operand(0);
      const Expr& v = e.operand(1);
      switch (e.op()) {
        case BinaryOperator::add: return derivative(u, var) + derivative(v, var);
        case BinaryOperator::sub: return derivative(u, var) - derivative(v, var);
        case BinaryOperator::mul: return derivative(u, var) * v + u * derivative(v, var);
        case BinaryOperator::div:
          return (derivative(u, var) * v - u * derivative(v, var)) / pow(v, Expr(2.0));
        case BinaryOperator::pow:
          if (v.is_constant()) return v * pow(u, v - Expr(1.0)) * derivative(u, var);
          return e * (derivative(v, var) * log(u) + v * derivative(u, var) / u);
      }
      break;
    }
    case Expr::Kind::call: {
      const Expr& u = e.operand(0);
      const Expr du = derivative(u, var);
      switch (e.function()) {
        case UnaryFunction::sin: return cos(u) * du;
        case UnaryFunction::cos: return -sin(u) * du;
        case UnaryFunction::tan: return du / pow(cos(u), Expr(2.0));
        case UnaryFunction::exp: return e * du;
        case UnaryFunction::log: return du / u;
        case UnaryFunction::sqrt: return du / (Expr(2.0) * e);
      }
      break;
    }
  }
  return Expr(0.0);
}

}  // namespace affhj
