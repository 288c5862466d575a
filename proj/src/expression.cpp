#include "pacbayes/expression.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace pacbayes {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(double x) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Constant : Node {
  double v;
  explicit Constant(double v) : v(v) {}
  double eval(double) const override { return v; }
};

struct Variable : Node {
  double eval(double x) const override { return x; }
};

struct Unary : Node {
  double (*fn)(double);
  NodePtr arg;
  Unary(double (*fn)(double), NodePtr arg) : fn(fn), arg(std::move(arg)) {}
  double eval(double x) const override { return fn(arg->eval(x)); }
};

struct Binary : Node {
  char op;
  NodePtr lhs, rhs;
  Binary(char op, NodePtr lhs, NodePtr rhs) : op(op), lhs(std::move(lhs)), rhs(std::move(rhs)) {}
  double eval(double x) const override {
    const double a = lhs->eval(x), b = rhs->eval(x);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  }
};

double negate(double v) { return -v; }

const std::map<std::string, double (*)(double)>& functions() {
  static const std::map<std::string, double (*)(double)> table{
      {"exp", [](double v) { return std::exp(v); }},     {"log", [](double v) { return std::log(v); }},
      {"ln", [](double v) { return std::log(v); }},      {"sqrt", [](double v) { return std::sqrt(v); }},
      {"abs", [](double v) { return std::abs(v); }},     {"log1p", [](double v) { return std::log1p(v); }},
      {"expm1", [](double v) { return std::expm1(v); }}, {"cosh", [](double v) { return std::cosh(v); }},
      {"sinh", [](double v) { return std::sinh(v); }},   {"tanh", [](double v) { return std::tanh(v); }},
  };
  return table;
}

class Parser {
 public:
  Parser(const std::string& text, const std::string& variable) : s_(text), var_(variable) {}

  NodePtr parse() {
    auto node = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = std::make_shared<Binary>('+', lhs, term());
      else if (accept('-'))
        lhs = std::make_shared<Binary>('-', lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = std::make_shared<Binary>('*', lhs, unary());
      else if (accept('/'))
        lhs = std::make_shared<Binary>('/', lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return std::make_shared<Unary>(negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return std::make_shared<Binary>('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      auto inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      return std::make_shared<Constant>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == var_) return std::make_shared<Variable>();
      if (name == "pi") return std::make_shared<Constant>(std::numbers::pi);
      if (name == "e") return std::make_shared<Constant>(std::numbers::e);
      const auto it = functions().find(name);
      if (it == functions().end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      auto arg = expr();
      if (!accept(')')) fail("expected ')'");
      return std::make_shared<Unary>(it->second, arg);
    }
    fail("unexpected character");
  }

  const std::string& s_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text, const std::string& variable) {
  NodePtr root = Parser(text, variable).parse();
  return [root](double x) { return root->eval(x); };
}

}  // namespace pacbayes
