#include "qrubin/coeff_expr.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>

namespace qrubin {

struct CoeffExpr::Node {
  std::function<Complex(double)> eval;
};

namespace {

using NodePtr = std::shared_ptr<const CoeffExpr::Node>;

NodePtr make(std::function<Complex(double)> f) {
  return std::make_shared<CoeffExpr::Node>(CoeffExpr::Node{std::move(f)});
}

class Parser {
 public:
  Parser(const std::string& s, double q) : s_(s), q_(q) {}

  NodePtr run() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }
  bool uses_x() const { return uses_x_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("coefficient \"" + s_ + "\": " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](double x) { return lhs->eval(x) + rhs->eval(x); });
      } else if (eat('-')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](double x) { return lhs->eval(x) - rhs->eval(x); });
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](double x) { return lhs->eval(x) * rhs->eval(x); });
      } else if (eat('/')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](double x) { return lhs->eval(x) / rhs->eval(x); });
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) {
      NodePtr n = unary();
      return make([n](double x) { return -n->eval(x); });
    }
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!eat('^')) return base;
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("integer exponent expected");
    const int e = std::stoi(s_.substr(start, pos_ - start));
    return make([base, e, neg](double x) {
      Complex b = base->eval(x), r = 1.0;
      for (int i = 0; i < e; ++i) r *= b;
      return neg ? 1.0 / r : r;
    });
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("operand expected");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("')' expected");
      return n;
    }
    if (c == 'x') {
      ++pos_;
      uses_x_ = true;
      return make([](double x) { return Complex(x); });
    }
    if (c == 'q') {
      ++pos_;
      const double q = q_;
      return make([q](double) { return Complex(q); });
    }
    if (c == 'i') {
      ++pos_;
      return make([](double) { return Complex(0.0, 1.0); });
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("number expected");
      pos_ += static_cast<std::size_t>(end - begin);
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return make([v](double) { return Complex(0.0, v); });
      }
      return make([v](double) { return Complex(v); });
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  double q_;
  std::size_t pos_ = 0;
  bool uses_x_ = false;
};

}  // namespace

CoeffExpr CoeffExpr::parse(const std::string& text, double q) {
  Parser p(text, q);
  CoeffExpr e;
  e.root_ = p.run();
  e.text_ = text;
  e.uses_x_ = p.uses_x();
  return e;
}

Complex CoeffExpr::operator()(double x) const { return root_->eval(x); }

Complex parse_complex(const std::string& text, double q) {
  const CoeffExpr e = CoeffExpr::parse(text, q);
  if (e.depends_on_x()) throw ParseError("\"" + text + "\" must be a constant");
  return e(0.0);
}

}  // namespace qrubin
