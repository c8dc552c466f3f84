#pragma once

#include <memory>
#include <string>

#include "qrubin/qsymbols.hpp"

namespace qrubin {

/// Coefficient expression in x: complex literals (2, 1.5e-3, 2i, i), the symbols
/// x and q, + - * /, integer powers ^n and parentheses.
class CoeffExpr {
 public:
  /// Throws ParseError with the offending column.
  static CoeffExpr parse(const std::string& text, double q);

  Complex operator()(double x) const;
  bool depends_on_x() const { return uses_x_; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_x_ = false;
};

/// A constant expression (no x), e.g. "1", "-0.5+2i", "1/q".
Complex parse_complex(const std::string& text, double q);

}  // namespace qrubin
