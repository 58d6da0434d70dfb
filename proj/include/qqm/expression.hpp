#pragma once

// Tiny arithmetic expression language over one variable x:
//   numbers, x, pi, e, + - * / ^ (right-associative), unary minus,
//   parentheses, sin(...), cos(...), exp(...).

#include <memory>
#include <string>

namespace qqm {

class Expression {
 public:
  /// Throws ConfigError with the offending position on malformed input.
  static Expression parse(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace qqm
