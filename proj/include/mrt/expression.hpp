#pragma once

#include <memory>
#include <string>

#include "mrt/common.hpp"

namespace mrt {

// Tiny arithmetic-expression evaluator for custom drift/noise entries in the
// config file. Supported: + - * / ^, unary minus, parentheses, numeric
// literals, the constant pi, the functions sin cos exp sqrt, and the two
// coordinate variables (x,y for Cartesian models, theta,r for polar ones).
class Expression {
  public:
    static Expression parse(const std::string& text);

    double eval(double v1, double v2) const;
    double eval(const Point2& p) const { return eval(p.c1, p.c2); }

    const std::string& text() const { return text_; }

    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;
    Expression(const Expression&);
    Expression& operator=(const Expression&);
    ~Expression();

  private:
    struct Node;
    Expression();

    std::unique_ptr<Node> root_;
    std::string text_;
};

}  // namespace mrt
