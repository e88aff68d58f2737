#include "mrt/expression.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace mrt {

namespace {

enum class Op { Const, Var1, Var2, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt };

}  // namespace

struct Expression::Node {
    Op op = Op::Const;
    double value = 0.0;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;

    std::unique_ptr<Node> clone() const {
        auto n = std::make_unique<Node>();
        n->op = op;
        n->value = value;
        if (lhs) n->lhs = lhs->clone();
        if (rhs) n->rhs = rhs->clone();
        return n;
    }
};

namespace {

using NodePtr = std::unique_ptr<Expression::Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_unique<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_unique<Expression::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        auto n = parse_sum();
        skip_ws();
        if (pos_ != s_.size())
            throw ConfigError("expression: trailing input at '" + s_.substr(pos_) + "'");
        return n;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        auto lhs = parse_product();
        for (;;) {
            if (eat('+'))
                lhs = make_node(Op::Add, std::move(lhs), parse_product());
            else if (eat('-'))
                lhs = make_node(Op::Sub, std::move(lhs), parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make_node(Op::Mul, std::move(lhs), parse_unary());
            else if (eat('/'))
                lhs = make_node(Op::Div, std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make_node(Op::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    // '^' binds tighter than unary minus and associates right.
    NodePtr parse_power() {
        auto base = parse_atom();
        if (eat('^')) return make_node(Op::Pow, std::move(base), parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ConfigError("expression: unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        throw ConfigError(std::string("expression: unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t end = 0;
        double v = std::stod(s_.substr(pos_), &end);
        pos_ += end;
        return make_const(v);
    }

    NodePtr parse_name() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "pi") return make_const(kPi);
        if (name == "x" || name == "theta") return make_node(Op::Var1);
        if (name == "y" || name == "r") return make_node(Op::Var2);
        Op fn;
        if (name == "sin")
            fn = Op::Sin;
        else if (name == "cos")
            fn = Op::Cos;
        else if (name == "exp")
            fn = Op::Exp;
        else if (name == "sqrt")
            fn = Op::Sqrt;
        else
            throw ConfigError("expression: unknown name '" + name + "'");
        if (!eat('(')) throw ConfigError("expression: expected '(' after " + name);
        auto arg = parse_sum();
        if (!eat(')')) throw ConfigError("expression: missing ')' after " + name + " argument");
        return make_node(fn, std::move(arg));
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, double v1, double v2) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var1: return v1;
        case Op::Var2: return v2;
        case Op::Add: return eval_node(*n.lhs, v1, v2) + eval_node(*n.rhs, v1, v2);
        case Op::Sub: return eval_node(*n.lhs, v1, v2) - eval_node(*n.rhs, v1, v2);
        case Op::Mul: return eval_node(*n.lhs, v1, v2) * eval_node(*n.rhs, v1, v2);
        case Op::Div: return eval_node(*n.lhs, v1, v2) / eval_node(*n.rhs, v1, v2);
        case Op::Pow: return std::pow(eval_node(*n.lhs, v1, v2), eval_node(*n.rhs, v1, v2));
        case Op::Neg: return -eval_node(*n.lhs, v1, v2);
        case Op::Sin: return std::sin(eval_node(*n.lhs, v1, v2));
        case Op::Cos: return std::cos(eval_node(*n.lhs, v1, v2));
        case Op::Exp: return std::exp(eval_node(*n.lhs, v1, v2));
        case Op::Sqrt: return std::sqrt(eval_node(*n.lhs, v1, v2));
    }
    return 0.0;
}

}  // namespace

Expression::Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

Expression::Expression(const Expression& other) : text_(other.text_) {
    if (other.root_) root_ = other.root_->clone();
}

Expression& Expression::operator=(const Expression& other) {
    if (this != &other) {
        text_ = other.text_;
        root_ = other.root_ ? other.root_->clone() : nullptr;
    }
    return *this;
}

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).run();
    return e;
}

double Expression::eval(double v1, double v2) const {
    return eval_node(*root_, v1, v2);
}

}  // namespace mrt
