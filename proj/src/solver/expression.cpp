#include "sqg/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "sqg/error.hpp"

namespace sqg {

struct Expression::Node {
    enum class Kind { number, var_x, var_y, var_r, neg, add, sub, mul, div, pow, call };
    Kind kind = Kind::number;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(double x, double y) const {
        switch (kind) {
        case Kind::number: return value;
        case Kind::var_x: return x;
        case Kind::var_y: return y;
        case Kind::var_r: return std::hypot(x, y);
        case Kind::neg: return -a->eval(x, y);
        case Kind::add: return a->eval(x, y) + b->eval(x, y);
        case Kind::sub: return a->eval(x, y) - b->eval(x, y);
        case Kind::mul: return a->eval(x, y) * b->eval(x, y);
        case Kind::div: return a->eval(x, y) / b->eval(x, y);
        case Kind::pow: return std::pow(a->eval(x, y), b->eval(x, y));
        case Kind::call: return fn(a->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr a = {}, NodePtr b = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }
double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tanh(double v) { return std::tanh(v); }

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression: " + what + " at column " + std::to_string(pos_ + 1) +
                          " in '" + std::string(s_) + "'");
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
        NodePtr n = term();
        while (true) {
            if (accept('+')) n = make(Kind::add, n, term());
            else if (accept('-')) n = make(Kind::sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        while (true) {
            if (accept('*')) n = make(Kind::mul, n, unary());
            else if (accept('/')) n = make(Kind::div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected character");
    }

    NodePtr literal() {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc{}) fail("bad number");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return number(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view id = s_.substr(start, pos_ - start);
        if (id == "x") return make(Kind::var_x);
        if (id == "y") return make(Kind::var_y);
        if (id == "r") return make(Kind::var_r);
        if (id == "pi") return number(std::numbers::pi);
        if (id == "e") return number(std::numbers::e);

        static const std::vector<std::pair<std::string_view, double (*)(double)>> functions = {
            {"exp", fn_exp}, {"log", fn_log}, {"sqrt", fn_sqrt}, {"abs", fn_abs},
            {"sin", fn_sin}, {"cos", fn_cos}, {"tanh", fn_tanh}};
        for (const auto& [name, fn] : functions) {
            if (id != name) continue;
            if (!accept('(')) fail("expected '(' after " + std::string(name));
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::call;
            n->fn = fn;
            n->a = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
    }
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = std::string(text);
    return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace sqg
