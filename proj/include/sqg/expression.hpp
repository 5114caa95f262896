#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace sqg {

/// Arithmetic expression in x, y and r = |(x, y)|.
///
/// Grammar: + - * / ^, parentheses, numbers, the constants pi and e, and the
/// functions exp, log, sqrt, abs, sin, cos, tanh. '^' binds tighter than
/// unary minus and associates to the right.
class Expression {
public:
    /// Throws ConfigError naming the offending column.
    static Expression parse(std::string_view text);

    double operator()(double x, double y) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace sqg
