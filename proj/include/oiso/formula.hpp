#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace oiso {

/// A real function of one variable written as an s-expression, e.g.
/// "(sin (/ 1 t))" or "(/ 1 (+ (* 2 pi k) (/ pi 2)))".
///
/// Operators: + - * / (n-ary where sensible), neg, sin, cos, tan, exp, log,
/// sqrt, abs, pow, min, max. Atoms: numbers, the constant pi, and one free
/// variable (any other symbol; all occurrences must agree).
class Formula {
public:
    static Formula parse(std::string_view text);

    double operator()(double x) const;
    const std::string& text() const noexcept { return text_; }
    /// The free variable's name, empty for constant formulas.
    const std::string& variable() const noexcept { return variable_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::string variable_;
};

} // namespace oiso
