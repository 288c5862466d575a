#pragma once

#include <functional>
#include <string>

namespace pacbayes {

// Compiles an arithmetic expression in one variable.
// Grammar: + - * / ^ (right-associative), unary minus, parentheses, numbers,
// constants pi and e, and the functions exp log ln sqrt abs log1p expm1
// cosh sinh tanh. Throws std::invalid_argument with the offending position.
std::function<double(double)> compile_expression(const std::string& text, const std::string& variable = "lambda");

}  // namespace pacbayes
