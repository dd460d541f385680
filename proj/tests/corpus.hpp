#pragma once

// Smooth expressions in x, all defined on [2, 100] with room for a 1e-5
// finite-difference step.

#include <array>
#include <string_view>

namespace corpus {

inline constexpr std::array<std::string_view, 50> smooth = {
    "x",
    "x^2",
    "x^3 - 2*x",
    "3*x^2 + 2*x + 1",
    "1/x",
    "x^(-2)",
    "sqrt(x)",
    "x^0.5*ln(x)",
    "ln(x)",
    "ln(ln(x))",
    "ln(x)^2",
    "sqrt(ln(x))",
    "1/(1+ln(x))",
    "exp(-x)",
    "exp(x/50)",
    "exp(sqrt(x))",
    "sin(x)",
    "cos(x)",
    "sin(x)/ln(x)",
    "x^(sin(x)/ln(x))",
    "sin(ln(x))",
    "cos(sqrt(x))",
    "exp(sin(x))",
    "x*exp(-x/10)",
    "pow(x, 1.5)",
    "pow(2, x/10)",
    "pow(x, ln(x)/10)",
    "abs(x - 1)",
    "abs(sin(x)) + 2",
    "x^(x/50)",
    "(x+1)/(x-1)",
    "(x^2+1)/(x^2+2)",
    "ln(x+2)",
    "-x^2",
    "-(x+3)*ln(x)",
    "2^x/2^x + ln(x)",
    "e^(x/40)",
    "pi*x",
    "sqrt(x^2+1) - x",
    "ln(1+1/x)",
    "x*ln(x) - x",
    "1/sqrt(x)",
    "exp(-ln(x)^2/10)",
    "sin(x)*cos(x)",
    "sin(x)^2 + cos(x)^2",
    "ln(x)/x",
    "x^(1/3)",
    "exp(ln(x)/2)",
    "ln(exp(x/20) + 1)",
    "(2*x+1)^3/x^2",
};

}  // namespace corpus
