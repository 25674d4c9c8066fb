// special.hpp — Complex exponential integral and Gauss-Legendre panels

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <type_traits>

#include "dekohere/types.hpp"

namespace dekohere::special {

// E1(z) = ∫_z^∞ e^{-w}/w dw on the principal branch. Power series for
// |z| <= 1, Lentz continued fraction otherwise. Throws ParameterError on the
// branch cut (z real and <= 0).
Complex expint_e1(Complex z);

// Nodes and weights of an N-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::span<const double> nodes;
    std::span<const double> weights;
};

GaussRule gauss_legendre_8();
GaussRule gauss_legendre_16();

// ∫_a^b g(x) dx with a single Gauss-Legendre panel.
template <class F>
auto integrate_panel(const GaussRule& rule, double a, double b, F&& g) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    using Result = std::decay_t<decltype(g(mid))>;
    Result sum = Result(rule.weights[0] * g(mid + half * rule.nodes[0]));
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * g(mid + half * rule.nodes[i]);
    }
    return Result(sum * half);
}

} // namespace dekohere::special
