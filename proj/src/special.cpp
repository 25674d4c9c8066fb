#include "dekohere/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace dekohere::special {

namespace {

constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

Complex e1_series(Complex z) {
    // -γ - ln z - Σ_{k>=1} (-z)^k / (k k!)
    Complex term = 1.0;
    Complex sum = 0.0;
    for (int k = 1; k < 400; ++k) {
        term *= -z / static_cast<double>(k);
        const Complex add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(z) - sum;
}

Complex e1_continued_fraction(Complex z) {
    // E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz.
    constexpr double tiny = 1e-300;
    Complex b = z + 1.0;
    Complex c = 1.0 / tiny;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const Complex del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            return h * std::exp(-z);
        }
    }
    throw NumericalError("expint_e1: continued fraction did not converge at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
}

GaussRule expand(const std::vector<double>& abscissa, const std::vector<double>& weights,
                 std::vector<double>& nodes_out, std::vector<double>& weights_out) {
    // Boost stores the non-negative half of a symmetric rule.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        if (abscissa[i] == 0.0) {
            nodes_out.push_back(0.0);
            weights_out.push_back(weights[i]);
            continue;
        }
        nodes_out.push_back(-abscissa[i]);
        weights_out.push_back(weights[i]);
        nodes_out.push_back(abscissa[i]);
        weights_out.push_back(weights[i]);
    }
    return GaussRule{nodes_out, weights_out};
}

} // namespace

Complex expint_e1(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw ParameterError("expint_e1: argument on the branch cut (real, <= 0)");
    }
    // The continued fraction stalls near the negative real axis, where the
    // series terms share a sign and sum without cancellation.
    if (std::abs(z) <= 1.0 || (z.real() < 0.0 && std::abs(z.imag()) < 4.0)) return e1_series(z);
    return e1_continued_fraction(z);
}

GaussRule gauss_legendre_8() {
    using rule = boost::math::quadrature::gauss<double, 8>;
    static std::vector<double> nodes, weights;
    static const GaussRule expanded = expand(rule::abscissa(), rule::weights(), nodes, weights);
    return expanded;
}

GaussRule gauss_legendre_16() {
    using rule = boost::math::quadrature::gauss<double, 16>;
    static std::vector<double> nodes, weights;
    static const GaussRule expanded = expand(rule::abscissa(), rule::weights(), nodes, weights);
    return expanded;
}

} // namespace dekohere::special
