#include "dekohere/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dekohere {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Panels that double in width from `lo` until they reach `cap`, then stay uniform.
template <class F>
Complex graded_sum(double lo, double hi, double first, double cap, F&& g) {
    const auto rule = special::gauss_legendre_16();
    Complex sum = 0.0;
    double a = lo;
    double w = std::min(first, cap);
    while (a < hi) {
        const double b = std::min(a + w, hi);
        sum += special::integrate_panel(rule, a, b, g);
        a = b;
        w = std::min(2.0 * w, cap);
    }
    return sum;
}

double relative(Complex got, Complex want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string label(const char* what, double x) {
    std::ostringstream out;
    out.precision(6);
    out << what << "(" << x << ")";
    return out.str();
}

} // namespace

Complex spectral_alpha(const NoiseModel& model, double dt) {
    return std::visit(
        overloaded{
            [](const OrnsteinUhlenbeck&) -> Complex {
                throw ParameterError("spectral_alpha: OU kernel has no spectral form here");
            },
            [&](const SpinBoson& m) {
                const double lam = m.lambda_uv;
                // ω^p e^{-ω/Λ} is below 1e-16 of its peak past ω ≈ (p + 45)Λ.
                const double hi = (m.p + 45.0) * lam;
                const double cap = std::min(0.25 * lam, dt != 0.0 ? 0.5 / std::abs(dt) : lam);
                auto g = [&](double w) {
                    return std::pow(w, m.p) * std::exp(-w / lam) * std::polar(1.0, -w * dt);
                };
                return model.strength() * graded_sum(0.0, hi, cap, cap, g);
            },
            [&](const OneOverF& m) {
                const double lam = m.lambda_uv;
                const double hi = 45.0 * lam;
                const double cap = std::min(0.25 * lam, dt != 0.0 ? 0.5 / std::abs(dt) : lam);
                auto g = [&](double w) { return std::exp(-w / lam) / w * std::polar(1.0, -w * dt); };
                return model.strength() * graded_sum(m.lambda_ir, hi, 0.5 * m.lambda_ir, cap, g);
            },
        },
        model.variant());
}

std::vector<SelfTestResult> kernel_self_tests(const NoiseModel& model, std::optional<double> period,
                                              double t_final) {
    std::vector<SelfTestResult> out;
    const double scale = model.time_scale();
    const double probes[] = {0.0, 0.3 * scale, scale, 4.0 * scale};

    double sym = 0.0;
    for (double dt : probes) sym = std::max(sym, std::abs(model.alpha(-dt) - std::conj(model.alpha(dt))));
    out.push_back({"kernel_symmetry", sym, 1e-12 * std::max(1.0, std::abs(model.alpha(0.0)))});

    if (!std::holds_alternative<OrnsteinUhlenbeck>(model.variant()) && model.strength() > 0.0) {
        for (double dt : probes) {
            out.push_back({label("closed_form_vs_spectral", dt),
                           relative(model.alpha(dt), spectral_alpha(model, dt)), 1e-7});
        }
    }

    for (double x : {scale, 10.0 * scale, t_final}) {
        const Complex quad = graded_sum(0.0, x, scale / 8.0, scale, [&](double u) { return model.alpha(u); });
        const double err = std::abs(model.alpha_integral(x) - quad) / std::max(std::abs(quad), 1e-12);
        out.push_back({label("antiderivative", x), err, 1e-9});
    }

    if (period) {
        for (double t : {1.3 * *period, t_final}) {
            const Complex a = renormalized_alpha_bb(model, t, *period);
            const Complex b = renormalized_alpha_bb_quadrature(model, t, *period);
            const double err = std::abs(a - b) / std::max(std::abs(model.alpha_integral(t)), 1e-12);
            out.push_back({label("bang_bang_segments_vs_quadrature", t), err, 1e-9});
        }
    }
    return out;
}

} // namespace dekohere
