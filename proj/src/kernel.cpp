#include "dekohere/kernel.hpp"

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

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string("noise.") + field + " must be finite and > 0");
    }
}

void require_strength(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw ParameterError("noise.strength must be finite and >= 0");
    }
}

double factorial(int p) { return p == 1 ? 1.0 : 6.0; }

void require_period(double period) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw ParameterError("renormalized kernel: T_c must be finite and > 0");
    }
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ParameterError("renormalized kernel: t must be finite and >= 0");
    }
}

} // namespace

NoiseModel NoiseModel::ornstein_uhlenbeck(double tau, double strength) {
    require_positive(tau, "tau");
    require_strength(strength);
    return NoiseModel(OrnsteinUhlenbeck{tau}, strength);
}

NoiseModel NoiseModel::spin_boson(int p, double lambda_uv, double strength) {
    if (p != 1 && p != 3) throw ParameterError("noise.p must be 1 (ohmic) or 3 (supra-ohmic)");
    require_positive(lambda_uv, "lambda_uv");
    require_strength(strength);
    return NoiseModel(SpinBoson{p, lambda_uv}, strength);
}

NoiseModel NoiseModel::one_over_f(double lambda_uv, double lambda_ir, double strength) {
    require_positive(lambda_uv, "lambda_uv");
    require_positive(lambda_ir, "lambda_ir");
    if (!(lambda_ir < lambda_uv)) throw ParameterError("noise.lambda_ir must be < noise.lambda_uv");
    require_strength(strength);
    return NoiseModel(OneOverF{lambda_uv, lambda_ir}, strength);
}

double NoiseModel::time_scale() const {
    return std::visit(overloaded{
                          [](const OrnsteinUhlenbeck& m) { return m.tau; },
                          [](const SpinBoson& m) { return 1.0 / m.lambda_uv; },
                          [](const OneOverF& m) { return 1.0 / m.lambda_uv; },
                      },
                      v_);
}

std::string NoiseModel::describe() const {
    std::ostringstream out;
    out.precision(17);
    std::visit(overloaded{
                   [&](const OrnsteinUhlenbeck& m) { out << "ou(tau=" << m.tau; },
                   [&](const SpinBoson& m) {
                       out << (m.p == 1 ? "ohmic" : "supra_ohmic") << "(lambda_uv=" << m.lambda_uv;
                   },
                   [&](const OneOverF& m) {
                       out << "one_over_f(lambda_uv=" << m.lambda_uv << ", lambda_ir=" << m.lambda_ir;
                   },
               },
               v_);
    if (strength_ != 1.0) out << ", strength=" << strength_;
    out << ")";
    return out.str();
}

Complex NoiseModel::alpha(double dt) const {
    if (!std::isfinite(dt)) throw ParameterError("eval_kernel: dt must be finite");
    if (strength_ == 0.0) return 0.0;
    if (dt < 0.0) return strength_ * std::conj(alpha_positive(-dt));
    return strength_ * alpha_positive(dt);
}

Complex NoiseModel::alpha_positive(double dt) const {
    return std::visit(
        overloaded{
            [dt](const OrnsteinUhlenbeck& m) { return Complex(std::exp(-dt / m.tau) / (2.0 * m.tau), 0.0); },
            [dt](const SpinBoson& m) {
                // Γ(p+1) / (a + i dt)^{p+1}
                const Complex inv = 1.0 / Complex(1.0 / m.lambda_uv, dt);
                Complex pw = inv;
                for (int k = 0; k < m.p; ++k) pw *= inv;
                return factorial(m.p) * pw;
            },
            [dt](const OneOverF& m) {
                return special::expint_e1(m.lambda_ir * Complex(1.0 / m.lambda_uv, dt));
            },
        },
        v_);
}

Complex NoiseModel::alpha_integral(double x) const {
    if (!std::isfinite(x)) throw ParameterError("alpha_integral: x must be finite");
    if (strength_ == 0.0 || x == 0.0) return 0.0;
    if (x < 0.0) return -strength_ * std::conj(alpha_integral_positive(-x));
    return strength_ * alpha_integral_positive(x);
}

Complex NoiseModel::alpha_integral_positive(double x) const {
    return std::visit(
        overloaded{
            [x](const OrnsteinUhlenbeck& m) { return Complex(-0.5 * std::expm1(-x / m.tau), 0.0); },
            [x](const SpinBoson& m) {
                // Γ(p+1) a^{-p} (y/p) Σ_{k<p} w^k / w^p with w = 1 + i y, y = x/a.
                // Written this way to avoid cancelling (a+ix)^{-p} against a^{-p}.
                const double a = 1.0 / m.lambda_uv;
                const double y = x / a;
                const Complex w(1.0, y);
                Complex wk = 1.0;
                Complex sum = 0.0;
                for (int k = 0; k < m.p; ++k) {
                    sum += wk;
                    wk *= w;
                }
                return factorial(m.p) * std::pow(a, -m.p) * (y / m.p) * sum / wk;
            },
            [x](const OneOverF& m) {
                // d/dx [z E1(z) - e^{-z}] = i c E1(z) for z = c (a + i x).
                const double c = m.lambda_ir;
                const double a = 1.0 / m.lambda_uv;
                auto g = [](Complex z) { return z * special::expint_e1(z) - std::exp(-z); };
                const Complex z0(c * a, 0.0);
                const Complex z1 = c * Complex(a, x);
                return (g(z1) - g(z0)) / Complex(0.0, c);
            },
        },
        v_);
}

KernelValue eval_kernel(const NoiseModel& model, double dt) {
    const Complex a = model.alpha(dt);
    return KernelValue{a.real(), -a.imag()};
}

Complex renormalized_alpha_bb(const NoiseModel& model, double t, double period) {
    require_period(period);
    require_time(t);
    const double half = 0.5 * period;
    Complex sum = 0.0;
    double sign = 1.0;
    // Segment k covers s ∈ [k·half, (k+1)·half); with u = t - s it maps to
    // u ∈ [t - (k+1)·half, t - k·half].
    for (long long k = 0; static_cast<double>(k) * half < t; ++k) {
        const double upper = t - static_cast<double>(k) * half;
        const double lower = std::max(0.0, t - static_cast<double>(k + 1) * half);
        sum += sign * (model.alpha_integral(upper) - model.alpha_integral(lower));
        sign = -sign;
    }
    return sum;
}

Complex renormalized_alpha_bb_quadrature(const NoiseModel& model, double t, double period) {
    require_period(period);
    require_time(t);
    if (t == 0.0) return 0.0;
    const double half = 0.5 * period;
    const double cap = 0.25 * half;
    std::vector<double> edges{0.0};
    for (double w = std::min(model.time_scale() / 8.0, cap), e = w; e < t; w = std::min(2.0 * w, cap), e += w) {
        edges.push_back(e);
    }
    for (long long k = 1; static_cast<double>(k) * half < t; ++k) {
        edges.push_back(t - static_cast<double>(k) * half);
    }
    edges.push_back(t);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const SwitchingFunction f(period);
    const auto rule = special::gauss_legendre_16();
    Complex sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        if (!(b > a)) continue;
        const double sign = f(t - 0.5 * (a + b));
        sum += sign * special::integrate_panel(rule, a, b, [&](double u) { return model.alpha(u); });
    }
    return sum;
}

double renormalized_mu_bb(const NoiseModel& model, double t, double period) {
    return renormalized_alpha_bb(model, t, period).real();
}

double renormalized_nu_bb(const NoiseModel& model, double t, double period) {
    return -renormalized_alpha_bb(model, t, period).imag();
}

ContinuousRenormalization renormalized_alpha_continuous(const NoiseModel& model, double t,
                                                        const Envelope& env) {
    require_time(t);
    if (t == 0.0) return {0.0, 0.0};
    MemoryQuadrature quad(model, env.period() / 64.0);
    const auto [kp, km] = quad.phase_moments(t, [&](double s) { return 2.0 * env.phase(s); });
    // With K± = ∫α e^{±2iA(s)}: ∫μ e^{2iA} = (K+ + conj K-)/2, ∫ν e^{2iA} = (conj K- - K+)/(2i).
    const Complex back = std::polar(1.0, -2.0 * env.phase(t));
    const Complex mu_int = 0.5 * (kp + std::conj(km));
    const Complex nu_int = (std::conj(km) - kp) / Complex(0.0, 2.0);
    return {4.0 * back * mu_int, 4.0 * back * nu_int};
}

MemoryQuadrature::MemoryQuadrature(NoiseModel model, double max_panel)
    : model_(std::move(model)), max_panel_(max_panel) {
    if (!(max_panel > 0.0) || !std::isfinite(max_panel)) {
        throw ParameterError("MemoryQuadrature: panel width must be finite and > 0");
    }
    next_width_ = std::min(model_.time_scale() / 8.0, max_panel_);
}

void MemoryQuadrature::extend_to(double t) {
    const auto rule = special::gauss_legendre_8();
    while (edges_.back() < t) {
        const double a = edges_.back();
        const double b = a + next_width_;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = mid + half * rule.nodes[i];
            nodes_.push_back(u);
            weighted_alpha_.push_back(rule.weights[i] * half * model_.alpha(u));
        }
        edges_.push_back(b);
        next_width_ = std::min(2.0 * next_width_, max_panel_);
    }
}

} // namespace dekohere
