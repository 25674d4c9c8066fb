// kernel.hpp — Bath correlation functions α(t,s) = μ - iν and their
// bang-bang / continuous renormalizations.

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dekohere/pulse.hpp"
#include "dekohere/special.hpp"
#include "dekohere/types.hpp"

namespace dekohere {

// α(Δ) = e^{-|Δ|/τ} / (2τ)
struct OrnsteinUhlenbeck {
    double tau;
};

// J(ω) = ω^p e^{-ω/Λ_UV}
struct SpinBoson {
    int p;
    double lambda_uv;
};

// J(ω) = e^{-ω/Λ_UV} / ω on ω > Λ_IR
struct OneOverF {
    double lambda_uv;
    double lambda_ir;
};

class NoiseModel {
public:
    using Variant = std::variant<OrnsteinUhlenbeck, SpinBoson, OneOverF>;

    static NoiseModel ornstein_uhlenbeck(double tau, double strength = 1.0);
    static NoiseModel spin_boson(int p, double lambda_uv, double strength = 1.0);
    static NoiseModel one_over_f(double lambda_uv, double lambda_ir, double strength = 1.0);

    const Variant& variant() const { return v_; }
    // Overall multiplier on α; 0 switches the bath off.
    double strength() const { return strength_; }
    // Width of the correlation peak around Δ = 0.
    double time_scale() const;
    std::string describe() const;

    // α(Δ) with α(-Δ) = conj(α(Δ)).
    Complex alpha(double dt) const;
    // ∫_0^x α(u) du in closed form.
    Complex alpha_integral(double x) const;

private:
    NoiseModel(Variant v, double strength) : v_(v), strength_(strength) {}
    Complex alpha_positive(double dt) const;
    Complex alpha_integral_positive(double x) const;

    Variant v_;
    double strength_;
};

struct KernelValue {
    double mu;
    double nu;
    Complex alpha() const { return {mu, -nu}; }
};

KernelValue eval_kernel(const NoiseModel& model, double dt);

// ∫_0^t α(t,s) f(s) ds from closed-form segment antiderivatives.
Complex renormalized_alpha_bb(const NoiseModel& model, double t, double period);
// Same integral by Gauss-Legendre (16 points per panel) on panels that never
// straddle a switch and are graded toward s = t.
Complex renormalized_alpha_bb_quadrature(const NoiseModel& model, double t, double period);

double renormalized_mu_bb(const NoiseModel& model, double t, double period);
double renormalized_nu_bb(const NoiseModel& model, double t, double period);

// μ̃(t) = 4 e^{-2iA(t)} ∫_0^t μ(t,s) e^{2iA(s)} ds, ν̃ likewise.
struct ContinuousRenormalization {
    Complex mu_tilde;
    Complex nu_tilde;
};

ContinuousRenormalization renormalized_alpha_continuous(const NoiseModel& model, double t,
                                                        const Envelope& env);

// Composite Gauss-Legendre rule for ∫_0^t α(u) w(t-u) du. Panels are graded
// geometrically from the kernel time scale near u = 0 up to `max_panel`;
// kernel values on complete panels are cached so repeated evaluations at
// increasing t only pay for the control weights.
class MemoryQuadrature {
public:
    MemoryQuadrature(NoiseModel model, double max_panel);

    // {∫_0^t α(u) e^{+iφ(t-u)} du, ∫_0^t α(u) e^{-iφ(t-u)} du} where φ = two_phase(s).
    template <class PhaseFn>
    std::pair<Complex, Complex> phase_moments(double t, PhaseFn&& two_phase);

    const NoiseModel& model() const { return model_; }

private:
    void extend_to(double t);

    NoiseModel model_;
    double max_panel_;
    double next_width_;
    std::vector<double> edges_{0.0};
    std::vector<double> nodes_;
    std::vector<Complex> weighted_alpha_;
};

template <class PhaseFn>
std::pair<Complex, Complex> MemoryQuadrature::phase_moments(double t, PhaseFn&& two_phase) {
    Complex plus = 0.0;
    Complex minus = 0.0;
    if (!(t > 0.0)) return {plus, minus};
    extend_to(t);
    const auto rule = special::gauss_legendre_8();
    const std::size_t n = rule.nodes.size();
    std::size_t full = 0;
    while (full + 1 < edges_.size() && edges_[full + 1] <= t) ++full;
    for (std::size_t j = 0; j < full * n; ++j) {
        const Complex e = std::polar(1.0, two_phase(t - nodes_[j]));
        plus += weighted_alpha_[j] * e;
        minus += weighted_alpha_[j] * std::conj(e);
    }
    const double a = edges_[full];
    if (t > a) {
        const double half = 0.5 * (t - a);
        const double mid = 0.5 * (t + a);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = mid + half * rule.nodes[i];
            const Complex wa = rule.weights[i] * half * model_.alpha(u);
            const Complex e = std::polar(1.0, two_phase(t - u));
            plus += wa * e;
            minus += wa * std::conj(e);
        }
    }
    return {plus, minus};
}

} // namespace dekohere
