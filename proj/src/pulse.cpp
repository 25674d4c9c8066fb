#include "dekohere/pulse.hpp"

#include <cmath>
#include <sstream>

#include "dekohere/special.hpp"

namespace dekohere {

namespace {

void require_period(double period, const char* who) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw ParameterError(std::string(who) + ": period T_c must be finite and > 0");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::string to_string(CouplingKind kind) {
    return kind == CouplingKind::Dephasing ? "sigma_z" : "sigma_minus";
}

Envelope Envelope::linear(double period) {
    require_period(period, "Envelope::linear");
    return Envelope(LinearRamp{period});
}

Envelope Envelope::bang_bang(double period) {
    require_period(period, "Envelope::bang_bang");
    return Envelope(BangBangSteps{period});
}

Envelope Envelope::parametric(double period, std::vector<double> coeffs) {
    require_period(period, "Envelope::parametric");
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        if (!std::isfinite(coeffs[m])) {
            throw EnvelopeError("Envelope::parametric: coefficient c_" + std::to_string(m + 1) +
                                " is not finite");
        }
    }
    Envelope env(HarmonicRamp{period, std::move(coeffs)});
    const double residual = env.symmetry_residual();
    if (!(residual <= 1e-10)) {
        std::ostringstream msg;
        msg << "Envelope::parametric: decoupling symmetry violated (residual " << residual << ")";
        throw ParameterError(msg.str());
    }
    return env;
}

double Envelope::phase(double t) const {
    if (t <= 0.0) return 0.0;
    const double a = std::visit(
        overloaded{
            [t](const LinearRamp& e) { return kPi * t / e.period; },
            [t](const BangBangSteps& e) { return 0.5 * kPi * std::floor(t / (0.5 * e.period)); },
            [t](const HarmonicRamp& e) {
                double sum = kPi * t / e.period;
                for (std::size_t m = 0; m < e.coeffs.size(); ++m) {
                    const double harmonic = 2.0 * static_cast<double>(m + 1);
                    sum += e.coeffs[m] * std::sin(2.0 * kPi * harmonic * t / e.period);
                }
                return sum;
            },
        },
        v_);
    if (!std::isfinite(a)) throw EnvelopeError("envelope phase is not finite at t = " + std::to_string(t));
    return a;
}

double Envelope::period() const {
    return std::visit([](const auto& e) { return e.period; }, v_);
}

std::span<const double> Envelope::coefficients() const {
    if (const auto* h = std::get_if<HarmonicRamp>(&v_)) return h->coeffs;
    return {};
}

std::string Envelope::name() const {
    return std::visit(overloaded{
                          [](const LinearRamp&) { return std::string("linear"); },
                          [](const BangBangSteps&) { return std::string("bang_bang"); },
                          [](const HarmonicRamp&) { return std::string("parametric"); },
                      },
                      v_);
}

double Envelope::symmetry_residual(int samples) const {
    const double half = 0.5 * period();
    double worst = std::abs(2.0 * phase(half) - kPi);
    if (piecewise_constant()) {
        // Staircase: compare on the open steps to stay off the jumps.
        for (int i = 0; i < samples; ++i) {
            const double s = half * (i + 0.5) / samples;
            worst = std::max(worst, std::abs(2.0 * phase(half + s) - kPi - 2.0 * phase(s)));
        }
        return worst;
    }
    for (int i = 0; i <= samples; ++i) {
        const double s = half * i / samples;
        worst = std::max(worst, std::abs(2.0 * phase(half + s) - kPi - 2.0 * phase(s)));
    }
    return worst;
}

double envelope_A(const Envelope& env, double t) { return env.phase(t); }

SwitchingFunction::SwitchingFunction(double period) : period_(period) {
    require_period(period, "SwitchingFunction");
}

int SwitchingFunction::operator()(double s) const {
    if (s <= 0.0) return 1;
    const double half = 0.5 * period_;
    const auto k = static_cast<long long>(std::ceil(s / half)) - 1;
    return (k % 2 == 0) ? 1 : -1;
}

double SwitchingFunction::integral(double t) const {
    if (t <= 0.0) return 0.0;
    const double half = 0.5 * period_;
    const auto n = static_cast<long long>(std::floor(t / half));
    const double rest = t - static_cast<double>(n) * half;
    return (n % 2 == 0) ? rest : half - rest;
}

int eval_f(const SwitchingFunction& sw, double s) { return sw(s); }

PulseProgram PulseProgram::none() { return PulseProgram(Kind::None, std::nullopt); }

PulseProgram PulseProgram::bang_bang(double period) {
    return PulseProgram(Kind::BangBang, Envelope::bang_bang(period));
}

PulseProgram PulseProgram::continuous(Envelope env) {
    if (env.piecewise_constant()) return PulseProgram(Kind::BangBang, std::move(env));
    return PulseProgram(Kind::Continuous, std::move(env));
}

std::optional<double> PulseProgram::period() const {
    if (!env_) return std::nullopt;
    return env_->period();
}

double PulseProgram::phase(double t) const { return env_ ? env_->phase(t) : 0.0; }

double PulseProgram::phase_in_step(double t, double probe) const {
    switch (kind_) {
        case Kind::None: return 0.0;
        case Kind::BangBang: return env_->phase(probe);
        case Kind::Continuous: return env_->phase(t);
    }
    return 0.0;
}

std::string PulseProgram::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
        case Kind::None: out << "none"; break;
        case Kind::BangBang: out << "bang_bang(T_c=" << env_->period() << ")"; break;
        case Kind::Continuous: out << env_->name() << "(T_c=" << env_->period() << ")"; break;
    }
    return out.str();
}

Mat2 control_propagator(CouplingKind kind, double phase) {
    const Mat2 axis = kind == CouplingKind::Dephasing ? pauli::x() : pauli::z();
    return std::cos(phase) * pauli::identity() - Complex(0.0, std::sin(phase)) * axis;
}

Mat2 toggling_operator(CouplingKind kind, double phase) {
    if (kind == CouplingKind::Dephasing) {
        return std::cos(2.0 * phase) * pauli::z() + std::sin(2.0 * phase) * pauli::y();
    }
    return std::polar(1.0, 2.0 * phase) * pauli::lowering();
}

namespace {

template <class PhaseFn>
double decoupling_residual(PhaseFn&& phase, CouplingKind kind, double period) {
    // 64 panels: every half-cycle boundary is a panel edge, so staircase
    // phases are constant on each panel.
    const auto rule = special::gauss_legendre_16();
    constexpr int panels = 64;
    Mat2 total = Mat2::Zero();
    for (int p = 0; p < panels; ++p) {
        const double a = period * p / panels;
        const double b = period * (p + 1) / panels;
        total += special::integrate_panel(rule, a, b, [&](double s) -> Mat2 {
            return toggling_operator(kind, phase(s));
        });
    }
    const Complex lambda = 0.5 * total.trace();
    return (total - lambda * pauli::identity()).norm();
}

} // namespace

double check_decoupling_condition(const Envelope& env, CouplingKind kind) {
    return decoupling_residual([&](double s) { return env.phase(s); }, kind, env.period());
}

double check_decoupling_condition(const PulseProgram& pulse, CouplingKind kind, double period) {
    require_period(period, "check_decoupling_condition");
    return decoupling_residual([&](double s) { return pulse.phase(s); }, kind, period);
}

} // namespace dekohere
