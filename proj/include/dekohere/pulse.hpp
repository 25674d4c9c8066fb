// pulse.hpp — Decoupling controls: phase envelopes A(t), switching function f(s),
// toggling-frame coupling operators and the decoupling-condition check.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dekohere/types.hpp"

namespace dekohere {

// A(t) = π t / T_c
struct LinearRamp {
    double period;
};

// A(t) = (π/2) · number of half-cycle boundaries k T_c/2 (k >= 1) passed by t.
// Ideal instantaneous π pulses.
struct BangBangSteps {
    double period;
};

// A(t) = π t / T_c + Σ_m c_m sin(2π (2m) t / T_c). Even harmonics keep
// 2A(T_c/2) = π and 2A(T_c/2 + s) = π + 2A(s).
struct HarmonicRamp {
    double period;
    std::vector<double> coeffs;
};

class Envelope {
public:
    using Variant = std::variant<LinearRamp, BangBangSteps, HarmonicRamp>;

    static Envelope linear(double period);
    static Envelope bang_bang(double period);
    // Rejects coefficient sets whose sampled symmetry residual exceeds 1e-10.
    static Envelope parametric(double period, std::vector<double> coeffs);

    double phase(double t) const;
    double period() const;
    bool piecewise_constant() const { return std::holds_alternative<BangBangSteps>(v_); }
    std::span<const double> coefficients() const;
    const Variant& variant() const { return v_; }
    std::string name() const;

    // max |2A(T_c/2 + s) - π - 2A(s)| over an n-point grid on [0, T_c/2], plus |2A(T_c/2) - π|.
    double symmetry_residual(int samples = 1024) const;

private:
    explicit Envelope(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

double envelope_A(const Envelope& env, double t);

// f(s) = +1 on [2i T_c/2, (2i+1) T_c/2), -1 on the odd half-cycles; the value
// at an exact switch point is the left limit (f(0) = +1).
class SwitchingFunction {
public:
    explicit SwitchingFunction(double period);
    int operator()(double s) const;
    double period() const { return period_; }
    // ∫_0^t f(s) ds
    double integral(double t) const;

private:
    double period_;
};

int eval_f(const SwitchingFunction& sw, double s);

// Control program applied to the qubit. Dephasing coupling is driven about x,
// lowering coupling about z, so that U_c(t) = exp(-i A(t) σ_axis).
class PulseProgram {
public:
    enum class Kind { None, BangBang, Continuous };

    static PulseProgram none();
    static PulseProgram bang_bang(double period);
    static PulseProgram continuous(Envelope env);

    Kind kind() const { return kind_; }
    bool piecewise_constant() const { return kind_ != Kind::Continuous; }
    std::optional<double> period() const;
    const std::optional<Envelope>& envelope() const { return env_; }

    // A(t). Bang-bang phases are right-continuous.
    double phase(double t) const;
    // Phase on the open step that contains `probe`; used to pick the correct
    // side of a switch when evaluating at a step endpoint.
    double phase_in_step(double t, double probe) const;

    std::string describe() const;

private:
    PulseProgram(Kind kind, std::optional<Envelope> env) : kind_(kind), env_(std::move(env)) {}
    Kind kind_;
    std::optional<Envelope> env_;
};

// U_c(t) for a given accumulated phase.
Mat2 control_propagator(CouplingKind kind, double phase);

// L̃ = U_c† L U_c for the accumulated phase A.
Mat2 toggling_operator(CouplingKind kind, double phase);

// ‖∫_0^{T} U_c†(s) L U_c(s) ds - λ I‖_F with λ = tr(·)/2.
double check_decoupling_condition(const Envelope& env, CouplingKind kind);
double check_decoupling_condition(const PulseProgram& pulse, CouplingKind kind, double period);

} // namespace dekohere
