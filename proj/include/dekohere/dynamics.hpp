// dynamics.hpp — Time-local weak-coupling master equation in the interaction
// picture, integrated with fixed-step RK4 on a grid locked to the half-cycles.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "dekohere/kernel.hpp"
#include "dekohere/pulse.hpp"
#include "dekohere/types.hpp"

namespace dekohere {

struct QubitState {
    double rho00 = 1.0;
    double rho11 = 0.0;
    Complex rho01 = 0.0;

    static QubitState plus() { return {0.5, 0.5, 0.5}; }
    static QubitState from_matrix(const Mat2& m);
    // Rejects states that are not unit trace or not positive semidefinite.
    static QubitState validated(double rho00, Complex rho01);

    Mat2 matrix() const;
    double trace() const { return rho00 + rho11; }
    // ρ00 ρ11 - |ρ01|², non-negative for a physical state.
    double positivity() const { return rho00 * rho11 - std::norm(rho01); }
};

// Everything the generator needs at one time point. B = ∫_0^t α(t-s) L̃(s) ds.
// κ is diagnostic only (the generator uses L and B): for staircase controls it
// is the renormalized kernel ∫α(t-s) f(s) ds itself, without the f(t) factor
// that multiplies L̃; for continuous controls it is tr(L̃† B) / tr(L̃† L̃).
struct CoefficientSet {
    Complex k_plus = 0.0;   // ∫_0^t α(t-s) e^{+2iA(s)} ds
    Complex k_minus = 0.0;  // ∫_0^t α(t-s) e^{-2iA(s)} ds
    double phase = 0.0;     // A(t) on the current step
    Complex kappa = 0.0;
    Mat2 L = Mat2::Zero();
    Mat2 B = Mat2::Zero();
};

// Stateful evaluator of CoefficientSet along an increasing sequence of times.
// Picks the cheapest exact route for the control/kernel pair:
// closed-form segment sums for piecewise-constant controls, an exponential
// recursion for OU, a running integral for the linear ramp, and the general
// cached memory quadrature otherwise.
class CoefficientEvaluator {
public:
    CoefficientEvaluator(NoiseModel model, PulseProgram pulse, CouplingKind coupling);
    ~CoefficientEvaluator();
    CoefficientEvaluator(CoefficientEvaluator&&) noexcept;
    CoefficientEvaluator& operator=(CoefficientEvaluator&&) noexcept;

    // `probe` selects the open step whose control phase applies at t.
    CoefficientSet at(double t, double probe);
    CoefficientSet at(double t) { return at(t, t); }

    const NoiseModel& model() const;
    const PulseProgram& pulse() const;
    CouplingKind coupling() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

CoefficientSet step_coefficients(const NoiseModel& model, const PulseProgram& pulse,
                                 CouplingKind coupling, double t);

// dρ/dt = L ρ B† - ρ B† L + B ρ L† - L† B ρ
Mat2 generator(const CoefficientSet& c, const Mat2& rho);

struct Trajectory {
    std::vector<double> times;
    std::vector<QubitState> states;
    // κ at each grid point, taken with the control of the step ending there.
    std::vector<Complex> kappa;
    double max_trace_error = 0.0;
    double max_population_drift = 0.0;
    double min_positivity = 0.0;
    std::size_t positivity_violations = 0;

    std::size_t size() const { return times.size(); }
    double coeff_mu(std::size_t i) const { return kappa[i].real(); }
    double coeff_nu(std::size_t i) const { return -kappa[i].imag(); }
};

inline constexpr double kPositivityTolerance = 1e-8;

// Fixed-step RK4. h must divide t_final and, for periodic controls, T_c/2.
Trajectory integrate(const NoiseModel& model, const PulseProgram& pulse, CouplingKind coupling,
                     const QubitState& initial, double h, double t_final);

// ρ = U_c(t) ρ̃ U_c†(t)
QubitState to_lab_frame(const QubitState& interaction, CouplingKind coupling, double phase);

struct ScenarioDescriptor {
    NoiseModel model;
    PulseProgram pulse;
    CouplingKind coupling;
    QubitState initial = QubitState::plus();
    double h;
    double t_final;
};

Trajectory run_scenario(const ScenarioDescriptor& d);

// Number of steps of size h in `span`, or nullopt when h does not divide it.
std::optional<long long> commensurate_steps(double span, double h);

} // namespace dekohere
