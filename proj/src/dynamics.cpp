#include "dekohere/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dekohere {

namespace {

// Panel edges 0, w, 3w, 7w, ... doubling until the width reaches `cap`, then
// uniform. Fine panels sit where the kernel peaks (small lag u).
class GradedGrid {
public:
    GradedGrid(double first, double cap) : cap_(cap) {
        double w = std::min(first, cap);
        while (w < cap) {
            head_.push_back(head_.back() + w);
            w *= 2.0;
        }
        tail_ = head_.back();
    }

    template <class F>
    void panels(double a, double b, F&& fn) const {
        double lo = a;
        for (std::size_t i = 1; i < head_.size() && lo < b; ++i) {
            if (head_[i] <= lo) continue;
            const double hi = std::min(head_[i], b);
            fn(lo, hi);
            lo = hi;
        }
        if (lo >= b) return;
        auto j = static_cast<long long>(std::floor((lo - tail_) / cap_)) + 1;
        while (lo < b) {
            const double e = tail_ + static_cast<double>(j) * cap_;
            ++j;
            if (e <= lo) continue;
            const double hi = std::min(e, b);
            fn(lo, hi);
            lo = hi;
        }
    }

private:
    std::vector<double> head_{0.0};
    double tail_ = 0.0;
    double cap_;
};

enum class Route { Piecewise, OuRecursion, LinearRunning, General };

Route choose_route(const NoiseModel& model, const PulseProgram& pulse) {
    if (pulse.piecewise_constant()) return Route::Piecewise;
    if (std::holds_alternative<OrnsteinUhlenbeck>(model.variant())) return Route::OuRecursion;
    if (std::holds_alternative<LinearRamp>(pulse.envelope()->variant())) return Route::LinearRunning;
    return Route::General;
}

bool all_finite(const Mat2& m) {
    for (int i = 0; i < 4; ++i) {
        if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
    }
    return true;
}

} // namespace

QubitState QubitState::from_matrix(const Mat2& m) {
    return QubitState{m(0, 0).real(), m(1, 1).real(), m(0, 1)};
}

QubitState QubitState::validated(double rho00, Complex rho01) {
    if (!std::isfinite(rho00) || !std::isfinite(rho01.real()) || !std::isfinite(rho01.imag())) {
        throw ParameterError("initial state: entries must be finite");
    }
    if (rho00 < 0.0 || rho00 > 1.0) throw ParameterError("initial state: rho00 must lie in [0, 1]");
    QubitState s{rho00, 1.0 - rho00, rho01};
    if (s.positivity() < -1e-12) {
        throw ParameterError("initial state: |rho01|^2 exceeds rho00*rho11 (not positive semidefinite)");
    }
    return s;
}

Mat2 QubitState::matrix() const {
    Mat2 m;
    m << rho00, rho01, std::conj(rho01), rho11;
    return m;
}

struct CoefficientEvaluator::Impl {
    NoiseModel model;
    PulseProgram pulse;
    CouplingKind coupling;
    Route route;

    double cached_t = -1.0;
    Complex cached_plus = 0.0;
    Complex cached_minus = 0.0;

    // Running state for the incremental routes.
    double last_t = 0.0;
    Complex run_plus = 0.0;
    Complex run_minus = 0.0;
    std::optional<GradedGrid> grid;
    std::optional<MemoryQuadrature> quad;

    Impl(NoiseModel m, PulseProgram p, CouplingKind c)
        : model(std::move(m)), pulse(std::move(p)), coupling(c), route(choose_route(model, pulse)) {
        if (route == Route::Piecewise) return;
        const double cap = *pulse.period() / 64.0;
        if (route == Route::General) {
            quad.emplace(model, cap);
        } else {
            grid.emplace(model.time_scale() / 8.0, cap);
        }
    }

    std::pair<Complex, Complex> moments(double t) {
        if (t == cached_t) return {cached_plus, cached_minus};
        std::pair<Complex, Complex> k;
        switch (route) {
            case Route::Piecewise: {
                const Complex v = pulse.kind() == PulseProgram::Kind::None
                                      ? model.alpha_integral(t)
                                      : renormalized_alpha_bb(model, t, *pulse.period());
                k = {v, v};
                break;
            }
            case Route::OuRecursion: k = ou_recursion(t); break;
            case Route::LinearRunning: k = linear_running(t); break;
            case Route::General:
                k = quad->phase_moments(t, [this](double s) { return 2.0 * pulse.phase(s); });
                break;
        }
        cached_t = t;
        cached_plus = k.first;
        cached_minus = k.second;
        return k;
    }

    void rewind_if_needed(double t) {
        if (t < last_t) {
            last_t = 0.0;
            run_plus = 0.0;
            run_minus = 0.0;
        }
    }

    std::pair<Complex, Complex> ou_recursion(double t) {
        // α(t' - s) = e^{-(t'-t)/τ} α(t - s) for OU, so the history decays as a
        // whole and only the new interval [t, t'] needs quadrature.
        rewind_if_needed(t);
        const double tau = std::get<OrnsteinUhlenbeck>(model.variant()).tau;
        const double dt = t - last_t;
        const double decay = std::exp(-dt / tau);
        Complex add_plus = 0.0;
        Complex add_minus = 0.0;
        const auto rule = special::gauss_legendre_8();
        grid->panels(0.0, dt, [&](double a, double b) {
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = mid + half * rule.nodes[i];
                const Complex wa = rule.weights[i] * half * model.alpha(u);
                const Complex e = std::polar(1.0, 2.0 * pulse.phase(t - u));
                add_plus += wa * e;
                add_minus += wa * std::conj(e);
            }
        });
        run_plus = decay * run_plus + add_plus;
        run_minus = decay * run_minus + add_minus;
        last_t = t;
        return {run_plus, run_minus};
    }

    std::pair<Complex, Complex> linear_running(double t) {
        // For A(s) = π s/T_c the weight factorizes: e^{2iA(t-u)} = e^{iωt} e^{-iωu},
        // so K±(t) = e^{±iωt} ∫_0^t α(u) e^{∓iωu} du, a plain running integral.
        rewind_if_needed(t);
        const double omega = 2.0 * kPi / *pulse.period();
        const auto rule = special::gauss_legendre_8();
        grid->panels(last_t, t, [&](double a, double b) {
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = mid + half * rule.nodes[i];
                const Complex wa = rule.weights[i] * half * model.alpha(u);
                const Complex e = std::polar(1.0, -omega * u);
                run_plus += wa * e;
                run_minus += wa * std::conj(e);
            }
        });
        last_t = t;
        const Complex rot = std::polar(1.0, omega * t);
        return {rot * run_plus, std::conj(rot) * run_minus};
    }
};

CoefficientEvaluator::CoefficientEvaluator(NoiseModel model, PulseProgram pulse, CouplingKind coupling)
    : impl_(std::make_unique<Impl>(std::move(model), std::move(pulse), coupling)) {}

CoefficientEvaluator::~CoefficientEvaluator() = default;
CoefficientEvaluator::CoefficientEvaluator(CoefficientEvaluator&&) noexcept = default;
CoefficientEvaluator& CoefficientEvaluator::operator=(CoefficientEvaluator&&) noexcept = default;

const NoiseModel& CoefficientEvaluator::model() const { return impl_->model; }
const PulseProgram& CoefficientEvaluator::pulse() const { return impl_->pulse; }
CouplingKind CoefficientEvaluator::coupling() const { return impl_->coupling; }

CoefficientSet CoefficientEvaluator::at(double t, double probe) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("coefficients: t must be finite and >= 0");
    CoefficientSet c;
    const auto [kp, km] = impl_->moments(t);
    c.k_plus = kp;
    c.k_minus = km;
    c.phase = impl_->pulse.phase_in_step(t, probe);

    const bool dephasing = impl_->coupling == CouplingKind::Dephasing;
    if (impl_->route == Route::Piecewise) {
        // Staircase phases are multiples of π/2: L̃ = f·L exactly, no trig round-off.
        const double f = impl_->pulse.kind() == PulseProgram::Kind::None
                             ? 1.0
                             : SwitchingFunction(*impl_->pulse.period())(probe);
        const Mat2 base = dephasing ? pauli::z() : pauli::lowering();
        c.L = f * base;
        c.B = kp * base;
        c.kappa = kp;
        return c;
    }

    c.L = toggling_operator(impl_->coupling, c.phase);
    if (dephasing) {
        const Complex kc = 0.5 * (kp + km);
        const Complex ks = (kp - km) / Complex(0.0, 2.0);
        c.B = kc * pauli::z() + ks * pauli::y();
        c.kappa = std::cos(2.0 * c.phase) * kc + std::sin(2.0 * c.phase) * ks;
    } else {
        c.B = kp * pauli::lowering();
        c.kappa = std::polar(1.0, -2.0 * c.phase) * kp;
    }
    return c;
}

CoefficientSet step_coefficients(const NoiseModel& model, const PulseProgram& pulse,
                                 CouplingKind coupling, double t) {
    CoefficientEvaluator ev(model, pulse, coupling);
    return ev.at(t);
}

Mat2 generator(const CoefficientSet& c, const Mat2& rho) {
    const Mat2 Bd = c.B.adjoint();
    const Mat2 Ld = c.L.adjoint();
    return c.L * rho * Bd - rho * Bd * c.L + c.B * rho * Ld - Ld * c.B * rho;
}

std::optional<long long> commensurate_steps(double span, double h) {
    if (!(h > 0.0) || !std::isfinite(h) || !(span >= 0.0) || !std::isfinite(span)) return std::nullopt;
    const double r = span / h;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, r)) return std::nullopt;
    return static_cast<long long>(n);
}

Trajectory integrate(const NoiseModel& model, const PulseProgram& pulse, CouplingKind coupling,
                     const QubitState& initial, double h, double t_final) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid.h must be finite and > 0");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ParameterError("grid.t_final must be finite and >= 0");
    const auto steps = commensurate_steps(t_final, h);
    if (!steps) throw ParameterError("grid.h must divide grid.t_final into a whole number of steps");
    if (const auto period = pulse.period()) {
        if (!commensurate_steps(0.5 * *period, h)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "grid.h = " << h << " must divide control.t_c/2 = " << 0.5 * *period;
            throw ParameterError(msg.str());
        }
    }
    if (std::abs(initial.trace() - 1.0) > 1e-10) throw ParameterError("initial state must have unit trace");

    const long long n = *steps;
    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.kappa.reserve(n + 1);

    CoefficientEvaluator ev(model, pulse, coupling);
    Mat2 rho = initial.matrix();
    traj.min_positivity = initial.positivity();

    auto record = [&](double t, const Complex& kappa) {
        const QubitState s = QubitState::from_matrix(rho);
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.kappa.push_back(kappa);
        traj.max_trace_error = std::max(traj.max_trace_error, std::abs(s.trace() - 1.0));
        traj.max_population_drift = std::max(traj.max_population_drift, std::abs(s.rho00 - initial.rho00));
        const double pos = s.positivity();
        traj.min_positivity = std::min(traj.min_positivity, pos);
        if (pos < -kPositivityTolerance) ++traj.positivity_violations;
    };

    record(0.0, ev.at(0.0, 0.5 * h).kappa);
    for (long long i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        const double mid = t + 0.5 * h;
        const double end = static_cast<double>(i + 1) * h;
        const CoefficientSet c1 = ev.at(t, mid);
        const CoefficientSet c2 = ev.at(mid, mid);
        const CoefficientSet c4 = ev.at(end, mid);
        const Mat2 k1 = generator(c1, rho);
        const Mat2 k2 = generator(c2, rho + 0.5 * h * k1);
        const Mat2 k3 = generator(c2, rho + 0.5 * h * k2);
        const Mat2 k4 = generator(c4, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (!all_finite(rho)) {
            std::ostringstream msg;
            msg << "integrate: state became non-finite at t = " << end << " (" << model.describe() << ", "
                << pulse.describe() << ")";
            throw NumericalError(msg.str());
        }
        record(end, c4.kappa);
    }
    return traj;
}

QubitState to_lab_frame(const QubitState& interaction, CouplingKind coupling, double phase) {
    const Mat2 U = control_propagator(coupling, phase);
    return QubitState::from_matrix(U * interaction.matrix() * U.adjoint());
}

Trajectory run_scenario(const ScenarioDescriptor& d) {
    return integrate(d.model, d.pulse, d.coupling, d.initial, d.h, d.t_final);
}

} // namespace dekohere
