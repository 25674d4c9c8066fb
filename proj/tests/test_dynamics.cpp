#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dekohere/dynamics.hpp"
#include "dekohere/metrics.hpp"
#include "oracles.hpp"

using namespace dekohere;

namespace {

constexpr double kH = 1.0 / 1024.0;

struct Family {
    const char* name;
    PulseProgram pulse;
};

std::vector<Family> families(double period) {
    return {{"free", PulseProgram::none()},
            {"bang_bang", PulseProgram::bang_bang(period)},
            {"linear", PulseProgram::continuous(Envelope::linear(period))},
            {"parametric", PulseProgram::continuous(Envelope::parametric(period, {0.25}))}};
}

std::vector<NoiseModel> models() {
    return {NoiseModel::ornstein_uhlenbeck(0.5), NoiseModel::spin_boson(1, 1.0), NoiseModel::spin_boson(3, 1.0),
            NoiseModel::spin_boson(1, 20.0), NoiseModel::one_over_f(20.0, 0.01)};
}

} // namespace

TEST_CASE("OU free decay follows the analytic exponent", "[dynamics][oracle]") {
    const double tau = 0.5;
    const auto traj = integrate(NoiseModel::ornstein_uhlenbeck(tau), PulseProgram::none(), CouplingKind::Dephasing,
                                QubitState::plus(), 1e-3, 2.0);
    REQUIRE(traj.size() == 2001);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double want = oracle::ou_free_coherence(traj.times[i], tau);
        worst = std::max(worst, std::abs(traj.states[i].rho01 - want) / want);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("OU bang-bang decay follows the integrated switching-weighted rate", "[dynamics][oracle]") {
    const double tau = 0.5;
    for (double period : {0.5, 0.25}) {
        const auto traj = integrate(NoiseModel::ornstein_uhlenbeck(tau), PulseProgram::bang_bang(period),
                                    CouplingKind::Dephasing, QubitState::plus(), kH, 2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); i += 64) {
            const double want = oracle::ou_bb_coherence(traj.times[i], period, tau);
            worst = std::max(worst, std::abs(traj.states[i].rho01 - want) / want);
        }
        INFO("T_c = " << period);
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("Markov limit: a very short correlation time gives rate-2 exponential decay", "[dynamics]") {
    const auto traj = integrate(NoiseModel::ornstein_uhlenbeck(1e-4), PulseProgram::none(), CouplingKind::Dephasing,
                                QubitState::plus(), 1e-3, 2.0);
    // Least-squares slope of log|ρ01| on [0.01, 2].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < 0.01 - 1e-12) continue;
        const double y = std::log(std::abs(traj.states[i].rho01));
        sx += t, sy += y, sxx += t * t, sxy += t * y, ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope == Catch::Approx(2.0).epsilon(0.01));
}

TEST_CASE("Zero kernel leaves every state untouched", "[dynamics]") {
    const auto zero = NoiseModel::ornstein_uhlenbeck(0.5, 0.0);
    const QubitState init = QubitState::validated(0.7, Complex(0.2, -0.1));
    for (auto coupling : {CouplingKind::Dephasing, CouplingKind::Lowering}) {
        for (const auto& fam : families(0.25)) {
            const auto traj = integrate(zero, fam.pulse, coupling, init, kH, 1.0);
            for (const auto& s : traj.states) {
                CHECK(s.rho00 == init.rho00);
                CHECK(s.rho01 == init.rho01);
            }
        }
    }
}

TEST_CASE("Trace is preserved in every scenario family", "[dynamics][invariant]") {
    for (const auto& m : models()) {
        for (auto coupling : {CouplingKind::Dephasing, CouplingKind::Lowering}) {
            for (const auto& fam : families(0.25)) {
                const auto traj = integrate(m, fam.pulse, coupling, QubitState::plus(), kH, 1.0);
                INFO(m.describe() << " " << to_string(coupling) << " " << fam.name);
                CHECK(traj.max_trace_error <= 1e-10);
            }
        }
    }
}

TEST_CASE("Dephasing freezes populations under free and bang-bang evolution", "[dynamics][invariant]") {
    const QubitState init = QubitState::validated(0.8, Complex(0.1, 0.3));
    for (const auto& m : models()) {
        for (const auto& pulse : {PulseProgram::none(), PulseProgram::bang_bang(0.125)}) {
            const auto traj = integrate(m, pulse, CouplingKind::Dephasing, init, kH, 2.0);
            CHECK(traj.max_population_drift <= 1e-14);
        }
    }
}

TEST_CASE("Dephasing under continuous control freezes populations of |+>", "[dynamics][invariant]") {
    for (const auto& m : models()) {
        const auto traj = integrate(m, PulseProgram::continuous(Envelope::linear(0.25)), CouplingKind::Dephasing,
                                    QubitState::plus(), kH, 2.0);
        INFO(m.describe());
        CHECK(traj.max_population_drift <= 1e-14);
    }
}

TEST_CASE("Continuous dephasing control moves populations of an imbalanced state", "[dynamics]") {
    // The toggling-frame operator rotates into σy, which couples ρ00 - ρ11 to
    // the coherence. The freeze above is a property of the |+> start only.
    const auto traj = integrate(NoiseModel::ornstein_uhlenbeck(0.5), PulseProgram::continuous(Envelope::linear(0.5)),
                                CouplingKind::Dephasing, QubitState::validated(0.8, 0.2), kH, 2.0);
    CHECK(traj.max_population_drift > 1e-6);
}

TEST_CASE("Dephasing from |+> keeps the coherence real", "[dynamics][invariant]") {
    for (const auto& m : models()) {
        for (const auto& fam : families(0.25)) {
            const auto traj = integrate(m, fam.pulse, CouplingKind::Dephasing, QubitState::plus(), kH, 2.0);
            INFO(m.describe() << " " << fam.name);
            CHECK(imag_growth(traj) <= 1e-12);
        }
    }
}

TEST_CASE("RK4 converges at fourth order on smooth controls", "[dynamics][invariant]") {
    for (const auto& m : {NoiseModel::ornstein_uhlenbeck(0.5), NoiseModel::spin_boson(1, 1.0)}) {
        const auto pulse = PulseProgram::continuous(Envelope::linear(0.5));
        std::vector<Complex> finals;
        for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
            finals.push_back(integrate(m, pulse, CouplingKind::Dephasing, QubitState::plus(), h, 2.0).states.back().rho01);
        }
        const double e1 = std::abs(finals[0] - finals[1]);
        const double e2 = std::abs(finals[1] - finals[2]);
        INFO(m.describe() << " ratio " << e1 / e2);
        CHECK(e1 / e2 > 12.0);
        CHECK(e1 / e2 < 20.0);
    }
}

TEST_CASE("Grid must be commensurate with the half-cycle and the window", "[dynamics]") {
    const auto m = NoiseModel::ornstein_uhlenbeck(0.5);
    CHECK_THROWS_AS(integrate(m, PulseProgram::bang_bang(0.0625), CouplingKind::Dephasing, QubitState::plus(), 1e-3, 2.0),
                    ParameterError);
    CHECK_THROWS_AS(integrate(m, PulseProgram::none(), CouplingKind::Dephasing, QubitState::plus(), 0.3, 1.0),
                    ParameterError);
    CHECK_THROWS_AS(integrate(m, PulseProgram::none(), CouplingKind::Dephasing, QubitState::plus(), 0.0, 1.0),
                    ParameterError);
    CHECK_NOTHROW(integrate(m, PulseProgram::bang_bang(0.0625), CouplingKind::Dephasing, QubitState::plus(), kH, 2.0));
}

TEST_CASE("Control none equals bang-bang that never switches", "[dynamics]") {
    const auto m = NoiseModel::spin_boson(1, 1.0);
    for (auto coupling : {CouplingKind::Dephasing, CouplingKind::Lowering}) {
        const auto a = integrate(m, PulseProgram::none(), coupling, QubitState::plus(), kH, 2.0);
        const auto b = integrate(m, PulseProgram::bang_bang(8.0), coupling, QubitState::plus(), kH, 2.0);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.states[i].rho01 == b.states[i].rho01);
    }
}

TEST_CASE("Ohmic bang-bang at T_c = 0.125 decays slower than free decay everywhere", "[dynamics]") {
    const auto m = NoiseModel::spin_boson(1, 1.0);
    const auto free = integrate(m, PulseProgram::none(), CouplingKind::Dephasing, QubitState::plus(), kH, 2.0);
    const auto bb = integrate(m, PulseProgram::bang_bang(0.125), CouplingKind::Dephasing, QubitState::plus(), kH, 2.0);
    // Before the first switch at T_c/2 the two evolutions are the same one.
    for (std::size_t i = 1; i < free.size(); ++i) {
        if (free.times[i] <= 0.0625) {
            CHECK(bb.states[i].rho01 == free.states[i].rho01);
        } else {
            CHECK(std::abs(bb.states[i].rho01) > std::abs(free.states[i].rho01));
        }
    }
}

TEST_CASE("1/f lowering coupling: bang-bang keeps more in-phase coherence than continuous", "[dynamics]") {
    const auto m = NoiseModel::one_over_f(20.0, 0.01);
    const auto bb = integrate(m, PulseProgram::bang_bang(0.25), CouplingKind::Lowering, QubitState::plus(), kH, 2.0);
    const auto ct = integrate(m, PulseProgram::continuous(Envelope::linear(0.25)), CouplingKind::Lowering,
                              QubitState::plus(), kH, 2.0);
    CHECK(bb.states.back().rho01.real() > ct.states.back().rho01.real());
}

TEST_CASE("Coefficients vanish at t = 0", "[dynamics]") {
    for (const auto& m : models()) {
        for (auto coupling : {CouplingKind::Dephasing, CouplingKind::Lowering}) {
            for (const auto& fam : families(0.5)) {
                const auto c = step_coefficients(m, fam.pulse, coupling, 0.0);
                CHECK(c.kappa == Complex(0.0));
                CHECK(c.B.norm() == 0.0);
            }
        }
    }
}

TEST_CASE("Free dephasing coefficient is the OU kernel integral", "[dynamics]") {
    const double tau = 0.5;
    for (double t : {0.1, 0.5, 1.9}) {
        const auto c = step_coefficients(NoiseModel::ornstein_uhlenbeck(tau), PulseProgram::none(),
                                         CouplingKind::Dephasing, t);
        CHECK(c.kappa.real() == Catch::Approx(0.5 * (1.0 - std::exp(-t / tau))).epsilon(1e-14));
        // dρ01/dt = -2(1 - e^{-t/τ}) ρ01
        const Mat2 d = generator(c, QubitState::plus().matrix());
        CHECK(d(0, 1).real() == Catch::Approx(-2.0 * (1.0 - std::exp(-t / tau)) * 0.5).epsilon(1e-13));
    }
}

TEST_CASE("Continuous OU dephasing: the sine channel matches the M_s prefactor", "[dynamics][crosscheck]") {
    const double tau = 0.5;
    for (double period : {0.5, 0.25}) {
        CoefficientEvaluator ev(NoiseModel::ornstein_uhlenbeck(tau), PulseProgram::continuous(Envelope::linear(period)),
                                CouplingKind::Dephasing);
        const double x = 2.0 * kPi * tau / period;
        for (double t : {0.1, 0.6, 1.7}) {
            const auto c = ev.at(t);
            const Complex ks = (c.k_plus - c.k_minus) / Complex(0.0, 2.0);
            const double w = 2.0 * kPi * t / period;
            const double ms = std::exp(-t / tau) * x - x * std::cos(w) + std::sin(w);
            const double prefactor = 2.0 * ms * std::sin(w) / (1.0 + x * x);
            CHECK(4.0 * std::sin(w) * ks.real() == Catch::Approx(prefactor).margin(1e-12));
        }
    }
}

TEST_CASE("Lowering coupling reproduces the specialized free and bang-bang equations", "[dynamics][crosscheck]") {
    const auto m = NoiseModel::spin_boson(1, 1.0);
    const QubitState s = QubitState::validated(0.3, Complex(0.2, 0.1));
    for (const auto& pulse : {PulseProgram::none(), PulseProgram::bang_bang(0.25)}) {
        for (double t : {0.2, 0.9, 1.6}) {
            const double probe = t + 1e-3;
            CoefficientEvaluator ev(m, pulse, CouplingKind::Lowering);
            const auto c = ev.at(t, probe);
            const double f = pulse.kind() == PulseProgram::Kind::None ? 1.0 : SwitchingFunction(0.25)(probe);
            const Complex integral = pulse.kind() == PulseProgram::Kind::None ? m.alpha_integral(t)
                                                                               : renormalized_alpha_bb(m, t, 0.25);
            const double mu_int = integral.real(), nu_int = -integral.imag();
            const Mat2 d = generator(c, s.matrix());
            // dρ11/dt = -2 f ∫μf ρ11,  dρ01/dt = -f (∫μf + i∫νf) ρ01
            CHECK(d(1, 1).real() == Catch::Approx(-2.0 * f * mu_int * s.rho11).margin(1e-14));
            CHECK(std::abs(d(0, 1) - (-f * Complex(mu_int, nu_int) * s.rho01)) < 1e-14);
            CHECK(std::abs(d(0, 0) + d(1, 1)) < 1e-15);
        }
    }
}

TEST_CASE("Coefficient routes agree with each other", "[dynamics]") {
    const double period = 0.25;
    for (const auto& m : {NoiseModel::spin_boson(1, 20.0), NoiseModel::one_over_f(20.0, 0.01),
                          NoiseModel::ornstein_uhlenbeck(0.3)}) {
        // Linear ramp (running-integral or OU route) against the general
        // quadrature, which handles a harmonic envelope with zero coefficient.
        CoefficientEvaluator fast(m, PulseProgram::continuous(Envelope::linear(period)), CouplingKind::Dephasing);
        CoefficientEvaluator general(m, PulseProgram::continuous(Envelope::parametric(period, {0.0})),
                                     CouplingKind::Dephasing);
        for (double t = 0.0; t <= 2.0; t += 0.0625 / 4) {
            const auto a = fast.at(t);
            const auto b = general.at(t);
            const double scale = std::max(1.0, std::abs(m.alpha_integral(t)));
            CHECK(std::abs(a.k_plus - b.k_plus) < 1e-10 * scale);
            CHECK(std::abs(a.k_minus - b.k_minus) < 1e-10 * scale);
        }
    }
    // OU recursion against the closed form K+ = e^{iωt} (1 - e^{-t(1/τ + iω)}) / (2τ(1/τ + iω)).
    const double tau = 0.5, w = 2.0 * kPi / period;
    CoefficientEvaluator ou(NoiseModel::ornstein_uhlenbeck(tau), PulseProgram::continuous(Envelope::linear(period)),
                            CouplingKind::Lowering);
    for (double t : {0.05, 0.5, 1.33, 2.0}) {
        const Complex z(1.0 / tau, w);
        const Complex want = std::polar(1.0, w * t) * (1.0 - std::exp(-t * z)) / (2.0 * tau * z);
        CHECK(std::abs(ou.at(t).k_plus - want) < 1e-12);
    }
}

TEST_CASE("Evaluator handles a time that moves backwards", "[dynamics]") {
    const auto m = NoiseModel::spin_boson(1, 1.0);
    const auto pulse = PulseProgram::continuous(Envelope::linear(0.5));
    CoefficientEvaluator ev(m, pulse, CouplingKind::Dephasing);
    ev.at(1.5);
    const auto back = ev.at(0.75);
    CoefficientEvaluator fresh(m, pulse, CouplingKind::Dephasing);
    CHECK(std::abs(back.k_plus - fresh.at(0.75).k_plus) < 1e-14);
}

TEST_CASE("Lab-frame transform applies the control rotation", "[dynamics]") {
    const QubitState s = QubitState::validated(0.9, Complex(0.1, 0.05));
    // A = π/2 about x is a population flip up to phases.
    const auto lab = to_lab_frame(s, CouplingKind::Dephasing, kPi / 2);
    CHECK(lab.rho00 == Catch::Approx(0.1).margin(1e-15));
    CHECK(lab.trace() == Catch::Approx(1.0).epsilon(1e-15));
    // Rotations about z leave populations alone and rotate the coherence.
    const auto labz = to_lab_frame(s, CouplingKind::Lowering, 0.3);
    CHECK(labz.rho00 == Catch::Approx(0.9));
    CHECK(std::abs(labz.rho01) == Catch::Approx(std::abs(s.rho01)));
}

TEST_CASE("Initial states are validated", "[dynamics]") {
    CHECK_THROWS_AS(QubitState::validated(1.2, 0.0), ParameterError);
    CHECK_THROWS_AS(QubitState::validated(0.5, 0.6), ParameterError);
    CHECK_NOTHROW(QubitState::validated(0.5, 0.5));
    const QubitState bad{0.7, 0.4, 0.0};
    CHECK_THROWS_AS(integrate(NoiseModel::ornstein_uhlenbeck(0.5), PulseProgram::none(), CouplingKind::Dephasing, bad,
                              kH, 1.0),
                    ParameterError);
}

TEST_CASE("Positivity is monitored rather than enforced", "[dynamics]") {
    const auto traj = integrate(NoiseModel::spin_boson(1, 20.0), PulseProgram::continuous(Envelope::linear(0.125)),
                                CouplingKind::Lowering, QubitState::plus(), kH, 2.0);
    CHECK(std::isfinite(traj.min_positivity));
    CHECK(traj.min_positivity <= QubitState::plus().positivity());
    if (traj.positivity_violations > 0) CHECK(traj.min_positivity < -kPositivityTolerance);
}

TEST_CASE("Bang-bang trajectory records the renormalized kernel", "[dynamics]") {
    const auto m = NoiseModel::spin_boson(1, 20.0);
    const auto traj = integrate(m, PulseProgram::bang_bang(0.25), CouplingKind::Dephasing, QubitState::plus(), kH, 2.0);
    for (std::size_t i = 0; i < traj.size(); i += 37) {
        const double t = traj.times[i];
        CHECK(traj.coeff_mu(i) == Catch::Approx(renormalized_mu_bb(m, t, 0.25)).margin(1e-10));
        CHECK(traj.coeff_nu(i) == Catch::Approx(renormalized_nu_bb(m, t, 0.25)).margin(1e-10));
    }
}
