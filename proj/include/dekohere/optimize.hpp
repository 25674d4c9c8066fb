// optimize.hpp — Derivative-free search over the even-harmonic envelope family

#pragma once

#include <cstdint>
#include <vector>

#include "dekohere/dynamics.hpp"

namespace dekohere {

struct OptimizationProblem {
    NoiseModel model;
    CouplingKind coupling = CouplingKind::Dephasing;
    double period = 0.5;
    double t_final = 2.0;
    double h = 1.0 / 1024.0;
    int dimension = 1;
    double c_max = 0.4;
    QubitState initial = QubitState::plus();

    void validate() const;
};

struct OptimizerOptions {
    int budget = 200;
    std::uint64_t seed = 0;
    // Search runs at h = T_c / search_density (or the problem h if that is finer).
    int search_density = 32;
    // Converged simplices restarted around the incumbent before giving up.
    int max_restarts = 4;
    bool parallel = true;
};

struct Evaluation {
    int index = 0;
    std::vector<double> coeffs;
    double objective = 0.0;
    double best_so_far = 0.0;
};

struct OptimizationResult {
    std::vector<double> best_coeffs;
    double best_objective = 0.0;      // at the problem grid
    double baseline_objective = 0.0;  // linear ramp, problem grid
    double search_objective = 0.0;    // best value seen at the search grid
    std::vector<Evaluation> log;      // feasible candidates in evaluation order
    int rejected = 0;                 // candidates whose construction or integration failed
    int restarts = 0;
    double search_h = 0.0;
    bool budget_exhausted = false;
    bool fell_back_to_baseline = false;
};

// Residual decoherence of the envelope with the given coefficients on grid h.
double envelope_objective(const OptimizationProblem& problem, const std::vector<double>& coeffs, double h);

OptimizationResult optimize_envelope(const OptimizationProblem& problem, const OptimizerOptions& options = {});

} // namespace dekohere
