// metrics.hpp — T₂, residual decoherence and suppression ratios over trajectories

#pragma once

#include <optional>

#include "dekohere/dynamics.hpp"

namespace dekohere {

// First time |ρ̃01| drops below e^{-1}|ρ̃01(0)|, linearly interpolated between
// grid points; nullopt if it never does.
std::optional<double> compute_t2(const Trajectory& traj);

// 1 - |ρ̃01(t_final)| / |ρ̃01(0)|
double residual_decoherence(const Trajectory& traj);

// max_t |Im ρ̃01(t)|
double imag_growth(const Trajectory& traj);

struct MetricsReport {
    std::optional<double> t2;
    double residual_decoherence = 0.0;
    double imag_growth = 0.0;
    // |residual| / |residual of the reference|; 1 when both vanish.
    double suppression_ratio = 0.0;
    // 1 - Re ρ̃01(t_final) / |ρ̃01(0)|. Not part of the contract; reported
    // because phase rotation of ρ̃01 under control is invisible in the modulus.
    double phase_sensitive_residual = 0.0;
};

MetricsReport compute_report(const Trajectory& traj, const Trajectory& reference);

} // namespace dekohere
