#include "dekohere/metrics.hpp"

#include <cmath>
#include <limits>

namespace dekohere {

namespace {

double initial_coherence(const Trajectory& traj) {
    if (traj.states.empty()) throw MetricError("metrics: empty trajectory");
    const double c0 = std::abs(traj.states.front().rho01);
    if (!(c0 > 0.0)) throw MetricError("metrics: initial coherence |rho01(0)| is zero, metric undefined");
    return c0;
}

} // namespace

std::optional<double> compute_t2(const Trajectory& traj) {
    const double c0 = initial_coherence(traj);
    const double target = std::exp(-1.0) * c0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double cur = std::abs(traj.states[i].rho01);
        if (cur < target) {
            const double prev = std::abs(traj.states[i - 1].rho01);
            const double t0 = traj.times[i - 1];
            const double t1 = traj.times[i];
            if (prev == cur) return t1;
            return t0 + (prev - target) / (prev - cur) * (t1 - t0);
        }
    }
    return std::nullopt;
}

double residual_decoherence(const Trajectory& traj) {
    const double c0 = initial_coherence(traj);
    return 1.0 - std::abs(traj.states.back().rho01) / c0;
}

double imag_growth(const Trajectory& traj) {
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(s.rho01.imag()));
    return worst;
}

MetricsReport compute_report(const Trajectory& traj, const Trajectory& reference) {
    if (traj.size() != reference.size()) throw MetricError("compute_report: trajectory grids differ in length");
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (std::abs(traj.times[i] - reference.times[i]) > 1e-12 * std::max(1.0, std::abs(traj.times[i]))) {
            throw MetricError("compute_report: trajectory grids differ at index " + std::to_string(i));
        }
    }
    MetricsReport r;
    r.t2 = compute_t2(traj);
    r.residual_decoherence = residual_decoherence(traj);
    r.imag_growth = imag_growth(traj);
    r.phase_sensitive_residual = 1.0 - traj.states.back().rho01.real() / initial_coherence(traj);

    const double own = std::abs(r.residual_decoherence);
    const double ref = std::abs(residual_decoherence(reference));
    if (ref == 0.0) {
        r.suppression_ratio = own == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        r.suppression_ratio = own / ref;
    }
    return r;
}

} // namespace dekohere
