// selftest.hpp — Runtime consistency checks of the kernel closed forms, run by
// `dekohere validate` before a scenario is trusted.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dekohere/kernel.hpp"

namespace dekohere {

struct SelfTestResult {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool passed() const { return error <= tolerance; }
};

// ∫_0^∞ J(ω) e^{-iω dt} dω by panelled Gauss-Legendre quadrature over the
// spectral density. Not defined for OU, which is specified in the time domain.
Complex spectral_alpha(const NoiseModel& model, double dt);

std::vector<SelfTestResult> kernel_self_tests(const NoiseModel& model, std::optional<double> period,
                                              double t_final);

} // namespace dekohere
