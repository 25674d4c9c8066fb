// config.hpp — Scenario configuration: parsing, validation, normalization and
// construction of the model/pulse/grid it describes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dekohere/dynamics.hpp"
#include "dekohere/optimize.hpp"

namespace dekohere {

// Invalid configuration. `field()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct NoiseConfig {
    std::string type;  // ou | ohmic | supra_ohmic | one_over_f
    std::optional<double> tau;
    std::optional<int> p;
    std::optional<double> lambda_uv;
    std::optional<double> lambda_ir;
    double strength = 1.0;
};

struct ControlConfig {
    std::string type = "none";  // none | bang_bang | continuous
    std::optional<double> t_c;
    std::vector<double> envelope_coeffs;
};

struct GridConfig {
    double h = 1.0 / 1024.0;
    double t_final = 2.0;
};

struct OptimizeConfig {
    int dimension = 1;
    double c_max = 0.4;
    int budget = 200;
    std::uint64_t seed = 0;
};

struct ScenarioConfig {
    std::string description;
    NoiseConfig noise;
    CouplingKind coupling = CouplingKind::Dephasing;
    ControlConfig control;
    GridConfig grid;
    // ρ00 and ρ01 of the initial state; |+> by default.
    double initial_rho00 = 0.5;
    Complex initial_rho01 = 0.5;
    bool initial_is_plus = true;
    std::vector<double> sweep;  // T_c values
    OptimizeConfig optimize;
};

// Parse and fully validate; throws ConfigError.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Canonical JSON with every default made explicit; re-parses to the same value.
std::string normalized_config_text(const ScenarioConfig& cfg);

NoiseModel build_model(const ScenarioConfig& cfg);
// `t_c` overrides control.t_c; the control type must then be periodic.
PulseProgram build_pulse(const ScenarioConfig& cfg, std::optional<double> t_c = std::nullopt);
ScenarioDescriptor build_descriptor(const ScenarioConfig& cfg, std::optional<double> t_c = std::nullopt);
ScenarioDescriptor free_descriptor(const ScenarioConfig& cfg);
OptimizationProblem build_optimization_problem(const ScenarioConfig& cfg);

} // namespace dekohere
