#include "dekohere/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace dekohere {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
}

const json& require_object(const json& parent, const char* key, const std::string& field) {
    if (!parent.contains(key)) throw ConfigError(field, "required field is missing");
    const json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError(field, "must be an object");
    return v;
}

std::string get_string(const json& v, const std::string& field) {
    if (!v.is_string()) throw ConfigError(field, "must be a string");
    return v.get<std::string>();
}

double get_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

double get_positive(const json& v, const std::string& field) {
    const double d = get_number(v, field);
    if (!(d > 0.0)) throw ConfigError(field, "must be > 0");
    return d;
}

long long get_integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ConfigError(field, "must be an integer");
    return v.get<long long>();
}

std::optional<double> optional_positive(const json& obj, const char* key, const std::string& field) {
    if (!obj.contains(key)) return std::nullopt;
    return get_positive(obj.at(key), field);
}

void forbid(const json& obj, const char* key, const std::string& field, const std::string& why) {
    if (obj.contains(key)) throw ConfigError(field, why);
}

NoiseConfig parse_noise(const json& root) {
    const json& n = require_object(root, "noise", "noise");
    only_keys(n, "noise", {"type", "tau", "p", "lambda_uv", "lambda_ir", "strength"});
    NoiseConfig cfg;
    if (!n.contains("type")) throw ConfigError("noise.type", "required field is missing");
    cfg.type = get_string(n.at("type"), "noise.type");
    if (n.contains("strength")) {
        cfg.strength = get_number(n.at("strength"), "noise.strength");
        if (cfg.strength < 0.0) throw ConfigError("noise.strength", "must be >= 0");
    }
    const std::string unused = "not used by noise type '" + cfg.type + "'";
    if (cfg.type == "ou") {
        cfg.tau = optional_positive(n, "tau", "noise.tau");
        if (!cfg.tau) throw ConfigError("noise.tau", "required for noise type 'ou'");
        forbid(n, "p", "noise.p", unused);
        forbid(n, "lambda_uv", "noise.lambda_uv", unused);
        forbid(n, "lambda_ir", "noise.lambda_ir", unused);
    } else if (cfg.type == "ohmic" || cfg.type == "supra_ohmic") {
        const int expected = cfg.type == "ohmic" ? 1 : 3;
        cfg.p = expected;
        if (n.contains("p") && get_integer(n.at("p"), "noise.p") != expected) {
            throw ConfigError("noise.p", "must be " + std::to_string(expected) + " for noise type '" + cfg.type + "'");
        }
        cfg.lambda_uv = optional_positive(n, "lambda_uv", "noise.lambda_uv");
        if (!cfg.lambda_uv) throw ConfigError("noise.lambda_uv", "required for noise type '" + cfg.type + "'");
        forbid(n, "tau", "noise.tau", unused);
        forbid(n, "lambda_ir", "noise.lambda_ir", unused);
    } else if (cfg.type == "one_over_f") {
        cfg.lambda_uv = optional_positive(n, "lambda_uv", "noise.lambda_uv");
        cfg.lambda_ir = optional_positive(n, "lambda_ir", "noise.lambda_ir");
        if (!cfg.lambda_uv) throw ConfigError("noise.lambda_uv", "required for noise type 'one_over_f'");
        if (!cfg.lambda_ir) throw ConfigError("noise.lambda_ir", "required for noise type 'one_over_f'");
        if (!(*cfg.lambda_ir < *cfg.lambda_uv)) throw ConfigError("noise.lambda_ir", "must be < noise.lambda_uv");
        forbid(n, "tau", "noise.tau", unused);
        forbid(n, "p", "noise.p", unused);
    } else {
        throw ConfigError("noise.type", "unknown noise type '" + cfg.type +
                                            "' (expected ou, ohmic, supra_ohmic or one_over_f)");
    }
    return cfg;
}

ControlConfig parse_control(const json& root) {
    ControlConfig cfg;
    if (!root.contains("control")) return cfg;
    const json& c = require_object(root, "control", "control");
    only_keys(c, "control", {"type", "t_c", "envelope_coeffs"});
    if (!c.contains("type")) throw ConfigError("control.type", "required field is missing");
    cfg.type = get_string(c.at("type"), "control.type");
    if (cfg.type == "none") {
        forbid(c, "t_c", "control.t_c", "not used when control.type is 'none'");
        forbid(c, "envelope_coeffs", "control.envelope_coeffs", "not used when control.type is 'none'");
        return cfg;
    }
    if (cfg.type != "bang_bang" && cfg.type != "continuous") {
        throw ConfigError("control.type", "unknown control type '" + cfg.type + "' (expected none, bang_bang or continuous)");
    }
    cfg.t_c = optional_positive(c, "t_c", "control.t_c");
    if (!cfg.t_c) throw ConfigError("control.t_c", "required for control type '" + cfg.type + "'");
    if (c.contains("envelope_coeffs")) {
        if (cfg.type != "continuous") {
            throw ConfigError("control.envelope_coeffs", "only valid for control type 'continuous'");
        }
        const json& arr = c.at("envelope_coeffs");
        if (!arr.is_array()) throw ConfigError("control.envelope_coeffs", "must be an array of numbers");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.envelope_coeffs.push_back(get_number(arr[i], "control.envelope_coeffs[" + std::to_string(i) + "]"));
        }
    }
    return cfg;
}

GridConfig parse_grid(const json& root) {
    GridConfig cfg;
    if (!root.contains("grid")) return cfg;
    const json& g = require_object(root, "grid", "grid");
    only_keys(g, "grid", {"h", "t_final"});
    if (g.contains("h")) cfg.h = get_positive(g.at("h"), "grid.h");
    if (g.contains("t_final")) cfg.t_final = get_positive(g.at("t_final"), "grid.t_final");
    if (!commensurate_steps(cfg.t_final, cfg.h)) {
        throw ConfigError("grid.h", "must divide grid.t_final into a whole number of steps");
    }
    return cfg;
}

void parse_initial(const json& root, ScenarioConfig& cfg) {
    if (!root.contains("initial")) return;
    const json& v = root.at("initial");
    if (v.is_string()) {
        if (v.get<std::string>() != "plus") throw ConfigError("initial", "string form must be 'plus'");
        return;
    }
    if (!v.is_object()) throw ConfigError("initial", "must be 'plus' or an object {rho00, re_rho01, im_rho01}");
    only_keys(v, "initial", {"rho00", "re_rho01", "im_rho01"});
    if (!v.contains("rho00")) throw ConfigError("initial.rho00", "required field is missing");
    const double rho00 = get_number(v.at("rho00"), "initial.rho00");
    const double re = v.contains("re_rho01") ? get_number(v.at("re_rho01"), "initial.re_rho01") : 0.0;
    const double im = v.contains("im_rho01") ? get_number(v.at("im_rho01"), "initial.im_rho01") : 0.0;
    try {
        const QubitState s = QubitState::validated(rho00, Complex(re, im));
        cfg.initial_rho00 = s.rho00;
        cfg.initial_rho01 = s.rho01;
        cfg.initial_is_plus = false;
    } catch (const ParameterError& e) {
        throw ConfigError("initial", e.what());
    }
}

void parse_sweep(const json& root, ScenarioConfig& cfg) {
    if (!root.contains("sweep")) return;
    const json& arr = root.at("sweep");
    if (!arr.is_array()) throw ConfigError("sweep", "must be an array of T_c values");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        cfg.sweep.push_back(get_positive(arr[i], "sweep[" + std::to_string(i) + "]"));
    }
    if (!cfg.sweep.empty() && cfg.control.type == "none") {
        throw ConfigError("sweep", "requires control.type 'bang_bang' or 'continuous'");
    }
}

void parse_optimize(const json& root, ScenarioConfig& cfg) {
    if (!root.contains("optimize")) return;
    const json& o = require_object(root, "optimize", "optimize");
    only_keys(o, "optimize", {"dimension", "c_max", "budget", "seed"});
    if (o.contains("dimension")) {
        const long long d = get_integer(o.at("dimension"), "optimize.dimension");
        if (d < 1 || d > 16) throw ConfigError("optimize.dimension", "must be in [1, 16]");
        cfg.optimize.dimension = static_cast<int>(d);
    }
    if (o.contains("c_max")) cfg.optimize.c_max = get_positive(o.at("c_max"), "optimize.c_max");
    if (o.contains("budget")) {
        const long long b = get_integer(o.at("budget"), "optimize.budget");
        if (b < 1 || b > 1000000) throw ConfigError("optimize.budget", "must be in [1, 1000000]");
        cfg.optimize.budget = static_cast<int>(b);
    }
    if (o.contains("seed")) {
        const long long s = get_integer(o.at("seed"), "optimize.seed");
        if (s < 0) throw ConfigError("optimize.seed", "must be >= 0");
        cfg.optimize.seed = static_cast<std::uint64_t>(s);
    }
}

void check_commensurate(const ScenarioConfig& cfg) {
    auto check = [&](double t_c, const std::string& source) {
        if (!commensurate_steps(0.5 * t_c, cfg.grid.h)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "T_c/2 = " << 0.5 * t_c << " is not a whole number of grid.h = " << cfg.grid.h << " steps";
            throw ConfigError(source, msg.str());
        }
    };
    if (cfg.control.t_c) check(*cfg.control.t_c, "control.t_c");
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) check(cfg.sweep[i], "sweep[" + std::to_string(i) + "]");
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("<document>", "top level must be an object");
    only_keys(root, "", {"description", "noise", "coupling", "control", "grid", "initial", "sweep", "optimize"});

    ScenarioConfig cfg;
    if (root.contains("description")) cfg.description = get_string(root.at("description"), "description");
    cfg.noise = parse_noise(root);
    if (!root.contains("coupling")) throw ConfigError("coupling", "required field is missing");
    const std::string coupling = get_string(root.at("coupling"), "coupling");
    if (coupling == "sigma_z") {
        cfg.coupling = CouplingKind::Dephasing;
    } else if (coupling == "sigma_minus") {
        cfg.coupling = CouplingKind::Lowering;
    } else {
        throw ConfigError("coupling", "unknown coupling '" + coupling + "' (expected sigma_z or sigma_minus)");
    }
    cfg.control = parse_control(root);
    cfg.grid = parse_grid(root);
    parse_initial(root, cfg);
    parse_sweep(root, cfg);
    parse_optimize(root, cfg);
    check_commensurate(cfg);
    // Builds the objects once so envelope and model constraints surface here.
    build_model(cfg);
    build_pulse(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<document>", "cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string normalized_config_text(const ScenarioConfig& cfg) {
    ordered_json root;
    if (!cfg.description.empty()) root["description"] = cfg.description;
    ordered_json noise;
    noise["type"] = cfg.noise.type;
    if (cfg.noise.tau) noise["tau"] = *cfg.noise.tau;
    if (cfg.noise.p) noise["p"] = *cfg.noise.p;
    if (cfg.noise.lambda_uv) noise["lambda_uv"] = *cfg.noise.lambda_uv;
    if (cfg.noise.lambda_ir) noise["lambda_ir"] = *cfg.noise.lambda_ir;
    noise["strength"] = cfg.noise.strength;
    root["noise"] = noise;
    root["coupling"] = to_string(cfg.coupling);
    ordered_json control;
    control["type"] = cfg.control.type;
    if (cfg.control.t_c) control["t_c"] = *cfg.control.t_c;
    if (cfg.control.type == "continuous") control["envelope_coeffs"] = cfg.control.envelope_coeffs;
    root["control"] = control;
    root["grid"] = ordered_json{{"h", cfg.grid.h}, {"t_final", cfg.grid.t_final}};
    if (cfg.initial_is_plus) {
        root["initial"] = "plus";
    } else {
        root["initial"] = ordered_json{{"rho00", cfg.initial_rho00},
                                       {"re_rho01", cfg.initial_rho01.real()},
                                       {"im_rho01", cfg.initial_rho01.imag()}};
    }
    root["sweep"] = cfg.sweep;
    root["optimize"] = ordered_json{{"dimension", cfg.optimize.dimension},
                                    {"c_max", cfg.optimize.c_max},
                                    {"budget", cfg.optimize.budget},
                                    {"seed", cfg.optimize.seed}};
    return root.dump(2) + "\n";
}

NoiseModel build_model(const ScenarioConfig& cfg) {
    const auto& n = cfg.noise;
    try {
        if (n.type == "ou") return NoiseModel::ornstein_uhlenbeck(*n.tau, n.strength);
        if (n.type == "ohmic" || n.type == "supra_ohmic") return NoiseModel::spin_boson(*n.p, *n.lambda_uv, n.strength);
        if (n.type == "one_over_f") return NoiseModel::one_over_f(*n.lambda_uv, *n.lambda_ir, n.strength);
    } catch (const ParameterError& e) {
        throw ConfigError("noise", e.what());
    }
    throw ConfigError("noise.type", "unknown noise type '" + n.type + "'");
}

PulseProgram build_pulse(const ScenarioConfig& cfg, std::optional<double> t_c) {
    const auto& c = cfg.control;
    if (c.type == "none") {
        if (t_c) throw ConfigError("control.type", "a T_c sweep requires control type 'bang_bang' or 'continuous'");
        return PulseProgram::none();
    }
    const double period = t_c ? *t_c : *c.t_c;
    try {
        if (c.type == "bang_bang") return PulseProgram::bang_bang(period);
        if (c.envelope_coeffs.empty()) return PulseProgram::continuous(Envelope::linear(period));
        return PulseProgram::continuous(Envelope::parametric(period, c.envelope_coeffs));
    } catch (const ParameterError& e) {
        throw ConfigError("control.envelope_coeffs", e.what());
    } catch (const EnvelopeError& e) {
        throw ConfigError("control.envelope_coeffs", e.what());
    }
}

ScenarioDescriptor build_descriptor(const ScenarioConfig& cfg, std::optional<double> t_c) {
    if (t_c && !commensurate_steps(0.5 * *t_c, cfg.grid.h)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "must divide T_c/2 = " << 0.5 * *t_c;
        throw ConfigError("grid.h", msg.str());
    }
    const QubitState initial{cfg.initial_rho00, 1.0 - cfg.initial_rho00, cfg.initial_rho01};
    return ScenarioDescriptor{build_model(cfg), build_pulse(cfg, t_c), cfg.coupling, initial, cfg.grid.h,
                              cfg.grid.t_final};
}

ScenarioDescriptor free_descriptor(const ScenarioConfig& cfg) {
    const QubitState initial{cfg.initial_rho00, 1.0 - cfg.initial_rho00, cfg.initial_rho01};
    return ScenarioDescriptor{build_model(cfg), PulseProgram::none(), cfg.coupling, initial, cfg.grid.h,
                              cfg.grid.t_final};
}

OptimizationProblem build_optimization_problem(const ScenarioConfig& cfg) {
    if (!cfg.control.t_c) throw ConfigError("control.t_c", "optimize needs a cycle period; set control.type and control.t_c");
    OptimizationProblem p{build_model(cfg)};
    p.coupling = cfg.coupling;
    p.period = *cfg.control.t_c;
    p.t_final = cfg.grid.t_final;
    p.h = cfg.grid.h;
    p.dimension = cfg.optimize.dimension;
    p.c_max = cfg.optimize.c_max;
    p.initial = QubitState{cfg.initial_rho00, 1.0 - cfg.initial_rho00, cfg.initial_rho01};
    return p;
}

} // namespace dekohere
