#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dekohere/config.hpp"
#include "dekohere/io.hpp"
#include "dekohere/runner.hpp"

using namespace dekohere;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = fs::path(DEKOHERE_SOURCE_DIR) / "configs";

std::string field_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("dekohere_test_" + name);
    fs::remove_all(dir);
    return dir;
}

constexpr const char* kSmall = R"({
  "noise": {"type": "ou", "tau": 0.5},
  "coupling": "sigma_z",
  "control": {"type": "bang_bang", "t_c": 0.25},
  "grid": {"h": 0.0078125, "t_final": 1.0}
})";

} // namespace

TEST_CASE("Config errors name the offending field", "[config]") {
    CHECK(field_of(R"({"noise": {"type": "pink"}, "coupling": "sigma_z"})") == "noise.type");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": -1}, "coupling": "sigma_z"})") == "noise.tau");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1, "p": 1}, "coupling": "sigma_z"})") == "noise.p");
    CHECK(field_of(R"({"noise": {"type": "ohmic", "p": 3}, "coupling": "sigma_z"})") == "noise.p");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_x"})") == "coupling");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z", "extra": 1})") == "extra");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z",
                       "control": {"type": "bang_bang"}})") == "control.t_c");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z",
                       "control": {"type": "bang_bang", "t_c": 0.5, "envelope_coeffs": [0.1]}})") ==
          "control.envelope_coeffs");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z",
                       "control": {"type": "continuous", "t_c": 0.3}, "grid": {"h": 0.004}})") == "control.t_c");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z", "grid": {"h": 0.3}})") == "grid.h");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z",
                       "control": {"type": "continuous", "t_c": 0.5}, "sweep": [0.5, 0.3]})") == "sweep[1]");
    CHECK(field_of(R"({"noise": {"type": "ou", "tau": 1}, "coupling": "sigma_z", "initial": {"rho00": 1.5}})") ==
          "initial");
    CHECK(field_of("{ not json") == "<document>");
    CHECK(field_of(kSmall) == "<accepted>");
}

TEST_CASE("Normalized config round-trips", "[config]") {
    for (const auto& entry : fs::directory_iterator(kConfigDir)) {
        INFO(entry.path().filename().string());
        const auto cfg = load_config(entry.path());
        const auto once = normalized_config_text(cfg);
        const auto twice = normalized_config_text(parse_config_text(once));
        CHECK(once == twice);
    }
}

TEST_CASE("Normalization makes defaults explicit", "[config]") {
    const auto text = normalized_config_text(parse_config_text(R"({"noise": {"type": "ou", "tau": 0.5}, "coupling": "sigma_minus"})"));
    CHECK(text.find("\"t_final\"") != std::string::npos);
    CHECK(text.find("\"h\"") != std::string::npos);
    CHECK(text.find("\"strength\"") != std::string::npos);
    CHECK(text.find("\"control\"") != std::string::npos);
    CHECK(text.find("\"sigma_minus\"") != std::string::npos);
}

TEST_CASE("Every shipped config builds a scenario", "[config]") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kConfigDir)) {
        INFO(entry.path().filename().string());
        const auto cfg = load_config(entry.path());
        CHECK_NOTHROW(build_descriptor(cfg));
        for (double tc : cfg.sweep) CHECK_NOTHROW(build_descriptor(cfg, tc));
        ++count;
    }
    CHECK(count >= 16);
}

TEST_CASE("format_number is exact and locale independent", "[io]") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    for (double v : {1e-300, 0.1, 2.0 / 3.0, 12345.678, -7.25e-9}) {
        const auto s = format_number(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("Trajectory CSV layout", "[io]") {
    const auto res = run_config(parse_config_text(kSmall));
    std::ostringstream out;
    write_trajectory_csv(out, res.trajectory);
    const auto text = out.str();
    CHECK(text.rfind(std::string(kTrajectoryHeader) + "\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(res.trajectory.size() + 1));

    const auto dir = scratch_dir("csv");
    write_trajectory_csv(dir / "nested" / "traj.csv", res.trajectory);
    const auto table = read_csv(dir / "nested" / "traj.csv");
    REQUIRE(table.rows.size() == res.trajectory.size());
    const auto re = table.numeric_column("re_rho01");
    const auto mu = table.numeric_column("coeff_mu");
    for (std::size_t i = 0; i < re.size(); ++i) {
        CHECK(re[i] == res.trajectory.states[i].rho01.real());
        CHECK(mu[i] == res.trajectory.coeff_mu(i));
    }
    CHECK_THROWS(table.column("nope"));
    fs::remove_all(dir);
}

TEST_CASE("Runs are byte-for-byte deterministic", "[io]") {
    const auto cfg = parse_config_text(kSmall);
    const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
    write_run(a, run_config(cfg));
    write_run(b, run_config(cfg));
    CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
    CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("Report round-trips and carries the metrics", "[io]") {
    const auto res = run_config(parse_config_text(kSmall));
    const auto dir = scratch_dir("report");
    write_run(dir, res);
    const auto report = read_report(dir / "report.txt");
    auto get = [&](const std::string& key) {
        for (const auto& [k, v] : report) if (k == key) return v;
        FAIL("missing key " << key);
        return std::string();
    };
    CHECK(get("model") == "ou(tau=0.5)");
    CHECK(get("residual_decoherence") == format_number(res.metrics.residual_decoherence));
    CHECK(get("t2") == format_t2(res.metrics.t2));
    CHECK(format_t2(std::nullopt) == "not reached");
    fs::remove_all(dir);
}

TEST_CASE("Sweep drops duplicate periods and writes a summary", "[io][runner]") {
    auto cfg = parse_config_text(kSmall);
    std::vector<std::string> warnings;
    CHECK(dedupe_periods({0.5, 0.25, 0.5, 0.125, 0.25}, warnings) == std::vector<double>{0.5, 0.25, 0.125});
    CHECK(warnings.size() == 2);

    const auto sweep = run_sweep(cfg, {0.25, 0.125, 0.25});
    REQUIRE(sweep.entries.size() == 2);
    CHECK(sweep.warnings.size() == 1);
    // Parallel and sequential sweeps agree exactly.
    const auto serial = run_sweep(cfg, {0.25, 0.125}, false);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(sweep.entries[i].trajectory.states.back().rho01 == serial.entries[i].trajectory.states.back().rho01);
    }

    const auto dir = scratch_dir("sweep");
    write_sweep(dir, sweep);
    CHECK(fs::exists(dir / "trajectory_free.csv"));
    CHECK(fs::exists(dir / sweep_csv_name(0.25)));
    CHECK(fs::exists(dir / sweep_csv_name(0.125)));
    const auto summary = read_csv(dir / "summary.csv");
    CHECK(summary.header == std::vector<std::string>{"t_c", "residual", "t2", "suppression_ratio"});
    REQUIRE(summary.rows.size() == 3);
    CHECK(summary.rows[0][0] == "free");
    CHECK(summary.rows[1][0] == "0.25");
    fs::remove_all(dir);
}

TEST_CASE("Empty sweep writes only the free reference", "[io][runner]") {
    const auto sweep = run_sweep(parse_config_text(kSmall), {});
    const auto dir = scratch_dir("sweep_empty");
    write_sweep(dir, sweep);
    const auto summary = read_csv(dir / "summary.csv");
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.rows[0][0] == "free");
    fs::remove_all(dir);
}

TEST_CASE("Optimization outputs", "[io][runner]") {
    OptimizationProblem p{NoiseModel::ornstein_uhlenbeck(0.5)};
    p.h = 1.0 / 128;
    p.dimension = 2;
    const auto res = optimize_envelope(p, {.budget = 12, .seed = 1});
    const auto dir = scratch_dir("opt");
    write_optimization(dir, res);
    const auto log = read_csv(dir / "optimize_log.csv");
    CHECK(log.header == std::vector<std::string>{"index", "c_1", "c_2", "objective", "best_so_far"});
    CHECK(log.rows.size() == res.log.size());
    CHECK(fs::exists(dir / "optimize_report.txt"));
    fs::remove_all(dir);
}
