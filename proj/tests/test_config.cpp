#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "decoh/config.hpp"
#include "decoh/errors.hpp"

using Catch::Approx;
using namespace decoh;

namespace {

RunConfig parse_str(const std::string& text) {
    return parse_run_config(nlohmann::json::parse(text));
}

} // namespace

TEST_CASE("full document parses with defaults filled in", "[config]") {
    const RunConfig cfg = parse_str(R"({
        "spectral": {"type": "spectral", "m": 1},
        "pointer": {"mass": 10000.0, "omega": 0.03, "kappa": 0.02,
                    "delta_class": 500.0},
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.5, 0.5], [0.5, 0.5]]},
        "coupling": {"epsilon": 2.0},
        "run": {"times": [0.0, 1.0]}
    })");
    REQUIRE(cfg.spectral.has_value());
    REQUIRE(cfg.spectral->m == 1);
    REQUIRE(cfg.spectral->cutoff == 5.0); // default
    REQUIRE_FALSE(cfg.preset.has_value());
    REQUIRE(cfg.pointer.has_value());
    REQUIRE(cfg.pointer->mass == 10000.0);
    REQUIRE(cfg.pointer->kappa == 0.02);
    REQUIRE(cfg.object.has_value());
    REQUIRE(cfg.object->eigenvalues.size() == 2);
    REQUIRE(cfg.object->rho0(0, 1).real() == 0.5);
    REQUIRE(cfg.object->rho0(0, 1).imag() == 0.0);
    REQUIRE_FALSE(cfg.object->has_hs);
    REQUIRE(cfg.epsilon == 2.0);
    REQUIRE(cfg.run.at("times").size() == 2);
    REQUIRE(cfg.output.path == ".");   // defaults: no output section
    REQUIRE(cfg.output.format == "csv");

    // Pointer defaults: kappa omitted means a harmonic well.
    const RunConfig harm = parse_str(R"({
        "pointer": {"mass": 25.0, "omega": 0.2, "delta_class": 500.0}
    })");
    REQUIRE(harm.pointer->kappa == 0.0);
}

TEST_CASE("unknown keys are rejected everywhere", "[config]") {
    REQUIRE_THROWS_WITH(parse_str(R"({"spectrall": {"m": 1}})"),
                        Catch::Matchers::ContainsSubstring("spectrall"));
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"m": 1, "beta": 2.0}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(R"({"preset": {"name": "constant", "shape": "flat"}})"),
        ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "pointer": {"mass": 1.0, "omega": 0.1, "delta_class": 10.0,
                    "friction": 0.5}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"coupling": {"epsilon": 1.0, "eps2": 2.0}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[1.0, 0.0], [0.0, 0.0]], "basis": "z"}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(
            R"({"output": {"path": ".", "format": "csv", "precision": 17}})"),
        ConfigError);
    // run payload must be an object (commands validate its keys themselves)
    REQUIRE_THROWS_AS(parse_str(R"({"run": [1, 2]})"), ConfigError);
}

TEST_CASE("exactly one bath source", "[config]") {
    REQUIRE_THROWS_WITH(parse_str(R"({
        "spectral": {"m": 1},
        "preset": {"name": "constant"}})"),
                        Catch::Matchers::ContainsSubstring("exactly one"));

    const RunConfig none = parse_str(R"({"coupling": {"epsilon": 1.0}})");
    REQUIRE_THROWS_WITH(make_correlator(none, 10.0),
                        Catch::Matchers::ContainsSubstring("bath source"));

    // Optional type discriminators must match their section.
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"type": "preset", "m": 1}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(R"({"preset": {"type": "spectral", "name": "constant"}})"),
        ConfigError);
    REQUIRE_NOTHROW(
        parse_str(R"({"preset": {"type": "preset", "name": "constant"}})"));
}

TEST_CASE("bath dispatch builds the configured source", "[config]") {
    const RunConfig sp = parse_str(R"({"spectral": {"m": 3, "cutoff": 5.0}})");
    const BathCorrelator spec = make_correlator(sp, 10.0);
    REQUIRE(spec.model() != nullptr);
    REQUIRE(spec.model()->m == 3);

    const RunConfig cst = parse_str(R"({"preset": {"name": "constant"}})");
    const BathCorrelator ccorr = make_correlator(cst, 10.0);
    REQUIRE(ccorr.model() == nullptr);
    REQUIRE(ccorr.re_at(5.0) == Approx(1.0).epsilon(1e-12));

    const RunConfig ex =
        parse_str(R"({"preset": {"name": "exponential", "tau_c": 1.0}})");
    REQUIRE(make_correlator(ex, 40.0).re_at(1.0) ==
            Approx(std::exp(-1.0)).epsilon(1e-10));

    const RunConfig ga =
        parse_str(R"({"preset": {"name": "gaussian", "tau_c": 1.0}})");
    REQUIRE(make_correlator(ga, 20.0).re_at(1.0) ==
            Approx(std::exp(-0.5)).epsilon(1e-10));
}

TEST_CASE("preset rules", "[config]") {
    REQUIRE_THROWS_WITH(parse_str(R"({"preset": {"name": "ohmic"}})"),
                        Catch::Matchers::ContainsSubstring("constant"));
    REQUIRE_THROWS_AS(
        parse_str(R"({"preset": {"name": "constant", "tau_c": 1.0}})"),
        ConfigError);
    REQUIRE_THROWS_WITH(parse_str(R"({"preset": {"name": "exponential"}})"),
                        Catch::Matchers::ContainsSubstring("tau_c"));
    REQUIRE_THROWS_AS(
        parse_str(R"({"preset": {"name": "gaussian", "tau_c": 0.0}})"),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(R"({"preset": {"name": "gaussian", "tau_c": -2.0}})"),
        ConfigError);
    const RunConfig ok =
        parse_str(R"({"preset": {"name": "gaussian", "tau_c": 0.7}})");
    REQUIRE(ok.preset->name == "gaussian");
    REQUIRE(ok.preset->tau_c == 0.7);
}

TEST_CASE("numbers are checked strictly", "[config]") {
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"m": 2.5}})"), ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"m": "1"}})"), ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"m": 2}})"), ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"spectral": {"m": 1, "cutoff": 0.0}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "pointer": {"mass": "heavy", "omega": 0.1, "delta_class": 10.0}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"coupling": {"epsilon": true}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"coupling": {"epsilon": 0.0}})"),
                      ConfigError);
    // Integral doubles are fine where a double is expected.
    REQUIRE_NOTHROW(parse_str(R"({"coupling": {"epsilon": 2}})"));
}

TEST_CASE("object section", "[config]") {
    // Hermitian complex state via re/im split.
    const RunConfig cfg = parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.5, 0.2], [0.2, 0.5]],
                   "rho0_im": [[0.0, 0.3], [-0.3, 0.0]],
                   "hs_re": [[0.0, 0.4], [0.4, 0.0]],
                   "t_s": 0.5}
    })");
    REQUIRE(cfg.object->rho0(0, 1) == std::complex<double>(0.2, 0.3));
    REQUIRE(cfg.object->rho0(1, 0) == std::complex<double>(0.2, -0.3));
    REQUIRE(cfg.object->has_hs);
    REQUIRE(cfg.object->hs(0, 1).real() == 0.4);
    REQUIRE(cfg.object->t_s_override.has_value());
    REQUIRE(*cfg.object->t_s_override == 0.5);

    REQUIRE_THROWS_WITH(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.5, 0.0], [0.0, 0.5]],
                   "hs_im": [[0.0, 1.0], [-1.0, 0.0]]}})"),
                        Catch::Matchers::ContainsSubstring("hs_re"));

    // Shape mismatches.
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0]]}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0], "rho0_re": [[1.0, 0.0]]}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0], "rho0_re": [[1.0]]}})"),
                      ConfigError);

    // Physics validation propagates from the object constructor.
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.4, 0.0], [0.0, 0.5]]}})"),
                      ConfigError); // trace 0.9
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [1.0, 1.0],
                   "rho0_re": [[0.5, 0.0], [0.0, 0.5]]}})"),
                      ConfigError); // degenerate records
    REQUIRE_THROWS_AS(parse_str(R"({
        "object": {"eigenvalues": [0.0, 1.0],
                   "rho0_re": [[0.5, 0.0], [0.0, 0.5]], "t_s": 0.0}})"),
                      ConfigError);
}

TEST_CASE("oracle section defaults and validation", "[config]") {
    const RunConfig cfg = parse_str(R"({
        "oracle": {"modes": [{"omega": 0.7, "g": 0.3},
                             {"omega": 1.3, "g": 0.3}]}
    })");
    REQUIRE(cfg.oracle.has_value());
    REQUIRE(cfg.oracle->modes.size() == 2);
    REQUIRE(cfg.oracle->modes[1].omega == 1.3);
    REQUIRE(cfg.oracle->n_fock == 30);
    REQUIRE(cfg.oracle->steps == 2000);
    REQUIRE(cfg.oracle->times.empty());
    REQUIRE(cfg.oracle->tolerance == 1e-3);
    REQUIRE(cfg.oracle->setup.eps == 1.0);
    REQUIRE(cfg.oracle->setup.s == 0.0);
    REQUIRE(cfg.oracle->setup.sp == 1.0);

    const RunConfig full = parse_str(R"({
        "oracle": {"modes": [{"omega": 1.0, "g": 0.2}], "n_fock": 40,
                   "steps": 800, "times": [0.5, 1.5], "eps": 2.0, "s": -1.0,
                   "sp": 1.0, "x": 0.1, "xp": -0.1, "tolerance": 1e-4}
    })");
    REQUIRE(full.oracle->n_fock == 40);
    REQUIRE(full.oracle->times == std::vector<double>{0.5, 1.5});
    REQUIRE(full.oracle->setup.xp == -0.1);

    REQUIRE_THROWS_AS(parse_str(R"({"oracle": {"modes": []}})"), ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({"oracle": {"modes": 3}})"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(R"({"oracle": {"modes": [{"omega": 1.0}]}})"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_str(
            R"({"oracle": {"modes": [{"omega": 1.0, "g": 0.1, "q": 2}]}})"),
        ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "oracle": {"modes": [{"omega": 1.0, "g": 0.1}], "tolerance": 0.0}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_str(R"({
        "oracle": {"modes": [{"omega": 1.0, "g": 0.1}], "steps": 100.5}})"),
                      ConfigError);
}

TEST_CASE("output section", "[config]") {
    const RunConfig cfg =
        parse_str(R"({"output": {"path": "out/x", "format": "json"}})");
    REQUIRE(cfg.output.path == "out/x");
    REQUIRE(cfg.output.format == "json");
    REQUIRE_THROWS_WITH(parse_str(R"({"output": {"format": "yaml"}})"),
                        Catch::Matchers::ContainsSubstring("csv or json"));
    REQUIRE_THROWS_AS(parse_str(R"({"output": {"path": 7}})"), ConfigError);
}

TEST_CASE("config files load with clear failure modes", "[config]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "decoh_config_test";
    fs::create_directories(dir);

    const fs::path good = dir / "good.json";
    {
        std::ofstream out(good);
        out << R"({"spectral": {"m": 5, "cutoff": 4.0}})";
    }
    const RunConfig cfg = load_run_config(good.string());
    REQUIRE(cfg.spectral->m == 5);
    REQUIRE(cfg.spectral->cutoff == 4.0);

    REQUIRE_THROWS_WITH(load_run_config((dir / "absent.json").string()),
                        Catch::Matchers::ContainsSubstring("cannot open"));

    const fs::path bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << "{ \"spectral\": ";
    }
    REQUIRE_THROWS_WITH(load_run_config(bad.string()),
                        Catch::Matchers::ContainsSubstring("JSON parse error"));

    fs::remove_all(dir);
}
