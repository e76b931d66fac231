#ifndef DECOH_CONFIG_HPP
#define DECOH_CONFIG_HPP

#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "decoh/correlator.hpp"
#include "decoh/errors.hpp"
#include "decoh/measurement.hpp"
#include "decoh/oracle.hpp"
#include "decoh/pointer.hpp"
#include "decoh/spectral.hpp"

namespace decoh {

/* Run configuration: one JSON document with strictly validated sections.
 * Unknown keys are rejected everywhere — a typo must fail loudly (exit 2)
 * rather than silently fall back to a default. The "run" section holds
 * command-specific parameters and is validated by the command itself. */

struct PresetSpec {
    std::string name;   // constant | exponential | gaussian
    double tau_c = 0.0; // correlation time; unused by the constant preset
};

struct OracleSpec {
    std::vector<BathMode> modes;
    int n_fock = 30;
    int steps = 2000;
    std::vector<double> times; // empty: command supplies its default grid
    OracleSetup setup;
    double tolerance = 1e-3;
};

struct OutputSpec {
    std::string path = ".";
    std::string format = "csv"; // csv | json
};

struct RunConfig {
    std::optional<SpectralModel> spectral;
    std::optional<PresetSpec> preset;
    std::optional<PointerModel> pointer;
    std::optional<ObjectSystem> object;
    std::optional<double> epsilon; // coupling.epsilon
    std::optional<OracleSpec> oracle;
    nlohmann::json run = nlohmann::json::object();
    OutputSpec output;
};

// ---- typed JSON access -----------------------------------------------------

inline void cfg_require_object(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object())
        throw ConfigError("config: " + where + " must be a JSON object");
}

inline void cfg_check_keys(const nlohmann::json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
    cfg_require_object(obj, where);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " +
                              where);
    }
}

inline const nlohmann::json& cfg_require_key(const nlohmann::json& obj,
                                             const std::string& where,
                                             const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError("config: " + where + " requires key \"" +
                          std::string(key) + "\"");
    return obj.at(key);
}

inline double cfg_as_double(const nlohmann::json& v, const std::string& what) {
    if (!v.is_number())
        throw ConfigError("config: " + what + " must be a number");
    return v.get<double>();
}

inline double cfg_get_double(const nlohmann::json& obj, const std::string& where,
                             const char* key) {
    return cfg_as_double(cfg_require_key(obj, where, key), where + "." + key);
}

inline std::optional<double> cfg_opt_double(const nlohmann::json& obj,
                                            const std::string& where,
                                            const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    return cfg_as_double(obj.at(key), where + "." + key);
}

inline int cfg_as_int(const nlohmann::json& v, const std::string& what) {
    if (!v.is_number_integer())
        throw ConfigError("config: " + what + " must be an integer");
    return v.get<int>();
}

inline int cfg_get_int(const nlohmann::json& obj, const std::string& where,
                       const char* key) {
    return cfg_as_int(cfg_require_key(obj, where, key), where + "." + key);
}

inline std::optional<int> cfg_opt_int(const nlohmann::json& obj,
                                      const std::string& where, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    return cfg_as_int(obj.at(key), where + "." + key);
}

inline std::string cfg_get_string(const nlohmann::json& obj,
                                  const std::string& where, const char* key) {
    const auto& v = cfg_require_key(obj, where, key);
    if (!v.is_string())
        throw ConfigError("config: " + where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::optional<std::string> cfg_opt_string(const nlohmann::json& obj,
                                                 const std::string& where,
                                                 const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_string())
        throw ConfigError("config: " + where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::vector<double> cfg_number_list(const nlohmann::json& v,
                                           const std::string& what) {
    if (!v.is_array())
        throw ConfigError("config: " + what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(cfg_as_double(e, what + " element"));
    return out;
}

// Dense real matrix given as an array of equal-length number rows.
inline Eigen::MatrixXd cfg_matrix(const nlohmann::json& v, const std::string& what,
                                  Eigen::Index n) {
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
        throw ConfigError("config: " + what + " must be an array of " +
                          std::to_string(n) + " rows");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = v.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ConfigError("config: " + what + " row " + std::to_string(i) +
                              " must have " + std::to_string(n) + " numbers");
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = cfg_as_double(row.at(static_cast<std::size_t>(j)),
                                    what + " entry");
    }
    return m;
}

// ---- section parsers ---------------------------------------------------------

namespace detail {

inline SpectralModel parse_spectral(const nlohmann::json& j) {
    cfg_check_keys(j, "spectral", {"type", "m", "cutoff"});
    if (auto t = cfg_opt_string(j, "spectral", "type"); t && *t != "spectral")
        throw ConfigError("config: spectral.type must be \"spectral\"");
    int m = cfg_get_int(j, "spectral", "m");
    double cutoff = cfg_opt_double(j, "spectral", "cutoff").value_or(5.0);
    return make_spectral_model(m, cutoff);
}

inline PresetSpec parse_preset(const nlohmann::json& j) {
    cfg_check_keys(j, "preset", {"type", "name", "tau_c"});
    if (auto t = cfg_opt_string(j, "preset", "type"); t && *t != "preset")
        throw ConfigError("config: preset.type must be \"preset\"");
    PresetSpec p;
    p.name = cfg_get_string(j, "preset", "name");
    if (p.name != "constant" && p.name != "exponential" && p.name != "gaussian")
        throw ConfigError("config: preset.name must be constant, exponential "
                          "or gaussian (got \"" + p.name + "\")");
    auto tc = cfg_opt_double(j, "preset", "tau_c");
    if (p.name == "constant") {
        if (tc)
            throw ConfigError("config: preset.tau_c is not accepted for the "
                              "constant preset");
    } else {
        if (!tc)
            throw ConfigError("config: preset \"" + p.name +
                              "\" requires tau_c");
        if (!(*tc > 0.0))
            throw ConfigError("config: preset.tau_c must be > 0");
        p.tau_c = *tc;
    }
    return p;
}

inline PointerModel parse_pointer(const nlohmann::json& j) {
    cfg_check_keys(j, "pointer", {"mass", "omega", "kappa", "delta_class"});
    double mass = cfg_get_double(j, "pointer", "mass");
    double omega = cfg_get_double(j, "pointer", "omega");
    double kappa = cfg_opt_double(j, "pointer", "kappa").value_or(0.0);
    double delta_class = cfg_get_double(j, "pointer", "delta_class");
    return make_pointer_model(mass, omega, kappa, delta_class);
}

inline ObjectSystem parse_object(const nlohmann::json& j) {
    cfg_check_keys(j, "object",
                   {"eigenvalues", "rho0_re", "rho0_im", "hs_re", "hs_im", "t_s"});
    std::vector<double> evs = cfg_number_list(
        cfg_require_key(j, "object", "eigenvalues"), "object.eigenvalues");
    const Eigen::Index n = static_cast<Eigen::Index>(evs.size());
    if (n < 2) throw ConfigError("config: object.eigenvalues needs >= 2 entries");
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(evs.data(), n);

    Eigen::MatrixXd re = cfg_matrix(cfg_require_key(j, "object", "rho0_re"),
                                    "object.rho0_re", n);
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
    if (j.contains("rho0_im")) im = cfg_matrix(j.at("rho0_im"), "object.rho0_im", n);
    Eigen::MatrixXcd rho0 = re.cast<std::complex<double>>() +
                            std::complex<double>(0.0, 1.0) *
                                im.cast<std::complex<double>>();

    std::optional<Eigen::MatrixXcd> hs;
    if (j.contains("hs_im") && !j.contains("hs_re"))
        throw ConfigError("config: object.hs_im requires object.hs_re");
    if (j.contains("hs_re")) {
        Eigen::MatrixXd hre = cfg_matrix(j.at("hs_re"), "object.hs_re", n);
        Eigen::MatrixXd him = Eigen::MatrixXd::Zero(n, n);
        if (j.contains("hs_im")) him = cfg_matrix(j.at("hs_im"), "object.hs_im", n);
        hs = hre.cast<std::complex<double>>() +
             std::complex<double>(0.0, 1.0) * him.cast<std::complex<double>>();
    }

    std::optional<double> ts = cfg_opt_double(j, "object", "t_s");
    if (ts && !(*ts > 0.0))
        throw ConfigError("config: object.t_s must be > 0");
    return make_object_system(s, rho0, hs, ts);
}

inline double parse_coupling(const nlohmann::json& j) {
    cfg_check_keys(j, "coupling", {"epsilon"});
    double eps = cfg_get_double(j, "coupling", "epsilon");
    if (!(eps > 0.0)) throw ConfigError("config: coupling.epsilon must be > 0");
    return eps;
}

inline OracleSpec parse_oracle(const nlohmann::json& j) {
    cfg_check_keys(j, "oracle",
                   {"modes", "n_fock", "steps", "times", "eps", "s", "sp", "x",
                    "xp", "tolerance"});
    OracleSpec o;
    const auto& modes = cfg_require_key(j, "oracle", "modes");
    if (!modes.is_array() || modes.empty())
        throw ConfigError("config: oracle.modes must be a non-empty array");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const std::string where = "oracle.modes[" + std::to_string(i) + "]";
        cfg_check_keys(modes.at(i), where, {"omega", "g"});
        BathMode md;
        md.omega = cfg_get_double(modes.at(i), where, "omega");
        md.g = cfg_get_double(modes.at(i), where, "g");
        o.modes.push_back(md);
    }
    o.n_fock = cfg_opt_int(j, "oracle", "n_fock").value_or(30);
    o.steps = cfg_opt_int(j, "oracle", "steps").value_or(2000);
    if (j.contains("times"))
        o.times = cfg_number_list(j.at("times"), "oracle.times");
    o.setup.eps = cfg_opt_double(j, "oracle", "eps").value_or(1.0);
    o.setup.s = cfg_opt_double(j, "oracle", "s").value_or(0.0);
    o.setup.sp = cfg_opt_double(j, "oracle", "sp").value_or(1.0);
    o.setup.x = cfg_opt_double(j, "oracle", "x").value_or(0.0);
    o.setup.xp = cfg_opt_double(j, "oracle", "xp").value_or(0.0);
    o.tolerance = cfg_opt_double(j, "oracle", "tolerance").value_or(1e-3);
    if (!(o.tolerance > 0.0))
        throw ConfigError("config: oracle.tolerance must be > 0");
    return o;
}

inline OutputSpec parse_output(const nlohmann::json& j) {
    cfg_check_keys(j, "output", {"path", "format"});
    OutputSpec out;
    if (auto p = cfg_opt_string(j, "output", "path")) out.path = *p;
    if (auto f = cfg_opt_string(j, "output", "format")) {
        if (*f != "csv" && *f != "json")
            throw ConfigError("config: output.format must be csv or json");
        out.format = *f;
    }
    return out;
}

} // namespace detail

// ---- document-level parsing ---------------------------------------------------

inline RunConfig parse_run_config(const nlohmann::json& root) {
    cfg_check_keys(root, "top level",
                   {"spectral", "preset", "pointer", "object", "coupling",
                    "oracle", "run", "output"});
    if (root.contains("spectral") && root.contains("preset"))
        throw ConfigError("config: give exactly one bath source section "
                          "(spectral or preset), not both");
    RunConfig cfg;
    if (root.contains("spectral"))
        cfg.spectral = detail::parse_spectral(root.at("spectral"));
    if (root.contains("preset"))
        cfg.preset = detail::parse_preset(root.at("preset"));
    if (root.contains("pointer"))
        cfg.pointer = detail::parse_pointer(root.at("pointer"));
    if (root.contains("object"))
        cfg.object = detail::parse_object(root.at("object"));
    if (root.contains("coupling"))
        cfg.epsilon = detail::parse_coupling(root.at("coupling"));
    if (root.contains("oracle"))
        cfg.oracle = detail::parse_oracle(root.at("oracle"));
    if (root.contains("run")) {
        cfg_require_object(root.at("run"), "run");
        cfg.run = root.at("run");
    }
    if (root.contains("output"))
        cfg.output = detail::parse_output(root.at("output"));
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: JSON parse error in \"" + path +
                          "\": " + e.what());
    }
    return parse_run_config(root);
}

/* Instantiate the configured bath source. tau_max is chosen by the command
 * (it knows the largest time it will ever evaluate). */
inline BathCorrelator make_correlator(const RunConfig& cfg, double tau_max) {
    if (cfg.spectral)
        return BathCorrelator::from_spectral(*cfg.spectral, tau_max);
    if (cfg.preset) {
        if (cfg.preset->name == "constant")
            return BathCorrelator::constant(tau_max);
        if (cfg.preset->name == "exponential")
            return BathCorrelator::exponential(cfg.preset->tau_c, tau_max);
        return BathCorrelator::gaussian(cfg.preset->tau_c, tau_max);
    }
    throw ConfigError("config: a bath source section (spectral or preset) "
                      "is required");
}

} // namespace decoh

#endif
