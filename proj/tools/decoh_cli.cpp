// Command-line driver: curve/table generation (figure1, dpeak), object-pointer
// snapshots (evolve) and the brute-force harmonic-bath check (oracle-check).
// All data files are byte-deterministic for a fixed config.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "decoh/decoh.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json_file(const fs::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw decoh::Error("cannot open " + p.string() + " for writing");
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw decoh::Error("write failed: " + p.string());
}

// Rows as CSV (shortest round-trip decimals) or as a JSON array of
// column-keyed objects, per output.format.
void write_rows(const fs::path& dir, const std::string& stem,
                const std::vector<std::string>& cols,
                const std::vector<std::vector<double>>& rows,
                const std::string& format) {
    if (format == "csv") {
        decoh::CsvWriter w((dir / (stem + ".csv")).string());
        w.header(cols);
        for (const auto& r : rows) w.row(r);
        w.close();
        return;
    }
    json arr = json::array();
    for (const auto& r : rows) {
        json obj;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (!std::isfinite(r[i]))
                throw decoh::Error("non-finite value in output row");
            obj[cols[i]] = r[i];
        }
        arr.push_back(obj);
    }
    write_json_file(dir / (stem + ".json"), arr);
}

json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

json source_json(const decoh::RunConfig& cfg) {
    if (cfg.spectral)
        return {{"type", "spectral"},
                {"m", cfg.spectral->m},
                {"cutoff", cfg.spectral->cutoff}};
    if (cfg.preset) {
        json p = {{"type", "preset"}, {"name", cfg.preset->name}};
        if (cfg.preset->name != "constant") p["tau_c"] = cfg.preset->tau_c;
        return p;
    }
    return nullptr;
}

int cmd_figure1(const decoh::RunConfig& cfg, const fs::path& dir, int threads) {
    if (cfg.preset)
        throw decoh::ConfigError(
            "figure1 requires a spectral bath source, not a preset");
    decoh::cfg_check_keys(cfg.run, "run",
                          {"m_list", "tdec_min", "tdec_max", "points", "tau_max"});
    std::vector<int> m_list{1, 3, 5};
    if (cfg.run.contains("m_list")) {
        const auto& ml = cfg.run.at("m_list");
        if (!ml.is_array() || ml.empty())
            throw decoh::ConfigError(
                "config: run.m_list must be a non-empty array");
        m_list.clear();
        for (const auto& e : ml)
            m_list.push_back(decoh::cfg_as_int(e, "run.m_list element"));
        for (std::size_t i = 0; i < m_list.size(); ++i)
            for (std::size_t j = i + 1; j < m_list.size(); ++j)
                if (m_list[i] == m_list[j])
                    throw decoh::ConfigError("config: run.m_list has duplicates");
    }
    const double lo = decoh::cfg_opt_double(cfg.run, "run", "tdec_min").value_or(0.01);
    const double hi = decoh::cfg_opt_double(cfg.run, "run", "tdec_max").value_or(100.0);
    const int points = decoh::cfg_opt_int(cfg.run, "run", "points").value_or(60);
    if (points < 2) throw decoh::ConfigError("config: run.points must be >= 2");
    const std::vector<double> grid = decoh::log_grid(lo, hi, std::size_t(points));
    const double tau_max =
        decoh::cfg_opt_double(cfg.run, "run", "tau_max").value_or(1.02 * hi + 1.0);
    const double cutoff = cfg.spectral ? cfg.spectral->cutoff : 5.0;

    // Curves are independent; rows inside a curve share one correlator.
    std::vector<decoh::Figure1Curve> curves(m_list.size());
    decoh::parallel_for(m_list.size(), threads, [&](std::size_t i) {
        const auto sm = decoh::make_spectral_model(m_list[i], cutoff);
        const auto corr = decoh::BathCorrelator::from_spectral(sm, tau_max);
        curves[i] = decoh::figure1_curve(corr, grid);
    });

    json man;
    man["command"] = "figure1";
    man["grid"] = {{"tdec_min", lo},
                   {"tdec_max", hi},
                   {"points", points},
                   {"tau_max", tau_max}};
    man["cutoff"] = cutoff;
    man["curves"] = json::array();
    const std::string ext = cfg.output.format == "csv" ? ".csv" : ".json";
    for (const auto& c : curves) {
        const std::string stem = "figure1_m" + std::to_string(c.m);
        std::vector<std::vector<double>> rows;
        rows.reserve(c.rows.size());
        for (const auto& r : c.rows)
            rows.push_back({r.tent_over_eta, r.tdec_numeric, r.tdec_slow,
                            r.tdec_markov});
        write_rows(dir, stem,
                   {"tent_over_eta", "tdec_numeric", "tdec_slow", "tdec_markov"},
                   rows, cfg.output.format);
        man["curves"].push_back({{"m", c.m},
                                 {"cutoff", c.cutoff},
                                 {"c_m", c.c_m},
                                 {"gamma", c.gamma},
                                 {"rows", c.rows.size()},
                                 {"file", stem + ext}});
    }
    write_json_file(dir / "manifest.json", man);
    return 0;
}

int cmd_dpeak(const decoh::RunConfig& cfg, const fs::path& dir) {
    decoh::cfg_check_keys(cfg.run, "run",
                          {"t_min", "t_max", "points", "eps_ds", "tau_max"});
    const double t_min = decoh::cfg_opt_double(cfg.run, "run", "t_min").value_or(0.0);
    const double t_max = decoh::cfg_opt_double(cfg.run, "run", "t_max").value_or(5.0);
    const int points = decoh::cfg_opt_int(cfg.run, "run", "points").value_or(200);
    const double eps_ds =
        decoh::cfg_opt_double(cfg.run, "run", "eps_ds").value_or(1.0);
    if (!(t_min >= 0.0)) throw decoh::ConfigError("config: run.t_min must be >= 0");
    if (!(t_max > t_min))
        throw decoh::ConfigError("config: run.t_max must be > run.t_min");
    if (points < 2) throw decoh::ConfigError("config: run.points must be >= 2");
    if (!(eps_ds > 0.0)) throw decoh::ConfigError("config: run.eps_ds must be > 0");
    // An explicit tau_max is honored as given: a grid that runs past the
    // tabulated range must fail with a range diagnostic, not silently extend.
    const double tau_max =
        decoh::cfg_opt_double(cfg.run, "run", "tau_max").value_or(1.02 * t_max + 1.0);

    const decoh::BathCorrelator corr = decoh::make_correlator(cfg, tau_max);
    std::vector<std::vector<double>> rows;
    rows.reserve(std::size_t(points));
    for (int i = 0; i < points; ++i) {
        const double t =
            t_min + (t_max - t_min) * double(i) / double(points - 1);
        rows.push_back({t, decoh::d_peak(corr, eps_ds, t)});
    }
    write_rows(dir, "dpeak", {"tau", "d_peak"}, rows, cfg.output.format);

    json man;
    man["command"] = "dpeak";
    man["source"] = source_json(cfg);
    man["eps_ds"] = eps_ds;
    man["grid"] = {{"t_min", t_min},
                   {"t_max", t_max},
                   {"points", points},
                   {"tau_max", tau_max}};
    write_json_file(dir / "manifest.json", man);
    return 0;
}

int cmd_evolve(const decoh::RunConfig& cfg, const fs::path& dir) {
    decoh::cfg_check_keys(cfg.run, "run", {"times", "tau_max"});
    if (!cfg.pointer)
        throw decoh::ConfigError("evolve: config needs a \"pointer\" section");
    if (!cfg.object)
        throw decoh::ConfigError("evolve: config needs an \"object\" section");
    if (!cfg.epsilon)
        throw decoh::ConfigError("evolve: config needs a \"coupling\" section");
    const std::vector<double> times = decoh::cfg_number_list(
        decoh::cfg_require_key(cfg.run, "run", "times"), "run.times");
    if (times.empty())
        throw decoh::ConfigError("config: run.times must not be empty");
    double t_last = 0.0;
    for (double t : times) {
        if (!(t >= 0.0))
            throw decoh::ConfigError("config: run.times must all be >= 0");
        t_last = std::max(t_last, t);
    }
    const double tau_max = decoh::cfg_opt_double(cfg.run, "run", "tau_max")
                               .value_or(std::max(1.25 * t_last, 20.0));

    const decoh::BathCorrelator corr = decoh::make_correlator(cfg, tau_max);
    decoh::require_stable(*cfg.pointer, corr.gamma0());
    const decoh::MeasurementSetup ms(*cfg.object, *cfg.pointer, *cfg.epsilon,
                                     corr);

    const Eigen::VectorXd& ev = ms.object().eigenvalues;
    const auto n = std::size_t(ev.size());
    const double s_min = ev.minCoeff(), s_max = ev.maxCoeff();
    const double w = ms.initial_state().window();
    const double step = ms.scales().delta_eff / 16.0;
    const double eps = ms.eps();

    std::vector<std::string> mcols{"x"};
    for (std::size_t i = 0; i < n; ++i)
        mcols.push_back("marginal_" + std::to_string(i));

    json files = json::array();
    const std::string ext = cfg.output.format == "csv" ? ".csv" : ".json";
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const double lo = -w + eps * s_min * t;
        const double hi = w + eps * s_max * t;
        const auto npts = std::size_t((hi - lo) / step) + 1;
        std::vector<std::vector<double>> rows;
        rows.reserve(npts);
        for (std::size_t a = 0; a < npts; ++a) {
            std::vector<double> row;
            row.reserve(n + 1);
            const double x = lo + double(a) * step;
            row.push_back(x);
            for (std::size_t i = 0; i < n; ++i)
                row.push_back(ms.pointer_marginal(ev[Eigen::Index(i)], x, t));
            rows.push_back(std::move(row));
        }
        const std::string stem = "marginals_" + std::to_string(k);
        write_rows(dir, stem, mcols, rows, cfg.output.format);
        files.push_back({{"t", t}, {"file", stem + ext}});
    }

    // Coherence summary: one row per snapshot.
    std::vector<std::string> scols{"t", "max_offdiag", "marginal_norm"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            scols.push_back("coh_" + std::to_string(i) + "_" + std::to_string(j));
    std::vector<std::vector<double>> srows;
    srows.reserve(times.size());
    for (double t : times) {
        std::vector<double> row{t, ms.max_offdiag_modulus(t), ms.marginal_norm(t)};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                row.push_back(ms.reduced_object_coherence(
                    ev[Eigen::Index(i)], ev[Eigen::Index(j)], t));
        srows.push_back(std::move(row));
    }
    write_rows(dir, "summary", scols, srows, cfg.output.format);

    const decoh::TimescaleReport tr = ms.validate_timescales(t_last);
    json rep;
    rep["command"] = "evolve";
    rep["t"] = tr.requested_t;
    rep["t_dec"] = tr.t_dec;
    rep["t_ent"] = tr.t_ent;
    rep["t_int"] = finite_or_string(tr.t_int);
    rep["t_s"] = finite_or_string(tr.t_s);
    rep["t_p"] = tr.t_p;
    rep["regime"] = decoh::to_string(tr.regime);
    rep["ok"] = tr.ok;
    rep["ratios"] = json::array();
    for (const auto& r : tr.ratios)
        rep["ratios"].push_back(
            {{"name", r.name}, {"value", r.value}, {"flagged", r.flagged}});
    rep["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
    rep["born_weights"] = ms.born_weights();
    rep["gamma0"] = corr.gamma0();
    const decoh::PointerScales& sc = ms.scales();
    rep["scales"] = {{"lambda_th", sc.lambda_th},
                     {"delta_th", sc.delta_th},
                     {"delta_eff", sc.delta_eff},
                     {"w_eff", finite_or_string(sc.w_eff)},
                     {"v0_eff", finite_or_string(sc.v0_eff)},
                     {"has_barrier", sc.has_barrier}};
    rep["warnings"] = json::array();
    for (const auto& wn : sc.warnings)
        rep["warnings"].push_back({{"code", wn.code}, {"text", wn.text}});
    rep["times"] = times;
    rep["tau_max"] = tau_max;
    rep["snapshots"] = files;
    write_json_file(dir / "report.json", rep);
    return 0;
}

int cmd_oracle_check(const decoh::RunConfig& cfg, const fs::path& dir) {
    decoh::cfg_check_keys(cfg.run, "run", {});
    if (!cfg.oracle)
        throw decoh::ConfigError(
            "oracle-check: config needs an \"oracle\" section");
    const decoh::OracleSpec& o = *cfg.oracle;
    const decoh::DiscreteBath bath(o.modes, o.n_fock);
    const std::vector<double> times =
        o.times.empty() ? decoh::log_grid(0.1, 3.0, 10) : o.times;
    const decoh::OracleReport rep =
        decoh::compare_with_qclt(bath, o.setup, times, o.steps);

    std::vector<std::vector<double>> rows;
    rows.reserve(rep.rows.size());
    for (const auto& r : rep.rows)
        rows.push_back({r.t, r.exact_mod, r.exact_phase, r.gauss_mod, r.rel_dev});
    write_rows(dir, "oracle_check",
               {"t", "exact_mod", "exact_phase", "gauss_mod", "rel_dev"}, rows,
               cfg.output.format);

    const bool pass = rep.max_rel_dev <= o.tolerance;
    json man;
    man["command"] = "oracle-check";
    man["modes"] = json::array();
    for (const auto& md : o.modes)
        man["modes"].push_back({{"omega", md.omega}, {"g", md.g}});
    man["n_fock"] = o.n_fock;
    man["steps"] = o.steps;
    man["setup"] = {{"eps", o.setup.eps},
                    {"s", o.setup.s},
                    {"sp", o.setup.sp},
                    {"x", o.setup.x},
                    {"xp", o.setup.xp}};
    man["tolerance"] = o.tolerance;
    man["max_rel_dev"] = rep.max_rel_dev;
    man["pass"] = pass;
    write_json_file(dir / "manifest.json", man);
    if (!pass)
        std::cerr << "oracle deviation " << rep.max_rel_dev
                  << " exceeds tolerance " << o.tolerance << '\n';
    return pass ? 0 : 5;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bath decoherence model: curves, snapshots and oracle checks"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_override;
    int threads = 1;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--config", config_path, "JSON run configuration")
            ->required();
        s->add_option("--out", out_override,
                      "output directory (overrides output.path)");
        s->add_option("--threads", threads, "worker threads (default 1)")
            ->check(CLI::PositiveNumber);
    };
    CLI::App* fig =
        app.add_subcommand("figure1", "decoherence-time curves vs t_ent/eta");
    CLI::App* dpk =
        app.add_subcommand("dpeak", "peak decoherence exponent vs time");
    CLI::App* evo = app.add_subcommand(
        "evolve", "object-pointer snapshots and coherence summary");
    CLI::App* orc = app.add_subcommand(
        "oracle-check", "brute-force harmonic-bath comparison");
    for (auto* s : {fig, dpk, evo, orc}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // bad invocation is a config error
    }

    try {
        decoh::RunConfig cfg = decoh::load_run_config(config_path);
        if (!out_override.empty()) cfg.output.path = out_override;
        const fs::path dir(cfg.output.path);
        fs::create_directories(dir);
        if (fig->parsed()) return cmd_figure1(cfg, dir, threads);
        if (dpk->parsed()) return cmd_dpeak(cfg, dir);
        if (evo->parsed()) return cmd_evolve(cfg, dir);
        return cmd_oracle_check(cfg, dir);
    } catch (const decoh::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const decoh::StabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const decoh::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
