// Batch driver: reads a JSON experiment configuration, orchestrates the
// library calls, and writes deterministic JSON / CSV artifacts.

#include "pqcat/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace pqcat;

namespace {

struct Flags {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    long long seed = -1;
};

void add_common(CLI::App* cmd, Flags& fl) {
    cmd->add_option("--config", fl.config_path, "JSON experiment configuration file");
    cmd->add_option("--out", fl.out_dir, "output directory (overrides the config)");
    cmd->add_option("--threads", fl.threads, "worker threads (overrides the config)");
    cmd->add_option("--seed", fl.seed, "matrix generator seed (overrides the config)");
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

ExperimentConfig resolve_config(const Flags& fl) {
    nlohmann::json j =
        fl.config_path.empty() ? nlohmann::json::object() : load_json_file(fl.config_path);
    ExperimentConfig c = parse_config(j);
    if (fl.threads > 0) c.threads = fl.threads;
    if (fl.seed >= 0) c.seed = static_cast<std::uint64_t>(fl.seed);
    if (!fl.out_dir.empty()) c.out_dir = fl.out_dir;
    return c;
}

CatMap config_map(ExperimentConfig& c) {
    if (c.generated) {
        const CatMap m = random_hyperbolic(c.n, c.seed, c.word_length);
        c.matrix = m.mat;  // echoed for provenance
        return m;
    }
    return CatMap::from_matrix(c.matrix);
}

void ensure_out_dir(const ExperimentConfig& c) {
    std::filesystem::create_directories(c.out_dir);
}

std::string out_path(const ExperimentConfig& c, const std::string& name) {
    return (std::filesystem::path(c.out_dir) / name).string();
}

void write_json(const ExperimentConfig& c, const std::string& name, const nlohmann::json& j) {
    write_text(out_path(c, name), j.dump(2) + "\n");
    std::cout << "wrote " << out_path(c, name) << "\n";
}

nlohmann::json rat_vec_json(const RatVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(rat_to_string(r));
    return a;
}

nlohmann::json analyze_json(const CatMap& m, const ExperimentConfig& c) {
    const ParityVector phi = parity_vector(m);
    const ConnectionParameter kap = connection_parameter(m);
    const NormalForm nf = normal_form(m);

    nlohmann::json jm = nlohmann::json::array();
    for (int r = 0; r < m.mat.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int col = 0; col < m.mat.cols(); ++col) row.push_back(m.mat(r, col));
        jm.push_back(row);
    }

    std::vector<int> phiv(phi.phi.data(), phi.phi.data() + phi.phi.size());
    nlohmann::json out{{"n", m.n},
                       {"matrix", jm},
                       {"phi", phiv},
                       {"parity_zero", phi.is_zero()},
                       {"kappa_tilde", rat_vec_json(kap.kappa_tilde)},
                       {"kappa", rat_vec_json(kap.kappa)},
                       {"det_e", std::abs(nf.det_e())},
                       {"normal_form_residual", nf.residual},
                       {"symplectic_defect", nf.symplectic_defect}};

    nlohmann::json quant = nlohmann::json::array();
    for (int bigN : c.modes) {
        if (bigN < 1) continue;
        const auto thetas = quantization_thetas(m, bigN);
        bool zero_ok = false;
        for (const auto& th : thetas) {
            bool all_zero = true;
            for (const auto& r : th) all_zero = all_zero && r == 0;
            zero_ok = zero_ok || all_zero;
        }
        quant.push_back(
            nlohmann::json{{"N", bigN}, {"solutions", thetas.size()}, {"theta_zero", zero_ok}});
    }
    out["quantization"] = quant;
    return out;
}

int model_order_for(const CatMap& m, int mode) {
    if (mode == 0) return 6;
    int d = 1;
    for (int i = 0; i < m.n; ++i) d *= std::abs(mode);
    return d + 3;
}

std::string loglog_csv(const CorrelationSeries& s) {
    std::string out = "t,log10_abs_c\n";
    for (int t = 1; t <= s.values.size(); ++t) {
        const double a = std::abs(s.values[t - 1]);
        out += std::to_string(t) + "," + d17(a > 0 ? std::log10(a) : -400.0) + "\n";
    }
    return out;
}

CorrelationSeries simulate_mode(const CatMap& m, const ExperimentConfig& c, int mode) {
    const ModeObservable u = default_mode_observable(m.n, mode, c.observable_variant);
    const ModeObservable v = default_mode_observable(m.n, mode, c.observable_variant + 1);
    return correlation_series(m, u, v, c.bigT, c.grid, c.threads);
}

int cmd_analyze(const Flags& fl, const std::string& matrix_arg) {
    ExperimentConfig c;
    if (!matrix_arg.empty()) {
        nlohmann::json jm;
        try {
            jm = nlohmann::json::parse(matrix_arg);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("matrix argument is not valid JSON: ") + e.what());
        }
        nlohmann::json cfg = nlohmann::json::object();
        cfg["matrix"] = jm;
        if (jm.is_array() && jm.size() >= 2 && jm.size() % 2 == 0) {
            cfg["n"] = static_cast<int>(jm.size()) / 2;
        }
        c = parse_config(cfg);
        if (!fl.config_path.empty()) throw ConfigError("give either --config or an inline matrix");
    } else {
        c = resolve_config(fl);
    }
    CatMap m = config_map(c);
    nlohmann::json out = analyze_json(m, c);
    out["config"] = config_echo(c);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_predict(const Flags& fl) {
    ExperimentConfig c = resolve_config(fl);
    CatMap m = config_map(c);
    ensure_out_dir(c);
    for (int bigN : c.modes) {
        if (bigN < 1) continue;
        const ResonancePrediction p = predicted_resonances(m, bigN, c.k_max);
        nlohmann::json j = prediction_json(p);
        j["N"] = bigN;
        j["config"] = config_echo(c);
        write_json(c, "prediction_N" + std::to_string(bigN) + ".json", j);
    }
    return 0;
}

int cmd_simulate(const Flags& fl) {
    ExperimentConfig c = resolve_config(fl);
    CatMap m = config_map(c);
    ensure_out_dir(c);
    for (int bigN : c.modes) {
        const CorrelationSeries s = simulate_mode(m, c, bigN);
        write_text(out_path(c, "series_N" + std::to_string(bigN) + ".csv"), series_csv(s));
        std::cout << "wrote " << out_path(c, "series_N" + std::to_string(bigN) + ".csv") << "\n";
        write_text(out_path(c, "loglog_N" + std::to_string(bigN) + ".csv"), loglog_csv(s));
        std::cout << "wrote " << out_path(c, "loglog_N" + std::to_string(bigN) + ".csv") << "\n";
    }
    return 0;
}

int cmd_extract(const Flags& fl) {
    ExperimentConfig c = resolve_config(fl);
    CatMap m = config_map(c);
    ensure_out_dir(c);
    for (int bigN : c.modes) {
        const CorrelationSeries s = simulate_mode(m, c, bigN);
        const PoleSet poles = extract_poles(s.values, model_order_for(m, bigN));
        nlohmann::json j = poles_json(poles);
        j["N"] = bigN;
        j["grid"] = s.grid;
        j["T"] = c.bigT;
        j["config"] = config_echo(c);
        write_json(c, "poles_N" + std::to_string(bigN) + ".json", j);
    }
    return 0;
}

nlohmann::json comparison_json(const PoleComparison& cmp) {
    return nlohmann::json{{"outer_count", cmp.outer_count},
                          {"expected_count", cmp.expected_count},
                          {"max_modulus_rel_err", cmp.max_modulus_rel_err},
                          {"max_phase_diff_err", cmp.max_phase_diff_err},
                          {"moduli_ok", cmp.moduli_ok},
                          {"phases_ok", cmp.phases_ok},
                          {"pass", cmp.ok()}};
}

Observable observable_over_modes(const ExperimentConfig& c, int n, int variant) {
    Observable o;
    o.n = n;
    std::vector<int> modes{0};
    for (int bigN : c.modes) {
        if (bigN == 0) continue;
        modes.push_back(bigN);
        modes.push_back(-bigN);
    }
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    for (int mode : modes) o.parts.push_back(default_mode_observable(n, mode, variant));
    return o;
}

int cmd_validate(const Flags& fl) {
    ExperimentConfig c = resolve_config(fl);
    CatMap m = config_map(c);
    ensure_out_dir(c);

    bool all_ok = true;
    nlohmann::json report;
    report["config"] = config_echo(c);
    report["path"] = m.n == 1 ? "full" : "prediction_vs_extraction";

    nlohmann::json per_mode = nlohmann::json::array();
    for (int bigN : c.modes) {
        if (bigN < 1) continue;
        const ResonancePrediction pred = predicted_resonances(m, bigN, c.k_max);
        const CorrelationSeries s = simulate_mode(m, c, bigN);
        const PoleSet poles = extract_poles(s.values, model_order_for(m, bigN));
        const PoleComparison cmp = compare_outer_band(poles, pred.modulus_scale, pred.phases,
                                                      1e-3, 1e-3);
        all_ok = all_ok && cmp.ok();
        nlohmann::json j{{"N", bigN},
                         {"prediction", prediction_json(pred)},
                         {"poles", poles_json(poles)},
                         {"comparison", comparison_json(cmp)}};
        per_mode.push_back(j);
        std::cout << "mode N=" << bigN << ": " << (cmp.ok() ? "PASS" : "FAIL")
                  << " (modulus err " << cmp.max_modulus_rel_err << ", phase err "
                  << cmp.max_phase_diff_err << ")\n";
        write_text(out_path(c, "series_N" + std::to_string(bigN) + ".csv"), series_csv(s));
    }
    report["modes"] = per_mode;

    if (m.n == 1) {
        int first_mode = 0;
        for (int bigN : c.modes) {
            if (bigN >= 1 && (first_mode == 0 || bigN < first_mode)) first_mode = bigN;
        }
        if (first_mode >= 1) {
            const ModeObservable u = default_mode_observable(m.n, first_mode, c.observable_variant);
            const ModeObservable v =
                default_mode_observable(m.n, first_mode, c.observable_variant + 1);
            const Theorem2Report t2 =
                theorem2_report(m, first_mode, u, v, c.bigT, c.grid, c.threads);
            report["theorem2"] = theorem2_json(t2);
            all_ok = all_ok && t2.residual_decays;
            std::cout << "asymptotic fit N=" << first_mode << ": "
                      << (t2.residual_decays ? "PASS" : "FAIL") << " (ratio " << t2.decay_ratio
                      << " vs bound " << t2.ratio_bound << ")\n";
        }
        const Observable ou = observable_over_modes(c, m.n, c.observable_variant);
        const Observable ov = observable_over_modes(c, m.n, c.observable_variant + 1);
        const CorollaryReport cr =
            corollary_report(m, ou, ov, c.bigT, c.grid, 50.0, c.threads);
        report["corollary"] = corollary_json(cr);
        const bool cr_ok = cr.mode0_matches && cr.remainder_bounded;
        all_ok = all_ok && cr_ok;
        std::cout << "multimode decay: " << (cr_ok ? "PASS" : "FAIL") << " (mode0 err "
                  << cr.mode0_err << ", scaled remainder " << cr.max_scaled_remainder << ")\n";
    }

    report["pass"] = all_ok;
    write_json(c, "validation.json", report);
    std::cout << (all_ok ? "VALIDATE PASS" : "VALIDATE FAIL") << "\n";
    return all_ok ? 0 : 1;
}

int cmd_report(const Flags& fl) {
    ExperimentConfig c = resolve_config(fl);
    CatMap m = config_map(c);
    ensure_out_dir(c);
    if (m.n != 1) {
        std::cout << "asymptotics reports are 1-D only; run validate for n > 1\n";
        return 0;
    }
    for (int bigN : c.modes) {
        if (bigN < 1) continue;
        const ModeObservable u = default_mode_observable(m.n, bigN, c.observable_variant);
        const ModeObservable v = default_mode_observable(m.n, bigN, c.observable_variant + 1);
        const Theorem2Report t2 = theorem2_report(m, bigN, u, v, c.bigT, c.grid, c.threads);
        nlohmann::json j = theorem2_json(t2);
        j["N"] = bigN;
        j["config"] = config_echo(c);
        write_json(c, "theorem2_N" + std::to_string(bigN) + ".json", j);
    }
    const Observable ou = observable_over_modes(c, m.n, c.observable_variant);
    const Observable ov = observable_over_modes(c, m.n, c.observable_variant + 1);
    const CorollaryReport cr = corollary_report(m, ou, ov, c.bigT, c.grid, 50.0, c.threads);
    nlohmann::json j = corollary_json(cr);
    j["config"] = config_echo(c);
    write_json(c, "corollary.json", j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prequantum and quantum cat map laboratory"};
    app.require_subcommand(1);

    Flags fl;
    std::string matrix_arg;

    CLI::App* c_an = app.add_subcommand(
        "analyze", "symplectic checks, parity vector, connection parameter, normal form");
    add_common(c_an, fl);
    c_an->add_option("matrix", matrix_arg, "inline 2n x 2n integer matrix as JSON rows");

    CLI::App* c_pr = app.add_subcommand("predict", "write the predicted resonance set per mode");
    add_common(c_pr, fl);
    CLI::App* c_si = app.add_subcommand("simulate", "write simulated correlation series per mode");
    add_common(c_si, fl);
    CLI::App* c_ex = app.add_subcommand("extract", "extract correlation poles per mode");
    add_common(c_ex, fl);
    CLI::App* c_va = app.add_subcommand(
        "validate", "predict, simulate, extract and compare; exit 0 iff all thresholds pass");
    add_common(c_va, fl);
    CLI::App* c_re = app.add_subcommand("report", "asymptotic decay reports (1-D)");
    add_common(c_re, fl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_an->parsed()) return cmd_analyze(fl, matrix_arg);
        if (c_pr->parsed()) return cmd_predict(fl);
        if (c_si->parsed()) return cmd_simulate(fl);
        if (c_ex->parsed()) return cmd_extract(fl);
        if (c_va->parsed()) return cmd_validate(fl);
        if (c_re->parsed()) return cmd_report(fl);
    } catch (const ConfigError& e) {
        nlohmann::json err{{"error", {{"type", "config"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        nlohmann::json err{{"error", {{"type", "domain"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    return 0;
}
