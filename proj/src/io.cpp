#include "pqcat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pqcat {

std::string d17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json complex_json(const std::complex<double>& z) {
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json prediction_json(const ResonancePrediction& p) {
    nlohmann::json bands = nlohmann::json::array();
    for (const auto& b : p.bands) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& z : b.eigenvalues) ev.push_back(complex_json(z));
        bands.push_back(nlohmann::json{{"k", b.k},
                                       {"eigenvalues", ev},
                                       {"inner_radius", b.inner},
                                       {"outer_radius", b.outer}});
    }
    nlohmann::json combined = nlohmann::json::array();
    for (const auto& z : p.combined) combined.push_back(complex_json(z));
    return nlohmann::json{{"modulus_scale", p.modulus_scale},
                          {"quantum_phases", p.phases},
                          {"bands", bands},
                          {"resonances", combined}};
}

nlohmann::json poles_json(const PoleSet& p) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& q : p.poles) {
        poles.push_back(nlohmann::json{{"z", complex_json(q.z)},
                                       {"modulus", std::abs(q.z)},
                                       {"arg", std::arg(q.z)},
                                       {"residue", complex_json(q.residue)},
                                       {"reliable", q.reliable}});
    }
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto& z : p.dropped) dropped.push_back(complex_json(z));
    return nlohmann::json{{"poles", poles},
                          {"rank", p.rank},
                          {"pencil_rows", p.pencil_rows},
                          {"noise_floor", p.noise_floor},
                          {"dropped", dropped}};
}

nlohmann::json theorem2_json(const Theorem2Report& r) {
    nlohmann::json rv = nlohmann::json::array();
    for (int i = 0; i < r.r.size(); ++i) rv.push_back(complex_json(r.r[i]));
    nlohmann::json cs = nlohmann::json::array();
    for (int i = 0; i < r.coeffs.size(); ++i) cs.push_back(complex_json(r.coeffs[i]));
    std::vector<double> res(r.residuals.data(), r.residuals.data() + r.residuals.size());
    return nlohmann::json{{"rescaled_series", rv},
                          {"phases", r.phases},
                          {"orientation", r.orientation},
                          {"omega", r.omega},
                          {"coefficients", cs},
                          {"residuals", res},
                          {"decay_ratio", r.decay_ratio},
                          {"ratio_bound", r.ratio_bound},
                          {"residual_decays", r.residual_decays}};
}

nlohmann::json corollary_json(const CorollaryReport& r) {
    auto vec = [](const Eigen::VectorXcd& v) {
        nlohmann::json a = nlohmann::json::array();
        for (int i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
        return a;
    };
    return nlohmann::json{{"total", vec(r.total)},
                          {"mode0_quad", vec(r.mode0_quad)},
                          {"mode0_exact", vec(r.mode0_exact)},
                          {"mode0_err", r.mode0_err},
                          {"mean_product", complex_json(r.mean_product)},
                          {"max_scaled_remainder", r.max_scaled_remainder},
                          {"mode0_matches", r.mode0_matches},
                          {"remainder_bounded", r.remainder_bounded}};
}

std::string series_csv(const CorrelationSeries& s) {
    std::ostringstream os;
    os << "t,re,im,re_coarse,im_coarse\n";
    for (int t = 1; t <= s.values.size(); ++t) {
        os << t << ',' << d17(s.values[t - 1].real()) << ',' << d17(s.values[t - 1].imag());
        if (s.values_coarse.size() == s.values.size()) {
            os << ',' << d17(s.values_coarse[t - 1].real()) << ','
               << d17(s.values_coarse[t - 1].imag());
        } else {
            os << ",,";
        }
        os << '\n';
    }
    return os.str();
}

std::string phases_csv(const std::vector<double>& phases) {
    std::ostringstream os;
    os << "index,phase\n";
    for (std::size_t i = 0; i < phases.size(); ++i) os << i << ',' << d17(phases[i]) << '\n';
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig c;
    std::vector<std::string> bad;

    auto get_int = [&](const char* key, int dflt, int lo, int hi) {
        if (!j.contains(key)) return dflt;
        if (!j[key].is_number_integer()) {
            bad.push_back(std::string(key) + ": expected an integer");
            return dflt;
        }
        const long long v = j[key].get<long long>();
        if (v < lo || v > hi) {
            bad.push_back(std::string(key) + ": out of range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
            return dflt;
        }
        return static_cast<int>(v);
    };

    c.n = get_int("n", 1, 1, 3);
    if (j.contains("seed")) {
        // Accept both unsigned and signed storage; JSON built in code may
        // carry a nonnegative value as a signed integer.
        if (j["seed"].is_number_unsigned()) {
            c.seed = j["seed"].get<std::uint64_t>();
        } else if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0) {
            c.seed = static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
        } else {
            bad.push_back("seed: expected a nonnegative integer");
        }
    }
    c.word_length = get_int("word_length", 8, 1, 64);
    c.k_max = get_int("k_max", 4, 0, 12);
    c.bigT = get_int("T", 12, 1, 64);
    c.grid = get_int("grid", 128, 4, 4096);
    if (c.grid % 2 != 0) bad.push_back("grid: must be even");
    c.threads = get_int("threads", 1, 1, 256);
    c.observable_variant = get_int("observable_variant", 0, 0, 1000);

    if (j.contains("modes")) {
        if (!j["modes"].is_array() || j["modes"].empty()) {
            bad.push_back("modes: expected a nonempty array of integers");
        } else {
            c.modes.clear();
            for (const auto& e : j["modes"]) {
                if (!e.is_number_integer()) {
                    bad.push_back("modes: expected a nonempty array of integers");
                    break;
                }
                c.modes.push_back(e.get<int>());
            }
        }
    }

    if (j.contains("matrix")) {
        const auto& jm = j["matrix"];
        const int n2 = 2 * c.n;
        bool shape_ok = jm.is_array() && static_cast<int>(jm.size()) == n2;
        if (shape_ok) {
            for (const auto& row : jm) {
                shape_ok = shape_ok && row.is_array() && static_cast<int>(row.size()) == n2;
            }
        }
        if (!shape_ok) {
            bad.push_back("matrix: expected a 2n x 2n integer array");
        } else {
            c.matrix.resize(n2, n2);
            for (int r = 0; r < n2; ++r) {
                for (int col = 0; col < n2; ++col) {
                    if (!jm[r][col].is_number_integer()) {
                        bad.push_back("matrix: entries must be integers");
                        r = n2;
                        break;
                    }
                    c.matrix(r, col) = jm[r][col].get<std::int64_t>();
                }
            }
        }
        c.generated = false;
    } else {
        c.generated = true;
    }

    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) {
            bad.push_back("out_dir: expected a string");
        } else {
            c.out_dir = j["out_dir"].get<std::string>();
        }
    }

    // "generated" appears in config echoes and is accepted so those files can
    // be fed back in; the presence of "matrix" is what actually decides.
    static const char* known[] = {"n",    "seed",  "word_length", "modes",   "k_max",
                                  "T",    "grid",  "threads",     "matrix",  "out_dir",
                                  "observable_variant", "generated"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) bad.push_back(it.key() + ": unknown key");
    }

    if (!bad.empty()) {
        std::string msg = "invalid config:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw ConfigError(msg);
    }
    return c;
}

nlohmann::json config_echo(const ExperimentConfig& c) {
    nlohmann::json jm = nlohmann::json::array();
    if (!c.generated) {
        for (int r = 0; r < c.matrix.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int col = 0; col < c.matrix.cols(); ++col) row.push_back(c.matrix(r, col));
            jm.push_back(row);
        }
    }
    nlohmann::json out{{"n", c.n},
                       {"seed", c.seed},
                       {"word_length", c.word_length},
                       {"modes", c.modes},
                       {"k_max", c.k_max},
                       {"T", c.bigT},
                       {"grid", c.grid},
                       {"threads", c.threads},
                       {"observable_variant", c.observable_variant},
                       {"generated", c.generated},
                       {"out_dir", c.out_dir}};
    if (!c.generated) out["matrix"] = jm;
    return out;
}

}  // namespace pqcat
