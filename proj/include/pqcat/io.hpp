#pragma once

// Serialization of results to JSON and CSV with deterministic formatting
// (%.17g round-trip doubles), plus experiment configuration parsing.

#include "pqcat/correlation.hpp"
#include "pqcat/resonance.hpp"
#include "pqcat/symplectic.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pqcat {

std::string d17(double v);

nlohmann::json complex_json(const std::complex<double>& z);
nlohmann::json matrix_json(const Eigen::MatrixXcd& m);
nlohmann::json prediction_json(const ResonancePrediction& p);
nlohmann::json poles_json(const PoleSet& p);
nlohmann::json theorem2_json(const Theorem2Report& r);
nlohmann::json corollary_json(const CorollaryReport& r);

std::string series_csv(const CorrelationSeries& s);
std::string phases_csv(const std::vector<double>& phases);

void write_text(const std::string& path, const std::string& content);

struct ExperimentConfig {
    IMat matrix;              // inline matrix, or generated from word/seed
    bool generated = false;
    int n = 1;
    std::uint64_t seed = 1;
    int word_length = 8;
    std::vector<int> modes{1, 2, 3};
    int k_max = 4;
    int bigT = 12;
    int grid = 128;
    int threads = 1;
    int observable_variant = 0;
    std::string out_dir = ".";
};

// Parses and validates a config document; collects every violation into a
// single ConfigError message.
ExperimentConfig parse_config(const nlohmann::json& j);

nlohmann::json config_echo(const ExperimentConfig& c);

}  // namespace pqcat
