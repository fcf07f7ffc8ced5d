#pragma once

#include "qchaos/experiments.hpp"
#include "qchaos/lattice.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qchaos {

enum class ScalingAxis { QubitCount, Disorder };

/// Everything a CLI run needs. Serialises to and from the JSON config format;
/// model.j_bound is the single coupling used by spectrum and pss ("j").
struct RunConfig {
    ModelParams model;
    std::vector<double> j_grid = kDefaultJGrid;
    std::size_t n_d = 100;
    std::uint64_t master_seed = 0;
    std::string output_dir = ".";
    int threads = 1;
    std::size_t energy_bins = 20;
    double hist_bin_width = 0.1;
    double hist_s_max = 5.0;
    double eta_target = kEtaTarget;
    double sq_target = kEntropyTarget;
    ScalingAxis scaling_over = ScalingAxis::QubitCount;
    std::vector<double> scaling_values = {6, 9, 12};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a JSON config; absent keys take their defaults and
/// unknown keys are rejected. Throws Error(Config) naming the field.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

} // namespace qchaos
