#pragma once

#include "qchaos/config.hpp"
#include "qchaos/eigenstate.hpp"
#include "qchaos/experiments.hpp"
#include "qchaos/spectral.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace qchaos {

// CSV schemas. Numbers are written with round-trip precision.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_melting_csv(std::ostream& os, const MeltingMap& map);
void write_histogram_csv(std::ostream& os, const SpacingHistogram& hist);
void write_profile_csv(std::ostream& os, std::span<const ProfilePoint> profile);
void write_spectrum_csv(std::ostream& os, std::span<const double> eigenvalues);

/// {target, target_value, j_crit, bracket_lo, bracket_hi, ambiguous, n, delta, seed}
nlohmann::json critical_record(const CriticalResult& result, const ModelParams& params,
                               std::uint64_t seed);

struct Manifest {
    RunConfig config;
    std::string started_at;   // ISO 8601, UTC
    double elapsed_s = 0.0;
    std::size_t skipped_realizations = 0;
};

nlohmann::json to_json(const Manifest& manifest);

std::string utc_timestamp();
const char* version();

/// Writes content to dir/name and the sidecar dir/name.manifest.json.
/// Returns the path of the data file.
std::filesystem::path write_output(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& content, const Manifest& manifest);

} // namespace qchaos
