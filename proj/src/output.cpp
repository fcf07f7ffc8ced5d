#include "qchaos/output.hpp"

#include "qchaos/error.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#ifndef QCHAOS_VERSION
#define QCHAOS_VERSION "unknown"
#endif

namespace qchaos {

namespace {

struct PrecisionGuard {
    explicit PrecisionGuard(std::ostream& os)
        : os_(os), old_(os.precision(std::numeric_limits<double>::max_digits10)) {}
    ~PrecisionGuard() { os_.precision(old_); }
    std::ostream& os_;
    std::streamsize old_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::Config, "failed writing " + path.string());
}

} // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    PrecisionGuard guard(os);
    os << "j,eta_mean,eta_sem,sq_mean,sq_sem,n_s,n_d\n";
    for (const auto& p : sweep.points)
        os << p.j << ',' << p.eta_mean << ',' << p.eta_sem << ',' << p.sq_mean << ','
           << p.sq_sem << ',' << p.n_s << ',' << p.n_d << '\n';
}

void write_melting_csv(std::ostream& os, const MeltingMap& map) {
    PrecisionGuard guard(os);
    os << "j,bin_left,bin_right,sq_mean,count\n";
    for (const auto& row : map.rows)
        for (const auto& c : row.cells) {
            os << row.j << ',' << c.bin_left << ',' << c.bin_right << ',';
            if (!c.empty()) os << c.sq_mean;  // empty cells leave sq_mean blank
            os << ',' << c.count << '\n';
        }
}

void write_histogram_csv(std::ostream& os, const SpacingHistogram& hist) {
    PrecisionGuard guard(os);
    os << "s_bin_left,s_bin_right,density,pp_density,pw_density\n";
    for (std::size_t b = 0; b < hist.density.size(); ++b)
        os << hist.left(b) << ',' << hist.right(b) << ',' << hist.density[b] << ','
           << hist.reference_density(Reference::Poisson, b) << ','
           << hist.reference_density(Reference::WignerDyson, b) << '\n';
}

void write_profile_csv(std::ostream& os, std::span<const ProfilePoint> profile) {
    PrecisionGuard guard(os);
    os << "e_i,w_i\n";
    for (const auto& p : profile) os << p.energy << ',' << p.weight << '\n';
}

void write_spectrum_csv(std::ostream& os, std::span<const double> eigenvalues) {
    PrecisionGuard guard(os);
    os << "index,energy\n";
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) os << k << ',' << eigenvalues[k] << '\n';
}

nlohmann::json critical_record(const CriticalResult& r, const ModelParams& params,
                               std::uint64_t seed) {
    return {
        {"target", to_string(r.kind)},
        {"target_value", r.target},
        {"j_crit", r.j_crit},
        {"bracket_lo", r.bracket_lo},
        {"bracket_hi", r.bracket_hi},
        {"ambiguous", r.ambiguous},
        {"n", params.n()},
        {"delta", params.delta},
        {"seed", seed},
    };
}

nlohmann::json to_json(const Manifest& m) {
    return {
        {"config", to_json(m.config)},
        {"master_seed", m.config.master_seed},
        {"version", version()},
        {"started_at", m.started_at},
        {"elapsed_s", m.elapsed_s},
        {"skipped_realizations", m.skipped_realizations},
    };
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

const char* version() { return QCHAOS_VERSION; }

std::filesystem::path write_output(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& content, const Manifest& manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Config, "cannot create output_dir " + dir.string());
    const auto path = dir / name;
    write_file(path, content);
    write_file(dir / (name + ".manifest.json"), to_json(manifest).dump(2) + "\n");
    return path;
}

} // namespace qchaos
