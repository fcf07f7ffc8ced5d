#include "qchaos/cli.hpp"

#include "qchaos/config.hpp"
#include "qchaos/eigensolver.hpp"
#include "qchaos/eigenstate.hpp"
#include "qchaos/error.hpp"
#include "qchaos/experiments.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/output.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace qchaos {

namespace {

using nlohmann::json;

// Flags shared by every model-based subcommand. Each one, when given,
// overrides the matching key of the config file before validation.
struct ModelFlags {
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<int> n, lx, ly;
    std::optional<double> delta, j, window;
    std::optional<std::string> parity, window_kind;
    std::optional<std::size_t> n_d;
    std::optional<std::vector<double>> j_grid;

    void attach(CLI::App* app, bool with_grid) {
        app->add_option("-c,--config", config_path, "JSON run configuration")
            ->check(CLI::ExistingFile);
        app->add_option("-o,--output-dir", output_dir, "Directory for outputs");
        app->add_option("--threads", threads, "Worker threads (0 = all cores)");
        app->add_option("--seed", seed, "Master seed");
        app->add_option("--n", n, "Qubit count (standard lattice shape)");
        app->add_option("--lx", lx, "Lattice width");
        app->add_option("--ly", ly, "Lattice height");
        app->add_option("--delta", delta, "Disorder width delta/Delta0");
        app->add_option("--j", j, "Coupling bound J/Delta0");
        app->add_option("--window", window, "Central window half-width fraction");
        app->add_option("--window-kind", window_kind, "Window measured in levels or energy");
        app->add_option("--parity", parity, "Sector parity: even or odd");
        app->add_option("--nd", n_d, "Disorder realizations");
        if (with_grid)
            app->add_option("--j-grid", j_grid, "Ascending J/Delta0 values")->delimiter(',');
    }

    RunConfig resolve() const {
        json doc = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                doc = json::parse(buf.str());
            } catch (const json::parse_error& e) {
                throw Error(ErrorKind::Config, std::string("malformed JSON: ") + e.what());
            }
            if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
        }
        if (const char* env = std::getenv(kOutputDirEnv); env && *env) doc["output_dir"] = env;
        if (output_dir) doc["output_dir"] = *output_dir;
        if (threads) doc["threads"] = *threads;
        if (seed) doc["master_seed"] = *seed;
        if (n) {
            doc.erase("lx");
            doc.erase("ly");
            doc["n"] = *n;
        }
        if (lx) doc["lx"] = *lx;
        if (ly) doc["ly"] = *ly;
        if ((lx || ly) && !n) doc.erase("n");
        if (delta) doc["delta"] = *delta;
        if (j) doc["j"] = *j;
        if (window) doc["window_fraction"] = *window;
        if (window_kind) doc["window_kind"] = *window_kind;
        if (parity) doc["parity"] = *parity;
        if (n_d) doc["n_d"] = *n_d;
        if (j_grid) doc["j_grid"] = *j_grid;
        return config_from_json(doc);
    }
};

class Run {
public:
    explicit Run(RunConfig config)
        : config_(std::move(config)),
          started_at_(utc_timestamp()),
          start_(std::chrono::steady_clock::now()) {}

    const RunConfig& config() const { return config_; }
    ExecutionOptions exec() const { return {config_.threads}; }
    void add_skipped(std::size_t n) { skipped_ += n; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        Manifest m;
        m.config = config_;
        m.started_at = started_at_;
        m.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        m.skipped_realizations = skipped_;
        return write_output(config_.output_dir, name, content, m);
    }

private:
    RunConfig config_;
    std::string started_at_;
    std::chrono::steady_clock::time_point start_;
    std::size_t skipped_ = 0;
};

template <class F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

int cmd_spectrum(const RunConfig& config, bool dump_matrix, std::optional<std::size_t> state,
                 std::ostream& out) {
    Run run(config);
    const ModelParams& p = config.model;
    p.validate();
    const auto bonds = build_bonds(p.lx, p.ly);
    const auto sector = enumerate_sector(p.n(), p.parity);
    const auto r = sample_disorder(p, bonds.size(), derive_seed(config.master_seed, 0));
    const auto h = build_hamiltonian(sector, r, bonds);
    const auto decomp = diagonalize(h);
    const auto report = validate(decomp, h.matrix);

    const std::size_t k = state.value_or(sector.dim() / 2);
    if (k >= sector.dim()) throw Error(ErrorKind::InvalidParameter, "--state out of range");
    const auto profile = eigenstate_profile(decomp.vector(static_cast<Eigen::Index>(k)),
                                            h.diag_energies);

    run.write("spectrum.csv", render([&](std::ostream& os) {
                  write_spectrum_csv(os, decomp.eigenvalues);
              }));
    run.write("profile.csv", render([&](std::ostream& os) { write_profile_csv(os, profile); }));
    if (dump_matrix)
        run.write("hamiltonian.txt", render([&](std::ostream& os) { write_triplets(os, h); }));
    const json summary = {
        {"n", p.n()},
        {"dim", sector.dim()},
        {"j", p.j_bound},
        {"delta", p.delta},
        {"seed", r.seed},
        {"profile_state", k},
        {"profile_energy", decomp.eigenvalues[k]},
        {"profile_entropy", eigenvector_entropy(decomp.vector(static_cast<Eigen::Index>(k)))},
        {"orthonormality_residual", report.orthonormality},
        {"eigen_residual", report.eigen_residual},
        {"residual_tolerance", report.residual_tolerance},
        {"residuals_ok", report.ok()},
    };
    run.write("spectrum.json", summary.dump(2) + "\n");
    out << summary.dump(2) << '\n';
    return report.ok() ? 0 : 1;
}

int cmd_pss(const RunConfig& config, std::ostream& out) {
    Run run(config);
    const auto e = run_ensemble(config.model, config.model.j_bound, config.n_d,
                                config.master_seed, run.exec());
    run.add_skipped(e.skipped);
    const auto hist = spacing_histogram(e.sample.spacings, config.hist_bin_width, config.hist_s_max);
    run.write("histogram.csv", render([&](std::ostream& os) { write_histogram_csv(os, hist); }));
    const auto p = summarize(e);
    const json summary = {
        {"j", p.j},         {"eta", p.eta_mean},  {"eta_sem", p.eta_sem},
        {"sq_mean", p.sq_mean}, {"sq_sem", p.sq_sem}, {"n_s", p.n_s},
        {"n_d", p.n_d},     {"skipped", p.skipped},
    };
    run.write("pss.json", summary.dump(2) + "\n");
    out << summary.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    Run run(config);
    const auto sweep = sweep_j(config.model, config.j_grid, config.n_d, config.master_seed,
                               run.exec());
    run.add_skipped(sweep.skipped());
    const auto csv = render([&](std::ostream& os) { write_sweep_csv(os, sweep); });
    run.write("sweep.csv", csv);
    out << csv;
    return 0;
}

int cmd_critical(const RunConfig& config, std::ostream& out) {
    Run run(config);
    const auto sweep = sweep_j(config.model, config.j_grid, config.n_d, config.master_seed,
                               run.exec());
    run.add_skipped(sweep.skipped());
    run.write("sweep.csv", render([&](std::ostream& os) { write_sweep_csv(os, sweep); }));
    json records = json::array();
    records.push_back(critical_record(find_critical(sweep, Observable::Eta, config.eta_target),
                                      config.model, config.master_seed));
    records.push_back(critical_record(find_critical(sweep, Observable::Entropy, config.sq_target),
                                      config.model, config.master_seed));
    run.write("critical.json", records.dump(2) + "\n");
    out << records.dump(2) << '\n';
    return 0;
}

int cmd_scaling(const RunConfig& config, std::ostream& out) {
    Run run(config);
    const bool over_n = config.scaling_over == ScalingAxis::QubitCount;
    std::vector<ScalingPoint> jc, jcs;
    std::ostringstream table;
    table << std::setprecision(17) << "x,n,delta,j_c,j_cs\n";
    for (double x : config.scaling_values) {
        ModelParams p = config.model;
        if (over_n) std::tie(p.lx, p.ly) = default_lattice(static_cast<int>(x));
        else p.delta = x;
        const auto sweep = sweep_j(p, config.j_grid, config.n_d, config.master_seed, run.exec());
        run.add_skipped(sweep.skipped());
        const auto c = find_critical(sweep, Observable::Eta, config.eta_target);
        const auto s = find_critical(sweep, Observable::Entropy, config.sq_target);
        jc.push_back({x, c.j_crit});
        jcs.push_back({x, s.j_crit});
        table << x << ',' << p.n() << ',' << p.delta << ',' << c.j_crit << ',' << s.j_crit << '\n';
    }
    const double slope = over_n ? -1.0 : 1.0;
    auto fits = [&](const std::vector<ScalingPoint>& pts) {
        const auto fixed = fit_scaling(pts, FitMode::FixedSlope, slope);
        json j = {{"fixed", {{"coefficient", fixed.coefficient}, {"slope", fixed.slope}}}};
        if (pts.size() >= 2) {
            const auto free = fit_scaling(pts, FitMode::Free);
            j["free"] = {{"coefficient", free.coefficient}, {"slope", free.slope},
                         {"residuals", free.residuals}};
        }
        return j;
    };
    const json summary = {
        {"over", over_n ? "n" : "delta"},
        {"j_c", fits(jc)},
        {"j_cs", fits(jcs)},
    };
    run.write("scaling.csv", table.str());
    run.write("scaling.json", summary.dump(2) + "\n");
    out << table.str() << summary.dump(2) << '\n';
    return 0;
}

int cmd_melt(const RunConfig& config, std::ostream& out) {
    Run run(config);
    const auto map = melting_map(config.model, config.j_grid, config.energy_bins,
                                 config.master_seed, run.exec());
    const auto path =
        run.write("melting.csv", render([&](std::ostream& os) { write_melting_csv(os, map); }));
    out << "wrote " << path.string() << " (" << map.rows.size() << " couplings x "
        << config.energy_bins << " energy bins)\n";
    return 0;
}

int cmd_estimate(int n, double delta, double c, std::ostream& out) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "--n must be >= 1");
    if (!(delta >= 0.0 && delta <= kDelta0))
        throw Error(ErrorKind::InvalidParameter, "--delta must lie in [0, 1]");
    const auto est = theoretical_jc(n, kDelta0, delta, c);
    const json summary = {
        {"n", n},
        {"delta", delta},
        {"log10_spacing", log10_multiqubit_spacing(n)},
        {"spacing", multiqubit_spacing(n)},
        {"j_c_estimate", est.generic},
        {"j_cs_estimate", est.band},
        {"c", c},
    };
    out << summary.dump(2) << '\n';
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chaos border of a disordered coupled-qubit register", "qchaos"};
    app.require_subcommand(1);

    ModelFlags flags;
    bool dump_matrix = false;
    std::optional<std::size_t> state;
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, residuals and an eigenstate profile of one realization");
    flags.attach(spectrum, false);
    spectrum->add_flag("--dump-matrix", dump_matrix, "Also write the sector matrix as triplets");
    spectrum->add_option("--state", state, "Eigenstate index for the profile (default: mid-band)");

    std::optional<double> bin_width, s_max;
    auto* pss = app.add_subcommand("pss", "Spacing histogram and eta at one coupling");
    flags.attach(pss, false);
    pss->add_option("--bin-width", bin_width, "Histogram bin width");
    pss->add_option("--s-max", s_max, "Histogram range");

    auto* sweep = app.add_subcommand("sweep", "eta and S_q against J");
    flags.attach(sweep, true);

    std::optional<double> eta_target, sq_target;
    auto* critical = app.add_subcommand("critical", "Critical couplings J_c (eta) and J_cs (S_q)");
    flags.attach(critical, true);
    critical->add_option("--eta-target", eta_target, "eta value defining J_c");
    critical->add_option("--sq-target", sq_target, "S_q value defining J_cs");

    std::optional<std::string> over;
    std::optional<std::vector<double>> values;
    auto* scaling = app.add_subcommand("scaling", "Fit critical couplings over n or delta");
    flags.attach(scaling, true);
    scaling->add_option("--over", over, "Scaling variable: n or delta");
    scaling->add_option("--values", values, "Values of the scaling variable")->delimiter(',');

    std::optional<std::size_t> bins;
    auto* melt = app.add_subcommand("melt", "Mean S_q over eigenstate energy and J for one realization");
    flags.attach(melt, true);
    melt->add_option("--bins", bins, "Energy bins");

    int est_n = 1000;
    double est_delta = 1.0;
    double est_c = kChaosBorderConstant;
    auto* estimate = app.add_subcommand("estimate", "Closed-form multi-qubit spacing and border estimates");
    estimate->add_option("--n", est_n, "Qubit count")->required();
    estimate->add_option("--delta", est_delta, "Disorder width delta/Delta0");
    estimate->add_option("--c", est_c, "Constant C in J_c = C Delta0 / n");

    std::vector<std::string> argv_tail(args.size() > 1 ? args.begin() + 1 : args.end(),
                                       args.end());
    std::reverse(argv_tail.begin(), argv_tail.end());  // CLI11 expects reversed vectors
    try {
        app.parse(argv_tail);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (estimate->parsed()) return cmd_estimate(est_n, est_delta, est_c, out);

        RunConfig config = flags.resolve();
        if (bin_width) config.hist_bin_width = *bin_width;
        if (s_max) config.hist_s_max = *s_max;
        if (eta_target) config.eta_target = *eta_target;
        if (sq_target) config.sq_target = *sq_target;
        if (bins) config.energy_bins = *bins;
        if (over || values) {
            json doc = to_json(config);
            if (over) {
                doc["scaling_over"] = *over;
                if (!values) doc.erase("scaling_values");
            }
            if (values) doc["scaling_values"] = *values;
            config = config_from_json(doc);
        } else {
            config = config_from_json(to_json(config));
        }

        if (spectrum->parsed()) return cmd_spectrum(config, dump_matrix, state, out);
        if (pss->parsed()) return cmd_pss(config, out);
        if (sweep->parsed()) return cmd_sweep(config, out);
        if (critical->parsed()) return cmd_critical(config, out);
        if (scaling->parsed()) return cmd_scaling(config, out);
        if (melt->parsed()) return cmd_melt(config, out);
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "usage error: unknown subcommand\n";
    return 2;
}

} // namespace qchaos
