#include "qchaos/experiments.hpp"

#include "qchaos/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace qchaos {

namespace {

double sem_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0) / n);
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidParameter, "J grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0) || !std::isfinite(grid[k]))
            throw Error(ErrorKind::InvalidParameter, "J grid values must be finite and >= 0");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            throw Error(ErrorKind::InvalidParameter, "J grid must be strictly ascending");
    }
}

// Attach realization identity to a failure while keeping its kind.
[[noreturn]] void rethrow_with_context(std::exception_ptr error, std::size_t index,
                                       std::uint64_t seed) {
    try {
        std::rethrow_exception(error);
    } catch (const Error& e) {
        std::ostringstream os;
        os << e.what() << " [realization " << index << ", seed " << seed << "]";
        throw Error(e.kind(), os.str());
    }
}

// All (j, realization) tasks of a grid, aggregated per j in index order.
std::vector<EnsembleResult> run_grid(const ModelParams& params, std::span<const double> grid,
                                     std::size_t n_d, std::uint64_t master_seed,
                                     ExecutionOptions exec) {
    check_grid(grid);
    if (n_d < 1) throw Error(ErrorKind::InvalidParameter, "n_d must be >= 1");
    ModelParams base = params;
    base.j_bound = grid.back();
    base.validate();

    const auto bonds = build_bonds(base.lx, base.ly);
    const auto sector = enumerate_sector(base.n(), base.parity);

    const std::size_t tasks = grid.size() * n_d;
    std::vector<RealizationResult> results(tasks);
    std::vector<std::exception_ptr> errors(tasks);
    set_blas_threads(1);
    parallel_for(tasks, exec.threads, [&](std::size_t t) {
        const std::size_t gj = t / n_d;
        const std::size_t k = t % n_d;
        ModelParams p = base;
        p.j_bound = grid[gj];
        try {
            const auto r = sample_disorder(p, bonds.size(), derive_seed(master_seed, k));
            results[t] = analyze_realization(p, sector, bonds, r);
        } catch (const Error&) {
            errors[t] = std::current_exception();
        }
    });
    for (std::size_t t = 0; t < tasks; ++t)
        if (errors[t]) rethrow_with_context(errors[t], t % n_d, derive_seed(master_seed, t % n_d));

    std::vector<EnsembleResult> out(grid.size());
    for (std::size_t gj = 0; gj < grid.size(); ++gj) {
        EnsembleResult& e = out[gj];
        e.j = grid[gj];
        for (std::size_t k = 0; k < n_d; ++k) {
            const RealizationResult& r = results[gj * n_d + k];
            if (r.skipped) {
                ++e.skipped;
                continue;
            }
            e.sample.append(r.spacings);
            e.realization_eta.push_back(r.eta);
            e.realization_sq.push_back(r.entropy.mean);
        }
        if (e.sample.n_d == 0) {
            std::ostringstream os;
            os << "every realization at J = " << e.j
               << " had too few levels in the central window";
            throw Error(ErrorKind::InsufficientStatistics, os.str());
        }
    }
    return out;
}

} // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        loop();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

RealizationResult analyze_realization(const ModelParams& params, const ParitySector& sector,
                                      std::span<const Bond> bonds,
                                      const DisorderRealization& realization) {
    RealizationResult out;
    out.seed = realization.seed;
    const auto h = build_hamiltonian(sector, realization, bonds);
    const TridiagonalSolver solver(h.matrix, h.seed);
    try {
        out.window = select_window(solver.eigenvalues(), params.window_fraction, params.window_kind);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientStatistics) throw;
        out.skipped = true;
        return out;
    }
    const auto& levels = solver.eigenvalues();
    out.spacings = normalized_spacings(
        std::span<const double>(levels).subspan(out.window.first, out.window.size()));
    out.eta = eta(out.spacings);
    const auto decomp = solver.solve(static_cast<Eigen::Index>(out.window.first),
                                     static_cast<Eigen::Index>(out.window.last));
    out.entropy = mean_entropy(decomp, out.window);
    return out;
}

double EnsembleResult::eta_sem() const { return sem_of(realization_eta); }

double EnsembleResult::sq_mean() const {
    if (realization_sq.empty()) return 0.0;
    return std::accumulate(realization_sq.begin(), realization_sq.end(), 0.0) /
           static_cast<double>(realization_sq.size());
}

double EnsembleResult::sq_sem() const { return sem_of(realization_sq); }

EnsembleResult run_ensemble(const ModelParams& params, double j, std::size_t n_d,
                            std::uint64_t master_seed, ExecutionOptions exec) {
    const double grid[] = {j};
    return std::move(run_grid(params, grid, n_d, master_seed, exec).front());
}

std::size_t SweepResult::skipped() const {
    std::size_t total = 0;
    for (const auto& p : points) total += p.skipped;
    return total;
}

SweepPoint summarize(const EnsembleResult& e) {
    SweepPoint p;
    p.j = e.j;
    p.eta_mean = e.eta_pooled();
    p.eta_sem = e.eta_sem();
    p.sq_mean = e.sq_mean();
    p.sq_sem = e.sq_sem();
    p.n_s = e.sample.n_s();
    p.n_d = e.sample.n_d;
    p.skipped = e.skipped;
    return p;
}

SweepResult sweep_j(const ModelParams& params, std::span<const double> j_grid, std::size_t n_d,
                    std::uint64_t master_seed, ExecutionOptions exec) {
    SweepResult out;
    out.params = params;
    out.master_seed = master_seed;
    for (const auto& e : run_grid(params, j_grid, n_d, master_seed, exec))
        out.points.push_back(summarize(e));
    return out;
}

const char* to_string(Observable kind) { return kind == Observable::Eta ? "eta" : "sq"; }

CriticalResult find_crossing(std::span<const double> j, std::span<const double> values,
                             double target, Observable kind) {
    if (j.size() != values.size())
        throw Error(ErrorKind::DimensionMismatch, "one observable value per grid point");
    if (j.size() < 2)
        throw Error(ErrorKind::NotBracketed, "need at least two grid points to bracket a target");

    CriticalResult out;
    out.kind = kind;
    out.target = target;
    bool found = false;
    for (std::size_t k = 0; k + 1 < j.size(); ++k) {
        const double da = values[k] - target;
        const double db = values[k + 1] - target;
        const bool crosses = (da < 0.0 && db >= 0.0) || (da > 0.0 && db <= 0.0) ||
                             (k == 0 && da == 0.0 && db != 0.0);
        if (!crosses) continue;
        if (found) {
            out.ambiguous = true;
            break;
        }
        found = true;
        const double f = da / (da - db);
        out.bracket_lo = j[k];
        out.bracket_hi = j[k + 1];
        if (j[k] > 0.0)
            out.j_crit = std::exp(std::log(j[k]) + f * (std::log(j[k + 1]) - std::log(j[k])));
        else
            out.j_crit = j[k] + f * (j[k + 1] - j[k]);
    }
    if (!found) {
        std::ostringstream os;
        os << to_string(kind) << " never crosses " << target << " on the grid [" << j.front()
           << ", " << j.back() << "]";
        throw Error(ErrorKind::NotBracketed, os.str());
    }
    return out;
}

CriticalResult find_critical(const SweepResult& sweep, Observable kind, double target) {
    if (sweep.params.delta == 0.0)
        throw Error(ErrorKind::Blocked,
                    "critical couplings are not extracted at delta = 0: the J = 0 spectrum is "
                    "quasidegenerate and the border drops to zero with delta");
    std::vector<double> j, v;
    for (const auto& p : sweep.points) {
        j.push_back(p.j);
        v.push_back(kind == Observable::Eta ? p.eta_mean : p.sq_mean);
    }
    return find_crossing(j, v, target, kind);
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, FitMode mode, double fixed_slope) {
    if (points.size() < 2) throw Error(ErrorKind::InvalidParameter, "need >= 2 points to fit");
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (!(p.x > 0.0) || !(p.j_crit > 0.0))
            throw Error(ErrorKind::Domain, "scaling fit needs positive x and j_crit");
        lx.push_back(std::log(p.x));
        ly.push_back(std::log(p.j_crit));
    }
    const double n = static_cast<double>(points.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;

    ScalingFit fit;
    if (mode == FitMode::FixedSlope) {
        fit.slope = fixed_slope;
    } else {
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            sxx += (lx[k] - mx) * (lx[k] - mx);
            sxy += (lx[k] - mx) * (ly[k] - my);
        }
        if (!(sxx > 0.0))
            throw Error(ErrorKind::InvalidParameter, "free-slope fit needs distinct x values");
        fit.slope = sxy / sxx;
    }
    const double intercept = my - fit.slope * mx;
    fit.coefficient = std::exp(intercept);
    for (std::size_t k = 0; k < lx.size(); ++k)
        fit.residuals.push_back(ly[k] - (intercept + fit.slope * lx[k]));
    return fit;
}

MeltingMap melting_map(const ModelParams& params, std::span<const double> j_grid,
                       std::size_t n_energy_bins, std::uint64_t master_seed,
                       ExecutionOptions exec) {
    check_grid(j_grid);
    if (n_energy_bins < 2) throw Error(ErrorKind::InvalidParameter, "need >= 2 energy bins");
    ModelParams base = params;
    base.j_bound = j_grid.back();
    base.validate();

    const auto bonds = build_bonds(base.lx, base.ly);
    const auto sector = enumerate_sector(base.n(), base.parity);
    const auto draw = sample_disorder(base, bonds.size(), derive_seed(master_seed, 0));

    MeltingMap map;
    map.seed = draw.seed;
    map.rows.resize(j_grid.size());
    set_blas_threads(1);
    parallel_for(j_grid.size(), exec.threads, [&](std::size_t row) {
        const double j = j_grid[row];
        const auto h = build_hamiltonian(sector, draw.with_coupling_bound(j), bonds);
        const auto decomp = diagonalize(h);
        MeltingRow& out = map.rows[row];
        out.j = j;
        out.e_ground = decomp.eigenvalues.front();
        out.e_max = decomp.eigenvalues.back();
        const double width = out.e_max - out.e_ground;
        const double bin = width / static_cast<double>(n_energy_bins);
        std::vector<double> sums(n_energy_bins, 0.0);
        out.cells.resize(n_energy_bins);
        for (Eigen::Index k = 0; k < decomp.dim(); ++k) {
            const double x = width > 0.0 ? (decomp.eigenvalues[k] - out.e_ground) / width : 0.0;
            const auto b = std::min(n_energy_bins - 1,
                                    static_cast<std::size_t>(x * static_cast<double>(n_energy_bins)));
            sums[b] += eigenvector_entropy(decomp.vector(k));
            ++out.cells[b].count;
        }
        for (std::size_t b = 0; b < n_energy_bins; ++b) {
            MeltingCell& c = out.cells[b];
            c.bin_left = bin * static_cast<double>(b);
            c.bin_right = bin * static_cast<double>(b + 1);
            c.sq_mean = c.count > 0 ? sums[b] / static_cast<double>(c.count) : 0.0;
        }
    });
    return map;
}

} // namespace qchaos
