#pragma once

#include "qchaos/eigensolver.hpp"
#include "qchaos/eigenstate.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/lattice.hpp"
#include "qchaos/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qchaos {

inline constexpr double kEtaTarget = 0.3;
inline constexpr double kEntropyTarget = 1.0;

/// Log-spaced through the transition for n in {6, 9, 12}.
inline const std::vector<double> kDefaultJGrid = {0.02, 0.03, 0.05, 0.08, 0.12,
                                                  0.18, 0.27, 0.40, 0.48};

/// Worker count; 0 means one per hardware thread.
struct ExecutionOptions {
    int threads = 1;
};

/// Runs fn(0) ... fn(count - 1) on a bounded pool. The first failure in index
/// order is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Window statistics of one disorder realization.
struct RealizationResult {
    std::uint64_t seed = 0;
    bool skipped = false;      // too few levels in the central window
    std::vector<double> spacings;
    double eta = 0.0;
    EntropyStats entropy;
    IndexRange window;
};

RealizationResult analyze_realization(const ModelParams& params, const ParitySector& sector,
                                      std::span<const Bond> bonds,
                                      const DisorderRealization& realization);

struct EnsembleResult {
    double j = 0.0;
    SpacingSample sample;               // pooled over kept realizations
    std::vector<double> realization_eta;
    std::vector<double> realization_sq; // mean window S_q per kept realization
    std::size_t skipped = 0;

    double eta_pooled() const { return eta(sample); }
    double eta_sem() const;
    double sq_mean() const;
    double sq_sem() const;
};

/// Realization k uses seed derive_seed(master_seed, k); the coupling draws in
/// units of J are shared between different j at equal k.
EnsembleResult run_ensemble(const ModelParams& params, double j, std::size_t n_d,
                            std::uint64_t master_seed, ExecutionOptions exec = {});

struct SweepPoint {
    double j = 0.0;
    double eta_mean = 0.0;  // η of the pooled spacings
    double eta_sem = 0.0;   // from the spread of per-realization η
    double sq_mean = 0.0;
    double sq_sem = 0.0;
    std::size_t n_s = 0;
    std::size_t n_d = 0;
    std::size_t skipped = 0;
};

struct SweepResult {
    ModelParams params;
    std::uint64_t master_seed = 0;
    std::vector<SweepPoint> points;

    std::size_t skipped() const;
};

SweepPoint summarize(const EnsembleResult& ensemble);

SweepResult sweep_j(const ModelParams& params, std::span<const double> j_grid, std::size_t n_d,
                    std::uint64_t master_seed, ExecutionOptions exec = {});

enum class Observable { Eta, Entropy };

const char* to_string(Observable kind);

struct CriticalResult {
    Observable kind = Observable::Eta;
    double target = 0.0;
    double j_crit = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool ambiguous = false;   // the curve crosses the target more than once
};

/// First crossing of the target along ascending j, interpolated linearly in
/// (log j, value). Brackets that start at j = 0 fall back to linear j.
CriticalResult find_crossing(std::span<const double> j, std::span<const double> values,
                             double target, Observable kind = Observable::Eta);

/// J_c (Eta, 0.3) or J_cs (Entropy, 1.0). Blocked for δ = 0 sweeps.
CriticalResult find_critical(const SweepResult& sweep, Observable kind, double target);
inline CriticalResult find_critical(const SweepResult& sweep, Observable kind) {
    return find_critical(sweep, kind, kind == Observable::Eta ? kEtaTarget : kEntropyTarget);
}

struct ScalingPoint {
    double x;       // n or δ/Δ0
    double j_crit;
};

enum class FitMode { FixedSlope, Free };

struct ScalingFit {
    double coefficient = 0.0;      // j_crit = coefficient · x^slope
    double slope = 0.0;
    std::vector<double> residuals; // in log j_crit
};

/// Least squares on (log x, log j_crit). FixedSlope only fits the coefficient.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, FitMode mode,
                       double fixed_slope = -1.0);

struct MeltingCell {
    double bin_left = 0.0;   // energy above the ground state, units of Δ0
    double bin_right = 0.0;
    double sq_mean = 0.0;
    std::size_t count = 0;   // 0 marks an empty cell

    bool empty() const { return count == 0; }
};

struct MeltingRow {
    double j = 0.0;
    double e_ground = 0.0;
    double e_max = 0.0;
    std::vector<MeltingCell> cells;
};

struct MeltingMap {
    std::uint64_t seed = 0;
    std::vector<MeltingRow> rows;
};

/// One realization (index 0 of master_seed) with its unit coupling draws
/// rescaled to each j; eigenstates binned by (E − E_0)/(E_max − E_0).
MeltingMap melting_map(const ModelParams& params, std::span<const double> j_grid,
                       std::size_t n_energy_bins, std::uint64_t master_seed,
                       ExecutionOptions exec = {});

} // namespace qchaos
