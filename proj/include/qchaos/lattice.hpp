#pragma once

#include "qchaos/spectral.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qchaos {

// All energies are in units of the mean one-qubit parameter Δ0.
inline constexpr double kDelta0 = 1.0;

enum class Parity : int { Even = 0, Odd = 1 };

/**
 * Knobs of one experiment: an lx × ly torus of qubits with on-site
 * splittings Γ_i ∈ [Δ0 − δ/2, Δ0 + δ/2] and nearest-neighbour σxσx
 * couplings J_ij ∈ [−J, J].
 */
struct ModelParams {
    int lx = 3;
    int ly = 4;
    double delta = 1.0;            // disorder width δ / Δ0
    double j_bound = 0.0;          // coupling bound J / Δ0
    double window_fraction = kDefaultWindowFraction;
    WindowKind window_kind = WindowKind::Levels;
    Parity parity = Parity::Even;

    int n() const { return lx * ly; }

    /// Throws Error(InvalidGeometry / InvalidParameter) on a broken invariant.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Bond {
    int i = 0;
    int j = 0;
    friend bool operator==(const Bond&, const Bond&) = default;
};

struct DisorderRealization {
    std::vector<double> gammas;
    std::vector<double> couplings;
    // Couplings before scaling by J, uniform on [-1, 1). Kept so one draw
    // can be re-evaluated at a different coupling bound.
    std::vector<double> unit_couplings;
    std::uint64_t seed = 0;

    DisorderRealization with_coupling_bound(double j_bound) const;
};

/// Nearest-neighbour bonds of the lx × ly torus, site (x, y) -> y*lx + x.
/// Wraparound duplicates in extent-2 dimensions are merged.
std::vector<Bond> build_bonds(int lx, int ly);

/// Uniform on [0, 1) from the top 53 bits; unlike std::uniform_real_distribution
/// the mapping is fixed, so draws are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Per-realization seed derived from the master seed and realization index.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

DisorderRealization sample_disorder(const ModelParams& params, std::size_t n_bonds,
                                    std::uint64_t seed);

/// Mean spacing of the full n-qubit spectrum, nΔ0/2^n, as log10 so that it
/// stays finite for n in the thousands.
double log10_multiqubit_spacing(int n, double delta0 = kDelta0);

/// nΔ0/2^n in linear scale; underflows to 0 for very large n.
double multiqubit_spacing(int n, double delta0 = kDelta0);

struct CouplingEstimates {
    double generic;   // C Δ0 / n
    double band;      // 0.4 δ / n
};

inline constexpr double kChaosBorderConstant = 3.16;
inline constexpr double kEntropyBorderConstant = 0.4;

CouplingEstimates theoretical_jc(int n, double delta0, double delta,
                                 double c = kChaosBorderConstant);

/// Most compact rectangle used for the standard qubit counts (6, 9, 12, 15);
/// for other n, the factorisation with lx <= ly closest to square.
std::pair<int, int> default_lattice(int n);

} // namespace qchaos
