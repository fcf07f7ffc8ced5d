#pragma once

#include "qchaos/eigensolver.hpp"
#include "qchaos/spectral.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace qchaos {

inline constexpr double kProfileFloor = 1e-12;

/// Register-state probabilities W_i = |⟨ψ_i|φ⟩|² of one eigenstate. The sector
/// basis is the noninteracting basis, so these are squared components.
std::vector<double> weights(const Eigen::Ref<const Eigen::VectorXd>& eigenvector);

/// −Σ W_i log₂ W_i with 0·log 0 = 0.
double entropy_sq(std::span<const double> w);

/// S_q of an eigenvector directly, without materialising the weights.
double eigenvector_entropy(const Eigen::Ref<const Eigen::VectorXd>& eigenvector);

struct ProfilePoint {
    double energy;  // noninteracting energy E_i
    double weight;  // W_i
};

/// (E_i, W_i) for all W_i >= floor, sorted by E_i.
std::vector<ProfilePoint> eigenstate_profile(const Eigen::Ref<const Eigen::VectorXd>& eigenvector,
                                             std::span<const double> diag_energies,
                                             double floor = kProfileFloor);

struct EntropyStats {
    double mean = 0.0;
    double sem = 0.0;
    std::size_t count = 0;
};

/// Mean S_q over the eigenstates of a window, SEM over those states.
EntropyStats mean_entropy(const EigenDecomposition& decomp, IndexRange window);

} // namespace qchaos
