#pragma once

#include "qchaos/lattice.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qchaos {

using State = std::uint32_t;

inline constexpr int kDefaultMaxQubits = 16;

/// Computational basis states of one popcount-parity class.
/// Bit i of a state is qubit i; a set bit is "qubit up" (σ_z = −1).
struct ParitySector {
    int n = 0;
    Parity parity = Parity::Even;
    std::vector<State> states;      // ascending
    std::vector<std::int32_t> index_of; // size 2^n, −1 for states outside the sector

    std::size_t dim() const { return states.size(); }
};

ParitySector enumerate_sector(int n, Parity parity, int max_qubits = kDefaultMaxQubits);

/// Σ_i Γ_i (1 − 2 b_i): the J = 0 energy of a register state.
double diagonal_energy(State state, std::span<const double> gammas);

struct SectorHamiltonian {
    Eigen::MatrixXd matrix;
    std::vector<double> diag_energies;
    std::uint64_t seed = 0;   // seed of the realization it was built from

    Eigen::Index dim() const { return matrix.rows(); }
};

SectorHamiltonian build_hamiltonian(const ParitySector& sector,
                                    const DisorderRealization& realization,
                                    std::span<const Bond> bonds);

/// Nonzero entries as "row col value" lines (0-based, full precision).
void write_triplets(std::ostream& os, const SectorHamiltonian& h);

} // namespace qchaos
