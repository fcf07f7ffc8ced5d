#include "qchaos/hamiltonian.hpp"

#include "qchaos/error.hpp"

#include <bit>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace qchaos {

ParitySector enumerate_sector(int n, Parity parity, int max_qubits) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "sector needs n >= 1");
    if (n > max_qubits) {
        std::ostringstream os;
        os << "n = " << n << " exceeds the dense-matrix cap of " << max_qubits << " qubits";
        throw Error(ErrorKind::Capacity, os.str());
    }
    ParitySector sector;
    sector.n = n;
    sector.parity = parity;
    const State full = State{1} << n;
    sector.index_of.assign(full, -1);
    sector.states.reserve(full / 2);
    for (State s = 0; s < full; ++s) {
        if (std::popcount(s) % 2 == static_cast<int>(parity)) {
            sector.index_of[s] = static_cast<std::int32_t>(sector.states.size());
            sector.states.push_back(s);
        }
    }
    return sector;
}

double diagonal_energy(State state, std::span<const double> gammas) {
    double e = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i)
        e += (state >> i & 1U) ? -gammas[i] : gammas[i];
    return e;
}

SectorHamiltonian build_hamiltonian(const ParitySector& sector,
                                    const DisorderRealization& realization,
                                    std::span<const Bond> bonds) {
    if (realization.gammas.size() != static_cast<std::size_t>(sector.n))
        throw Error(ErrorKind::DimensionMismatch, "realization and sector disagree on n");
    if (realization.couplings.size() != bonds.size())
        throw Error(ErrorKind::DimensionMismatch, "one coupling per bond required");
    const auto dim = static_cast<Eigen::Index>(sector.dim());
    if (dim > std::numeric_limits<Eigen::Index>::max() / dim)
        throw Error(ErrorKind::Capacity, "sector matrix does not fit in memory");

    SectorHamiltonian h;
    h.seed = realization.seed;
    h.matrix = Eigen::MatrixXd::Zero(dim, dim);
    h.diag_energies.resize(sector.dim());
    for (Eigen::Index a = 0; a < dim; ++a) {
        const double e = diagonal_energy(sector.states[a], realization.gammas);
        h.diag_energies[a] = e;
        h.matrix(a, a) = e;
    }
    // σx_i σx_j flips bits i and j; the partner has the same parity.
    for (std::size_t k = 0; k < bonds.size(); ++k) {
        const State mask = (State{1} << bonds[k].i) | (State{1} << bonds[k].j);
        const double jij = realization.couplings[k];
        for (Eigen::Index a = 0; a < dim; ++a) {
            const auto b = sector.index_of[sector.states[a] ^ mask];
            h.matrix(a, b) += jij;
        }
    }
    return h;
}

void write_triplets(std::ostream& os, const SectorHamiltonian& h) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    // Column-major walk of a symmetric matrix emits entries in row order.
    for (Eigen::Index r = 0; r < h.matrix.cols(); ++r)
        for (Eigen::Index c = 0; c < h.matrix.rows(); ++c)
            if (h.matrix(c, r) != 0.0)
                os << r << ' ' << c << ' ' << h.matrix(c, r) << '\n';
    os.precision(old);
}

} // namespace qchaos
