#include "qchaos/lattice.hpp"

#include "qchaos/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qchaos {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidGeometry: return "invalid-geometry";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Input: return "input";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InsufficientStatistics: return "insufficient-statistics";
    case ErrorKind::DegenerateWindow: return "degenerate-window";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::EmptySample: return "empty-sample";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotBracketed: return "not-bracketed";
    case ErrorKind::Blocked: return "blocked";
    case ErrorKind::Config: return "config";
    case ErrorKind::Backend: return "backend";
    }
    return "unknown";
}

void ModelParams::validate() const {
    if (lx < 1 || ly < 1 || lx * ly < 2) {
        std::ostringstream os;
        os << "lattice " << lx << "x" << ly << " must have lx, ly >= 1 and at least 2 sites";
        throw Error(ErrorKind::InvalidGeometry, os.str());
    }
    if (!(delta >= 0.0 && delta <= kDelta0))
        throw Error(ErrorKind::InvalidParameter, "delta must lie in [0, delta0]");
    if (!(j_bound >= 0.0) || !std::isfinite(j_bound))
        throw Error(ErrorKind::InvalidParameter, "j_bound must be finite and >= 0");
    if (!(window_fraction > 0.0 && window_fraction <= 0.5))
        throw Error(ErrorKind::InvalidParameter, "window_fraction must lie in (0, 0.5]");
}

DisorderRealization DisorderRealization::with_coupling_bound(double j_bound) const {
    DisorderRealization out = *this;
    for (std::size_t b = 0; b < out.couplings.size(); ++b)
        out.couplings[b] = j_bound * unit_couplings[b];
    return out;
}

std::vector<Bond> build_bonds(int lx, int ly) {
    if (lx < 1 || ly < 1 || lx * ly < 2) {
        std::ostringstream os;
        os << "cannot build bonds for a " << lx << "x" << ly << " lattice";
        throw Error(ErrorKind::InvalidGeometry, os.str());
    }
    std::vector<Bond> bonds;
    auto add = [&](int a, int b) {
        if (a == b) return;
        Bond bond{std::min(a, b), std::max(a, b)};
        if (std::find(bonds.begin(), bonds.end(), bond) == bonds.end())
            bonds.push_back(bond);
    };
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            const int site = y * lx + x;
            add(site, y * lx + (x + 1) % lx);
            add(site, ((y + 1) % ly) * lx + x);
        }
    }
    std::sort(bonds.begin(), bonds.end(), [](const Bond& a, const Bond& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return bonds;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 finaliser over a combination of both inputs
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DisorderRealization sample_disorder(const ModelParams& params, std::size_t n_bonds,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DisorderRealization r;
    r.seed = seed;
    const int n = params.n();
    r.gammas.resize(n);
    for (int i = 0; i < n; ++i)
        r.gammas[i] = kDelta0 - 0.5 * params.delta + params.delta * uniform01(rng);
    r.unit_couplings.resize(n_bonds);
    for (auto& u : r.unit_couplings)
        u = 2.0 * uniform01(rng) - 1.0;
    r.couplings.resize(n_bonds);
    for (std::size_t b = 0; b < n_bonds; ++b)
        r.couplings[b] = params.j_bound * r.unit_couplings[b];
    return r;
}

double log10_multiqubit_spacing(int n, double delta0) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be >= 1");
    return std::log10(static_cast<double>(n) * delta0) - n * std::log10(2.0);
}

double multiqubit_spacing(int n, double delta0) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be >= 1");
    return std::ldexp(static_cast<double>(n) * delta0, -n);
}

CouplingEstimates theoretical_jc(int n, double delta0, double delta, double c) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be >= 1");
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be > 0");
    return {c * delta0 / n, kEntropyBorderConstant * delta / n};
}

std::pair<int, int> default_lattice(int n) {
    switch (n) {
    case 6: return {2, 3};
    case 9: return {3, 3};
    case 12: return {3, 4};
    case 15: return {3, 5};
    default: break;
    }
    if (n < 2) throw Error(ErrorKind::InvalidGeometry, "need at least 2 qubits");
    int lx = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (n % lx != 0) --lx;
    return {lx, n / lx};
}

} // namespace qchaos
