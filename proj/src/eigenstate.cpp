#include "qchaos/eigenstate.hpp"

#include "qchaos/error.hpp"

#include <algorithm>
#include <cmath>

namespace qchaos {

std::vector<double> weights(const Eigen::Ref<const Eigen::VectorXd>& eigenvector) {
    std::vector<double> w(eigenvector.size());
    for (Eigen::Index i = 0; i < eigenvector.size(); ++i)
        w[i] = eigenvector[i] * eigenvector[i];
    return w;
}

double entropy_sq(std::span<const double> w) {
    double s = 0.0;
    for (double p : w)
        if (p > 0.0) s -= p * std::log2(p);
    return s;
}

double eigenvector_entropy(const Eigen::Ref<const Eigen::VectorXd>& eigenvector) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvector.size(); ++i) {
        const double p = eigenvector[i] * eigenvector[i];
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

std::vector<ProfilePoint> eigenstate_profile(const Eigen::Ref<const Eigen::VectorXd>& eigenvector,
                                             std::span<const double> diag_energies,
                                             double floor) {
    if (static_cast<std::size_t>(eigenvector.size()) != diag_energies.size())
        throw Error(ErrorKind::DimensionMismatch, "eigenvector and energies differ in length");
    if (!(floor >= 0.0)) throw Error(ErrorKind::InvalidParameter, "floor must be >= 0");
    std::vector<ProfilePoint> out;
    for (Eigen::Index i = 0; i < eigenvector.size(); ++i) {
        const double w = eigenvector[i] * eigenvector[i];
        if (w >= floor) out.push_back({diag_energies[i], w});
    }
    std::stable_sort(out.begin(), out.end(), [](const ProfilePoint& a, const ProfilePoint& b) {
        return a.energy < b.energy;
    });
    return out;
}

EntropyStats mean_entropy(const EigenDecomposition& decomp, IndexRange window) {
    if (window.last < window.first || window.last >= static_cast<std::size_t>(decomp.dim()))
        throw Error(ErrorKind::EmptySample, "empty or out-of-range entropy window");
    const auto first = static_cast<Eigen::Index>(window.first);
    const auto last = static_cast<Eigen::Index>(window.last);
    if (!decomp.has_vector(first) || !decomp.has_vector(last))
        throw Error(ErrorKind::DimensionMismatch, "decomposition lacks eigenvectors for window");

    EntropyStats stats;
    stats.count = window.size();
    double sum = 0.0, sum2 = 0.0;
    for (Eigen::Index k = first; k <= last; ++k) {
        const double s = eigenvector_entropy(decomp.vector(k));
        sum += s;
        sum2 += s * s;
    }
    const double n = static_cast<double>(stats.count);
    stats.mean = sum / n;
    if (stats.count > 1) {
        const double var = std::max(0.0, (sum2 - n * stats.mean * stats.mean) / (n - 1.0));
        stats.sem = std::sqrt(var / n);
    }
    return stats;
}

} // namespace qchaos
