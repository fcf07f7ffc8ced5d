#include "qchaos/spectral.hpp"

#include "qchaos/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qchaos {

const char* to_string(WindowKind kind) {
    return kind == WindowKind::Levels ? "levels" : "energy";
}

namespace {

IndexRange checked_range(std::size_t begin, std::size_t count) {
    if (count < 3) {
        std::ostringstream os;
        os << "only " << count << " levels in the central window";
        throw Error(ErrorKind::InsufficientStatistics, os.str());
    }
    return {begin, begin + count - 1};
}

} // namespace

IndexRange select_window(std::span<const double> eigenvalues, double fraction,
                         WindowKind kind) {
    if (!(fraction > 0.0 && fraction <= 0.5))
        throw Error(ErrorKind::InvalidParameter, "window fraction must lie in (0, 0.5]");
    if (eigenvalues.size() < 3)
        throw Error(ErrorKind::InsufficientStatistics, "need at least 3 levels for a window");
    if (kind == WindowKind::Levels) {
        // Integer-exact: 2i within (N − 1)·(1 ± 2·fraction).
        const double top = static_cast<double>(eigenvalues.size() - 1);
        const auto lo = static_cast<std::size_t>(std::ceil(top * (0.5 - fraction) - 1e-9));
        const auto hi = std::min(eigenvalues.size() - 1,
                                 static_cast<std::size_t>(std::floor(top * (0.5 + fraction) + 1e-9)));
        return checked_range(lo, hi >= lo ? hi - lo + 1 : 0);
    }
    const double lo = eigenvalues.front();
    const double hi = eigenvalues.back();
    const double centre = 0.5 * (lo + hi);
    const double half = fraction * (hi - lo);
    auto first = std::lower_bound(eigenvalues.begin(), eigenvalues.end(), centre - half);
    auto last = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), centre + half);
    return checked_range(static_cast<std::size_t>(first - eigenvalues.begin()),
                         static_cast<std::size_t>(last - first));
}

std::vector<double> normalized_spacings(std::span<const double> levels) {
    if (levels.size() < 3)
        throw Error(ErrorKind::InsufficientStatistics, "need at least 3 levels for spacings");
    std::vector<double> gaps(levels.size() - 1);
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        gaps[k] = levels[k + 1] - levels[k];
        if (gaps[k] < 0.0)
            throw Error(ErrorKind::Input, "levels must be sorted ascending");
    }
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    if (!(mean > 0.0))
        throw Error(ErrorKind::DegenerateWindow,
                    "all levels in the window are degenerate (zero mean spacing)");
    for (double& g : gaps) g /= mean;
    return gaps;
}

double reference_pdf(Reference which, double s) {
    if (s < 0.0) throw Error(ErrorKind::Domain, "spacing must be >= 0");
    if (which == Reference::Poisson) return std::exp(-s);
    return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

double reference_cdf(Reference which, double s) {
    if (s < 0.0) throw Error(ErrorKind::Domain, "spacing must be >= 0");
    if (which == Reference::Poisson) return -std::expm1(-s);
    return -std::expm1(-0.25 * std::numbers::pi * s * s);
}

double eta(std::span<const double> spacings) {
    if (spacings.empty()) throw Error(ErrorKind::EmptySample, "eta of an empty sample");
    const auto below = std::count_if(spacings.begin(), spacings.end(),
                                     [](double s) { return s < kS0; });
    const double empirical = static_cast<double>(below) / static_cast<double>(spacings.size());
    const double fw = reference_cdf(Reference::WignerDyson, kS0);
    const double fp = reference_cdf(Reference::Poisson, kS0);
    return (empirical - fw) / (fp - fw);
}

double SpacingHistogram::reference_density(Reference which, std::size_t bin) const {
    return (reference_cdf(which, right(bin)) - reference_cdf(which, left(bin))) / bin_width;
}

SpacingHistogram spacing_histogram(std::span<const double> spacings, double bin_width,
                                   double s_max) {
    if (!(bin_width > 0.0) || !(s_max > 0.0))
        throw Error(ErrorKind::InvalidParameter, "bin width and s_max must be > 0");
    if (spacings.empty()) throw Error(ErrorKind::EmptySample, "histogram of an empty sample");
    SpacingHistogram h;
    h.bin_width = bin_width;
    const auto bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
    h.counts.assign(bins, 0);
    h.total = spacings.size();
    for (double s : spacings) {
        if (s < 0.0) throw Error(ErrorKind::Domain, "spacing must be >= 0");
        const auto bin = static_cast<std::size_t>(std::floor(s / bin_width));
        if (bin < bins) ++h.counts[bin];
    }
    h.density.resize(bins);
    for (std::size_t b = 0; b < bins; ++b)
        h.density[b] = static_cast<double>(h.counts[b]) /
                       (static_cast<double>(h.total) * bin_width);
    return h;
}

} // namespace qchaos
