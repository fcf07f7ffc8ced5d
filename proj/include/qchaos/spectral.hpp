#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qchaos {

// Crossing point of the Poisson and Wigner-Dyson spacing densities.
inline constexpr double kS0 = 0.4729;
inline constexpr double kDefaultWindowFraction = 0.0625;

/// Closed index range [first, last] into an ascending spectrum.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t size() const { return last - first + 1; }
};

/// How the central window is measured.
/// Levels: by level index, |i − i_c| <= fraction·(N − 1), i.e. the same
/// fraction of the unfolded band. Energy: |E − E_c| <= fraction·(E_max − E_min).
enum class WindowKind : int { Levels = 0, Energy = 1 };

const char* to_string(WindowKind kind);

/// Central window of an ascending spectrum, E_c / i_c the band centre.
/// Throws InsufficientStatistics when fewer than 3 levels fall inside.
IndexRange select_window(std::span<const double> eigenvalues,
                         double fraction = kDefaultWindowFraction,
                         WindowKind kind = WindowKind::Levels);

/// Consecutive gaps divided by their mean.
std::vector<double> normalized_spacings(std::span<const double> levels);

enum class Reference { Poisson, WignerDyson };

double reference_pdf(Reference which, double s);
double reference_cdf(Reference which, double s);

/// Spacings pooled over realizations.
struct SpacingSample {
    std::vector<double> spacings;
    std::size_t n_d = 0;

    std::size_t n_s() const { return spacings.size(); }
    void append(std::span<const double> more) {
        spacings.insert(spacings.end(), more.begin(), more.end());
        ++n_d;
    }
};

/// (F̂(s0) − F_W(s0)) / (F_P(s0) − F_W(s0)) with F̂ the empirical CDF:
/// 1 for Poisson, 0 for Wigner-Dyson.
double eta(std::span<const double> spacings);
inline double eta(const SpacingSample& sample) { return eta(sample.spacings); }

struct SpacingHistogram {
    double bin_width = 0.1;
    std::vector<double> density;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    double left(std::size_t bin) const { return bin_width * static_cast<double>(bin); }
    double right(std::size_t bin) const { return bin_width * static_cast<double>(bin + 1); }
    /// Reference density averaged over a bin, for direct comparison.
    double reference_density(Reference which, std::size_t bin) const;
};

/// Bins [k·w, (k+1)·w) covering [0, s_max); density = count / (total · w),
/// with spacings beyond s_max counted in total but not binned.
SpacingHistogram spacing_histogram(std::span<const double> spacings, double bin_width = 0.1,
                                   double s_max = 5.0);

} // namespace qchaos
