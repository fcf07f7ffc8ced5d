#pragma once

#include "qchaos/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qchaos {

inline constexpr double kOrthonormalityTolerance = 1e-10;
inline constexpr double kResidualScale = 1e-9;

/**
 * Eigenvalues of a real symmetric matrix in ascending order, together with
 * eigenvectors for the contiguous index range
 * [first_vector, first_vector + eigenvectors.cols()).
 * A full decomposition has first_vector == 0 and a square eigenvector matrix.
 */
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;
    Eigen::Index first_vector = 0;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(eigenvalues.size()); }
    Eigen::Index vector_count() const { return eigenvectors.cols(); }
    bool is_full() const { return first_vector == 0 && vector_count() == dim(); }
    bool has_vector(Eigen::Index k) const {
        return k >= first_vector && k < first_vector + vector_count();
    }
    /// Eigenvector paired with eigenvalues[k].
    auto vector(Eigen::Index k) const { return eigenvectors.col(k - first_vector); }
};

/// Full spectrum and eigenvectors (LAPACK divide and conquer).
EigenDecomposition diagonalize(const Eigen::MatrixXd& matrix, std::uint64_t seed = 0);
EigenDecomposition diagonalize(const SectorHamiltonian& h);

/// Eigenvalues only.
std::vector<double> eigenvalues(const Eigen::MatrixXd& matrix, std::uint64_t seed = 0);

/**
 * Two-stage solver: the matrix is reduced to tridiagonal form once, all
 * eigenvalues come from the tridiagonal matrix, and eigenvectors are formed
 * only for a requested index range. Used when only a slice of the spectrum
 * needs eigenvectors.
 */
class TridiagonalSolver {
public:
    explicit TridiagonalSolver(const Eigen::MatrixXd& matrix, std::uint64_t seed = 0);

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    /// Decomposition with eigenvectors for indices [first, last] inclusive.
    EigenDecomposition solve(Eigen::Index first, Eigen::Index last) const;

private:
    Eigen::MatrixXd reflectors_;
    std::vector<double> diag_;
    std::vector<double> offdiag_;
    std::vector<double> tau_;
    std::vector<double> eigenvalues_;
    std::uint64_t seed_ = 0;
    bool diagonal_input_ = false;
};

struct ResidualReport {
    double orthonormality = 0.0;  // max |VᵀV − I|
    double eigen_residual = 0.0;  // max |HV − VΛ|
    double orthonormality_tolerance = kOrthonormalityTolerance;
    double residual_tolerance = 0.0;
    bool eigenvalues_sorted = true;

    bool orthonormality_ok() const { return orthonormality <= orthonormality_tolerance; }
    bool residual_ok() const { return eigen_residual <= residual_tolerance; }
    bool ok() const { return eigenvalues_sorted && orthonormality_ok() && residual_ok(); }
};

/// Checks the decomposition contract on the vectors it carries.
ResidualReport validate(const EigenDecomposition& decomp, const Eigen::MatrixXd& matrix);

/// Limit BLAS-internal threads; the ensemble driver sets 1 when it runs its own workers.
void set_blas_threads(int threads);

/// Decomposes a fixed 400x400 matrix through both LAPACK routes and checks the
/// residuals. Some optimised BLAS builds pick kernels that return wrong
/// products on particular CPUs; every solver entry point runs this once and
/// throws Error(Backend) instead of returning a corrupt decomposition.
bool backend_self_test();

/// For executables: when the self-test fails and OPENBLAS_CORETYPE is unset,
/// re-executes the current program with a conservative OpenBLAS kernel
/// (OpenBLAS reads the variable only at load time). Returns if no restart
/// was needed or possible.
void ensure_blas_backend(char** argv);

} // namespace qchaos
