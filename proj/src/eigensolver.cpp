#include "qchaos/eigensolver.hpp"

#include "qchaos/error.hpp"

#include <lapacke.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

extern "C" void openblas_set_num_threads(int);

namespace qchaos {

namespace {

void check_input(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorKind::DimensionMismatch, "eigensolver needs a square matrix");
    if (m.rows() == 0)
        throw Error(ErrorKind::Input, "eigensolver needs a non-empty matrix");
    if (!m.allFinite())
        throw Error(ErrorKind::Input, "matrix has non-finite entries");
}

[[noreturn]] void convergence_failure(const char* routine, lapack_int info, std::uint64_t seed) {
    std::ostringstream os;
    os << routine << " failed (info = " << info << ") for the matrix of realization seed "
       << seed;
    throw Error(info > 0 ? ErrorKind::Convergence : ErrorKind::Input, os.str());
}

thread_local bool self_testing = false;

void require_backend() {
    if (self_testing) return;
    static std::once_flag once;
    static bool ok = false;
    std::call_once(once, [] { ok = backend_self_test(); });
    if (!ok)
        throw Error(ErrorKind::Backend,
                    "the BLAS/LAPACK backend failed its accuracy self-test; with OpenBLAS, "
                    "set OPENBLAS_CORETYPE=Haswell (or another kernel valid for this CPU)");
}

EigenDecomposition full_decomposition(const Eigen::MatrixXd& matrix, std::uint64_t seed) {
    const Eigen::Index n = matrix.rows();
    EigenDecomposition d;
    d.eigenvectors = matrix;
    d.eigenvalues.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                       d.eigenvectors.data(), static_cast<lapack_int>(n), d.eigenvalues.data());
    if (info != 0) convergence_failure("dsyevd", info, seed);
    return d;
}

bool is_diagonal(const Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (r != c && m(r, c) != 0.0) return false;
    return true;
}

// A diagonal matrix is decomposed exactly: sorted diagonal, permuted unit vectors.
std::vector<Eigen::Index> sorted_diagonal_order(const Eigen::MatrixXd& m) {
    std::vector<Eigen::Index> order(m.rows());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return m(a, a) < m(b, b); });
    return order;
}

EigenDecomposition diagonal_decomposition(const Eigen::MatrixXd& m, Eigen::Index first,
                                          Eigen::Index last) {
    const auto order = sorted_diagonal_order(m);
    EigenDecomposition d;
    d.eigenvalues.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        d.eigenvalues[k] = m(order[k], order[k]);
    d.first_vector = first;
    d.eigenvectors = Eigen::MatrixXd::Zero(m.rows(), last - first + 1);
    for (Eigen::Index k = first; k <= last; ++k)
        d.eigenvectors(order[k], k - first) = 1.0;
    return d;
}

} // namespace

EigenDecomposition diagonalize(const Eigen::MatrixXd& matrix, std::uint64_t seed) {
    check_input(matrix);
    const Eigen::Index n = matrix.rows();
    if (is_diagonal(matrix)) return diagonal_decomposition(matrix, 0, n - 1);
    require_backend();
    return full_decomposition(matrix, seed);
}

EigenDecomposition diagonalize(const SectorHamiltonian& h) {
    return diagonalize(h.matrix, h.seed);
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& matrix, std::uint64_t seed) {
    return TridiagonalSolver(matrix, seed).eigenvalues();
}

TridiagonalSolver::TridiagonalSolver(const Eigen::MatrixXd& matrix, std::uint64_t seed)
    : seed_(seed) {
    check_input(matrix);
    const Eigen::Index n = matrix.rows();
    if (is_diagonal(matrix)) {
        diagonal_input_ = true;
        reflectors_ = matrix;
        for (auto k : sorted_diagonal_order(matrix))
            eigenvalues_.push_back(matrix(k, k));
        return;
    }
    require_backend();
    const auto ln = static_cast<lapack_int>(n);
    reflectors_ = matrix;
    diag_.resize(n);
    offdiag_.resize(n);  // dstemr wants length n
    tau_.resize(n);
    lapack_int info = LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', ln, reflectors_.data(), ln,
                                     diag_.data(), offdiag_.data(), tau_.data());
    if (info != 0) convergence_failure("dsytrd", info, seed_);

    eigenvalues_ = diag_;
    std::vector<double> e(offdiag_.begin(), offdiag_.end() - 1);
    info = LAPACKE_dsterf(ln, eigenvalues_.data(), e.data());
    if (info != 0) convergence_failure("dsterf", info, seed_);
}

EigenDecomposition TridiagonalSolver::solve(Eigen::Index first, Eigen::Index last) const {
    const Eigen::Index n = static_cast<Eigen::Index>(eigenvalues_.size());
    if (first < 0 || last >= n || first > last)
        throw Error(ErrorKind::DimensionMismatch, "eigenvector index range out of bounds");
    if (diagonal_input_) return diagonal_decomposition(reflectors_, first, last);

    const auto ln = static_cast<lapack_int>(n);
    const auto count = static_cast<lapack_int>(last - first + 1);
    std::vector<double> d = diag_;
    std::vector<double> e = offdiag_;
    std::vector<double> w(n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    Eigen::MatrixXd z(n, count);
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', ln, d.data(), e.data(), 0.0,
                                     0.0, static_cast<lapack_int>(first + 1),
                                     static_cast<lapack_int>(last + 1), &found, w.data(),
                                     z.data(), ln, count, support.data(), &tryrac);
    if (info != 0 || found != count) convergence_failure("dstemr", info, seed_);

    info = LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', ln, count,
                          const_cast<double*>(reflectors_.data()), ln,
                          const_cast<double*>(tau_.data()), z.data(), ln);
    if (info != 0) convergence_failure("dormtr", info, seed_);

    EigenDecomposition out;
    out.eigenvalues = eigenvalues_;
    out.first_vector = first;
    out.eigenvectors = std::move(z);
    return out;
}

ResidualReport validate(const EigenDecomposition& decomp, const Eigen::MatrixXd& matrix) {
    const Eigen::Index n = matrix.rows();
    if (matrix.cols() != n || decomp.dim() != n || decomp.eigenvectors.rows() != n ||
        decomp.first_vector < 0 || decomp.first_vector + decomp.vector_count() > n)
        throw Error(ErrorKind::DimensionMismatch, "decomposition does not match the matrix");

    ResidualReport report;
    report.eigenvalues_sorted =
        std::is_sorted(decomp.eigenvalues.begin(), decomp.eigenvalues.end());
    const double hmax = n > 0 ? matrix.cwiseAbs().maxCoeff() : 0.0;
    report.residual_tolerance = kResidualScale * std::max(1.0, hmax * static_cast<double>(n));
    if (decomp.vector_count() == 0) return report;

    const Eigen::MatrixXd& v = decomp.eigenvectors;
    const Eigen::MatrixXd gram = v.transpose() * v;
    report.orthonormality =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();

    const Eigen::Map<const Eigen::VectorXd> lambda(
        decomp.eigenvalues.data() + decomp.first_vector, decomp.vector_count());
    const Eigen::MatrixXd residual = matrix * v - v * lambda.asDiagonal();
    report.eigen_residual = residual.cwiseAbs().maxCoeff();
    return report;
}

void set_blas_threads(int threads) { openblas_set_num_threads(std::max(1, threads)); }

bool backend_self_test() {
    const Eigen::Index n = 400;
    std::mt19937_64 rng(20000117);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r <= c; ++r) m(r, c) = m(c, r) = 2.0 * uniform01(rng) - 1.0;
    struct Guard {
        Guard() { self_testing = true; }
        ~Guard() { self_testing = false; }
    } guard;
    try {
        if (!validate(full_decomposition(m, 0), m).ok()) return false;
        const TridiagonalSolver solver(m);
        return validate(solver.solve(150, 249), m).ok();
    } catch (const Error&) {
        return false;
    }
}

void ensure_blas_backend(char** argv) {
#ifdef __linux__
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr || backend_self_test()) return;
    ::setenv("OPENBLAS_CORETYPE", "Haswell", 1);
    ::execv("/proc/self/exe", argv);
#else
    (void)argv;
#endif
}

} // namespace qchaos
