#include <doctest.h>

#include "qchaos/eigenstate.hpp"
#include "qchaos/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace qchaos;

namespace {

SectorHamiltonian sample_hamiltonian(int lx, int ly, double j, std::uint64_t seed) {
    ModelParams p;
    p.lx = lx;
    p.ly = ly;
    p.j_bound = j;
    const auto bonds = build_bonds(lx, ly);
    return build_hamiltonian(enumerate_sector(p.n(), Parity::Even),
                             sample_disorder(p, bonds.size(), seed), bonds);
}

std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng) {
    std::vector<double> w(n);
    for (auto& x : w) x = uniform01(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return w;
}

} // namespace

TEST_CASE("weights of simple vectors") {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(5);
    unit[2] = 1.0;
    const auto w = weights(unit);
    CHECK(w == std::vector<double>{0, 0, 1, 0, 0});

    Eigen::VectorXd half = Eigen::VectorXd::Zero(4);
    half[0] = half[1] = 1.0 / std::sqrt(2.0);
    const auto wh = weights(half);
    CHECK(wh[0] == doctest::Approx(0.5));
    CHECK(wh[1] == doctest::Approx(0.5));
    CHECK(wh[2] == 0.0);
}

TEST_CASE("entropy reference values") {
    const std::vector<double> single = {0.0, 1.0, 0.0};
    CHECK(entropy_sq(single) == 0.0);
    const std::vector<double> pair = {0.5, 0.5, 0.0, 0.0};
    CHECK(entropy_sq(pair) == doctest::Approx(1.0));
    const std::vector<double> uniform(2048, 1.0 / 2048.0);
    CHECK(entropy_sq(uniform) == doctest::Approx(11.0));
}

TEST_CASE("entropy is permutation invariant and bounded") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto w = random_weights(64, rng);
        const double s = entropy_sq(w);
        CHECK(s >= 0.0);
        CHECK(s <= std::log2(64.0) + 1e-12);
        std::shuffle(w.begin(), w.end(), rng);
        CHECK(entropy_sq(w) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("merging weights never increases entropy") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto w = random_weights(32, rng);
        std::vector<double> merged(8, 0.0);
        for (std::size_t i = 0; i < w.size(); ++i) merged[(i * 7 + trial) % 8] += w[i];
        CHECK(entropy_sq(merged) <= entropy_sq(w) + 1e-12);
    }
}

TEST_CASE("eigenvector weights are normalized and columns are unitary") {
    const auto h = sample_hamiltonian(3, 3, 0.3, 12);
    const auto d = diagonalize(h);
    Eigen::VectorXd column_sums = Eigen::VectorXd::Zero(h.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k) {
        const auto w = weights(d.vector(k));
        CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) <= 1e-10);
        CHECK(eigenvector_entropy(d.vector(k)) == doctest::Approx(entropy_sq(w)).epsilon(1e-12));
        for (Eigen::Index i = 0; i < h.dim(); ++i) column_sums[i] += w[i];
    }
    CHECK((column_sums.array() - 1.0).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("S_q vanishes exactly at J = 0 and only there") {
    const auto h0 = sample_hamiltonian(3, 3, 0.0, 12);
    const auto d0 = diagonalize(h0);
    for (Eigen::Index k = 0; k < d0.dim(); ++k) CHECK(eigenvector_entropy(d0.vector(k)) == 0.0);
    const auto stats = mean_entropy(d0, {0, static_cast<std::size_t>(d0.dim() - 1)});
    CHECK(stats.mean == 0.0);
    CHECK(stats.sem == 0.0);

    const auto h1 = sample_hamiltonian(3, 3, 0.05, 12);
    const auto d1 = diagonalize(h1);
    for (Eigen::Index k = 0; k < d1.dim(); ++k) CHECK(eigenvector_entropy(d1.vector(k)) > 0.0);
}

TEST_CASE("eigenstate profile") {
    const auto h0 = sample_hamiltonian(2, 3, 0.0, 3);
    const auto d0 = diagonalize(h0);
    const auto p0 = eigenstate_profile(d0.vector(4), h0.diag_energies);
    REQUIRE(p0.size() == 1);
    CHECK(p0[0].weight == 1.0);
    CHECK(p0[0].energy == d0.eigenvalues[4]);

    const auto h = sample_hamiltonian(2, 3, 0.3, 3);
    const auto d = diagonalize(h);
    const auto all = eigenstate_profile(d.vector(10), h.diag_energies, 0.0);
    CHECK(all.size() == static_cast<std::size_t>(h.dim()));
    CHECK(std::is_sorted(all.begin(), all.end(),
                         [](const auto& a, const auto& b) { return a.energy < b.energy; }));
    const auto floored = eigenstate_profile(d.vector(10), h.diag_energies, 0.01);
    for (const auto& pt : floored) CHECK(pt.weight >= 0.01);

    const std::vector<double> short_energies(3, 0.0);
    CHECK_THROWS_AS(eigenstate_profile(d.vector(0), short_energies), Error);
}

TEST_CASE("strong coupling spreads mid-band eigenstates at n = 12") {
    const auto h = sample_hamiltonian(3, 4, 0.48, 21);
    const TridiagonalSolver solver(h.matrix, h.seed);
    const auto mid = static_cast<Eigen::Index>(h.dim() / 2);
    const auto d = solver.solve(mid, mid);
    const auto profile = eigenstate_profile(d.vector(mid), h.diag_energies);
    double wmax = 0.0;
    for (const auto& pt : profile) wmax = std::max(wmax, pt.weight);
    CHECK(profile.size() > 500);
    CHECK(wmax < 0.05);
}

TEST_CASE("mean_entropy window handling") {
    const auto h = sample_hamiltonian(3, 3, 0.2, 8);
    const auto d = diagonalize(h);
    const auto one = mean_entropy(d, {100, 100});
    CHECK(one.count == 1);
    CHECK(one.sem == 0.0);
    CHECK(one.mean == doctest::Approx(eigenvector_entropy(d.vector(100))));

    const TridiagonalSolver solver(h.matrix);
    const auto part = solver.solve(50, 60);
    CHECK_NOTHROW(mean_entropy(part, {50, 60}));
    CHECK_THROWS_AS(mean_entropy(part, {40, 60}), Error);
    CHECK_THROWS_AS(mean_entropy(d, {10, 5}), Error);
}
