#include <doctest.h>

#include "qchaos/error.hpp"
#include "qchaos/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

using namespace qchaos;

TEST_CASE("enumerate_sector small cases") {
    const auto even3 = enumerate_sector(3, Parity::Even);
    CHECK(even3.states == std::vector<State>{0b000, 0b011, 0b101, 0b110});
    const auto odd2 = enumerate_sector(2, Parity::Odd);
    CHECK(odd2.states == std::vector<State>{0b01, 0b10});
    CHECK(enumerate_sector(12, Parity::Even).dim() == 2048);
    CHECK(enumerate_sector(12, Parity::Odd).dim() == 2048);
}

TEST_CASE("enumerate_sector invariants") {
    for (int n = 1; n <= 10; ++n)
        for (Parity par : {Parity::Even, Parity::Odd}) {
            const auto s = enumerate_sector(n, par);
            CHECK(s.dim() == (std::size_t{1} << (n - 1)));
            for (std::size_t a = 0; a < s.dim(); ++a) {
                CHECK(std::popcount(s.states[a]) % 2 == static_cast<int>(par));
                CHECK(s.index_of[s.states[a]] == static_cast<std::int32_t>(a));
                if (a > 0) CHECK(s.states[a] > s.states[a - 1]);
            }
        }
}

TEST_CASE("enumerate_sector capacity cap") {
    CHECK_THROWS_AS(enumerate_sector(17, Parity::Even), Error);
    try {
        enumerate_sector(5, Parity::Even, 4);
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
}

TEST_CASE("diagonal_energy conventions") {
    const std::vector<double> ones(12, 1.0);
    CHECK(diagonal_energy(0, ones) == 12.0);
    const std::vector<double> g = {0.8, 1.2};
    CHECK(diagonal_energy(0b01, g) == doctest::Approx(0.4));

    std::mt19937_64 rng(3);
    std::vector<double> gammas(8);
    for (auto& x : gammas) x = 0.5 + uniform01(rng);
    double total = 0.0;
    for (State s = 0; s < 256; ++s) total += diagonal_energy(s, gammas);
    CHECK(std::abs(total) < 1e-12);
}

TEST_CASE("n = 2 even sector by hand") {
    const auto sector = enumerate_sector(2, Parity::Even);
    const auto bonds = build_bonds(1, 2);
    DisorderRealization r;
    r.gammas = {0.7, 1.3};
    r.couplings = {0.25};
    r.unit_couplings = {0.25};
    const auto h = build_hamiltonian(sector, r, bonds);
    REQUIRE(h.dim() == 2);
    CHECK(h.matrix(0, 0) == doctest::Approx(2.0));
    CHECK(h.matrix(1, 1) == doctest::Approx(-2.0));
    CHECK(h.matrix(0, 1) == 0.25);
    CHECK(h.matrix(1, 0) == 0.25);
}

TEST_CASE("3-site ring has three couplings per row") {
    const auto sector = enumerate_sector(3, Parity::Even);
    const auto bonds = build_bonds(3, 1);
    REQUIRE(bonds.size() == 3);
    DisorderRealization r;
    r.gammas = {1.0, 0.9, 1.1};
    r.couplings = {0.1, -0.2, 0.3};
    const auto h = build_hamiltonian(sector, r, bonds);
    for (Eigen::Index a = 0; a < h.dim(); ++a) {
        int nonzero = 0;
        for (Eigen::Index b = 0; b < h.dim(); ++b)
            if (a != b && h.matrix(a, b) != 0.0) ++nonzero;
        CHECK(nonzero == 3);
    }
}

TEST_CASE("sector Hamiltonian structure") {
    ModelParams p;
    p.lx = 3;
    p.ly = 3;
    p.j_bound = 0.3;
    const auto bonds = build_bonds(p.lx, p.ly);
    const auto r = sample_disorder(p, bonds.size(), 99);
    double trace = 0.0;
    std::size_t dims = 0;
    for (Parity par : {Parity::Even, Parity::Odd}) {
        const auto sector = enumerate_sector(p.n(), par);
        const auto h = build_hamiltonian(sector, r, bonds);
        dims += sector.dim();
        trace += h.matrix.trace();
        CHECK(h.seed == r.seed);
        for (Eigen::Index a = 0; a < h.dim(); ++a) {
            CHECK(h.diag_energies[a] == h.matrix(a, a));
            int support = 0;
            for (Eigen::Index b = 0; b < h.dim(); ++b) {
                CHECK(h.matrix(a, b) == h.matrix(b, a));  // bitwise symmetric
                if (a == b || h.matrix(a, b) == 0.0) continue;
                ++support;
                const State diff = sector.states[a] ^ sector.states[b];
                bool is_bond = false;
                for (const auto& bond : bonds)
                    is_bond |= diff == ((State{1} << bond.i) | (State{1} << bond.j));
                CHECK(is_bond);
            }
            CHECK(support == static_cast<int>(bonds.size()));
        }
    }
    CHECK(dims == 512);
    CHECK(std::abs(trace) < 1e-10);
}

TEST_CASE("J = 0 Hamiltonian is diagonal") {
    ModelParams p;
    p.lx = 2;
    p.ly = 3;
    const auto bonds = build_bonds(p.lx, p.ly);
    const auto h = build_hamiltonian(enumerate_sector(6, Parity::Even),
                                     sample_disorder(p, bonds.size(), 1), bonds);
    CHECK(h.matrix.isDiagonal(0.0));
}

TEST_CASE("mismatched realization is rejected") {
    const auto sector = enumerate_sector(4, Parity::Even);
    DisorderRealization r;
    r.gammas = {1, 1, 1};
    CHECK_THROWS_AS(build_hamiltonian(sector, r, build_bonds(2, 2)), Error);
}

TEST_CASE("triplet dump lists every nonzero once") {
    const auto sector = enumerate_sector(2, Parity::Even);
    DisorderRealization r;
    r.gammas = {0.5, 0.25};
    r.couplings = {0.125};
    const auto h = build_hamiltonian(sector, r, build_bonds(1, 2));
    std::ostringstream os;
    write_triplets(os, h);
    CHECK(os.str() == "0 0 0.75\n0 1 0.125\n1 0 0.125\n1 1 -0.75\n");
}
