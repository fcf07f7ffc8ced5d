#include <doctest.h>

#include "qchaos/error.hpp"
#include "qchaos/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

using namespace qchaos;

namespace {

// Independent edge enumeration: all unordered pairs of distinct sites whose
// cells differ by ±1 (mod extent) in exactly one coordinate.
std::set<std::pair<int, int>> torus_edges_brute_force(int lx, int ly) {
    std::set<std::pair<int, int>> edges;
    const int n = lx * ly;
    auto step = [](int a, int b, int extent) {
        return extent > 1 && ((a + 1) % extent == b || (b + 1) % extent == a);
    };
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t) {
            const int xs = s % lx, ys = s / lx, xt = t % lx, yt = t / lx;
            const bool horizontal = ys == yt && step(xs, xt, lx);
            const bool vertical = xs == xt && step(ys, yt, ly);
            if (horizontal || vertical) edges.insert({s, t});
        }
    return edges;
}

} // namespace

TEST_CASE("build_bonds counts on small tori") {
    CHECK(build_bonds(3, 3).size() == 18);
    CHECK(build_bonds(2, 2).size() == 4);
    CHECK(build_bonds(2, 3).size() == 9);
    const auto line = build_bonds(1, 2);
    REQUIRE(line.size() == 1);
    CHECK(line[0] == Bond{0, 1});
    CHECK(build_bonds(3, 1).size() == 3);  // 3-site ring
}

TEST_CASE("build_bonds matches brute-force enumeration") {
    for (int lx = 1; lx <= 5; ++lx)
        for (int ly = 1; ly <= 5; ++ly) {
            if (lx * ly < 2) continue;
            const auto bonds = build_bonds(lx, ly);
            std::set<std::pair<int, int>> got;
            for (const auto& b : bonds) {
                CHECK(b.i < b.j);
                CHECK(b.j < lx * ly);
                got.insert({b.i, b.j});
            }
            CHECK(got.size() == bonds.size());  // no duplicates
            CHECK(got == torus_edges_brute_force(lx, ly));
            const int n = lx * ly;
            if (lx > 2 && ly > 2) CHECK(bonds.size() == static_cast<std::size_t>(2 * n));
            else CHECK(bonds.size() < static_cast<std::size_t>(2 * n));
        }
}

TEST_CASE("build_bonds rejects single-site lattices") {
    CHECK_THROWS_AS(build_bonds(1, 1), Error);
    CHECK_THROWS_AS(build_bonds(0, 4), Error);
    try {
        build_bonds(1, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidGeometry);
    }
}

TEST_CASE("ModelParams validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.delta = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p.delta = 0.0;
    CHECK_NOTHROW(p.validate());
    p.window_fraction = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.window_fraction = 0.5;
    p.j_bound = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);
    p.j_bound = 0.1;
    p.lx = 1;
    p.ly = 1;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("sample_disorder degenerate widths") {
    ModelParams p;
    p.delta = 0.0;
    p.j_bound = 0.0;
    const auto r = sample_disorder(p, 24, 7);
    for (double g : r.gammas) CHECK(g == 1.0);
    for (double c : r.couplings) CHECK(c == 0.0);
    CHECK(r.seed == 7);
}

TEST_CASE("sample_disorder ranges, reproducibility and moments") {
    ModelParams p;
    p.lx = 100;
    p.ly = 100;
    p.delta = 1.0;
    p.j_bound = 0.3;
    const auto a = sample_disorder(p, 20000, 42);
    const auto b = sample_disorder(p, 20000, 42);
    CHECK(a.gammas == b.gammas);
    CHECK(a.couplings == b.couplings);
    const auto c = sample_disorder(p, 20000, 43);
    CHECK(a.gammas != c.gammas);

    const auto [gmin, gmax] = std::minmax_element(a.gammas.begin(), a.gammas.end());
    CHECK(*gmin >= 0.5);
    CHECK(*gmax <= 1.5);
    for (double j : a.couplings) CHECK(std::abs(j) <= 0.3);

    // 10^5 draws: mean within 4 standard errors of Δ0.
    p.lx = 1000;
    const auto big = sample_disorder(p, 0, 5);
    REQUIRE(big.gammas.size() == 100000);
    double mean = 0.0;
    for (double g : big.gammas) mean += g;
    mean /= 1e5;
    CHECK(std::abs(mean - 1.0) <= 4.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(1e5));
}

TEST_CASE("coupling draws rescale with the bound") {
    ModelParams p;
    p.j_bound = 0.2;
    const auto r = sample_disorder(p, 24, 11);
    const auto scaled = r.with_coupling_bound(0.4);
    for (std::size_t b = 0; b < r.couplings.size(); ++b)
        CHECK(scaled.couplings[b] == doctest::Approx(2.0 * r.couplings[b]).epsilon(1e-15));
    CHECK(scaled.gammas == r.gammas);

    // A draw at bound J equals the unit draw rescaled to J.
    p.j_bound = 0.4;
    const auto direct = sample_disorder(p, 24, 11);
    CHECK(direct.couplings == scaled.couplings);
}

TEST_CASE("derive_seed separates indices and masters") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 4; ++m)
        for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(m, k));
    CHECK(seen.size() == 4000);
    CHECK(derive_seed(9, 3) == derive_seed(9, 3));
}

TEST_CASE("multi-qubit spacing estimate") {
    CHECK(multiqubit_spacing(1) == 0.5);
    CHECK(multiqubit_spacing(12) == doctest::Approx(12.0 / 4096.0));
    CHECK(multiqubit_spacing(12) == doctest::Approx(2.93e-3).epsilon(1e-3));
    const double l = log10_multiqubit_spacing(1000);
    CHECK(std::isfinite(l));
    CHECK(l == doctest::Approx(-298.0).epsilon(1e-3));
    CHECK(std::round(l) == -298.0);
}

TEST_CASE("theoretical critical couplings") {
    const auto e = theoretical_jc(12, 1.0, 1.0);
    CHECK(e.generic == doctest::Approx(3.16 / 12));
    CHECK(e.generic == doctest::Approx(0.263).epsilon(2e-3));
    CHECK(e.band == doctest::Approx(0.0333).epsilon(2e-3));
    const auto k = theoretical_jc(1000, 1.0, 1.0);
    CHECK(k.band == doctest::Approx(4e-4));
    const auto d = theoretical_jc(1, 1.0, 1.0, 1.0);
    CHECK(d.generic == 1.0);
    CHECK(d.band == doctest::Approx(0.4));
    CHECK_THROWS_AS(theoretical_jc(12, 1.0, 1.0, 0.0), Error);
}

TEST_CASE("default lattice shapes") {
    CHECK(default_lattice(6) == std::pair{2, 3});
    CHECK(default_lattice(9) == std::pair{3, 3});
    CHECK(default_lattice(12) == std::pair{3, 4});
    CHECK(default_lattice(15) == std::pair{3, 5});
    CHECK(default_lattice(16) == std::pair{4, 4});
    CHECK(default_lattice(7) == std::pair{1, 7});
}
