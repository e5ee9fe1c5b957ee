#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "cpdd/band.hpp"
#include "helpers.hpp"

using namespace cpdd;

TEST_CASE("laplacian_neighbors") {
    auto n2 = laplacian_neighbors({3, 5, 0}, 2);
    std::set<Lattice> got(n2.begin(), n2.end());
    std::set<Lattice> want = {{2, 5, 0}, {4, 5, 0}, {3, 4, 0}, {3, 6, 0}};
    CHECK(got == want);

    auto n3 = laplacian_neighbors({0, 0, 0}, 3);
    CHECK(n3.size() == 6);
    for (const auto& c : n3) {
        CHECK(std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]) == 1);
    }
}

TEST_CASE("gamma formula") {
    auto band = Band::build(Surface::circle({0, 0}, 1.0), 0.1, 2);
    CHECK(band.gamma() == doctest::Approx(0.1 * 4.0 * std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(band.gamma() == doctest::Approx(0.28284271).epsilon(1e-6));
}

TEST_CASE("circle band matches an exhaustive bounding-box scan") {
    auto surface = Surface::circle({0, 0}, 1.0);
    auto band = Band::build(surface, 0.1, 2);

    // Oracle: classify every lattice node in [-2,2]^2 by distance <= gamma.
    std::set<Lattice> expected_active;
    const int n = static_cast<int>(std::ceil(2.0 / 0.1));
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            Vec3 p{i * 0.1, j * 0.1, 0.0};
            double rho = std::hypot(p.x, p.y);
            if (rho == 0.0) continue;
            if (std::abs(rho - 1.0) <= band.gamma()) expected_active.insert({i, j, 0});
        }
    }
    std::set<Lattice> got;
    for (const auto& node : band.active()) got.insert(node.lat);
    CHECK(got == expected_active);
    CHECK(band.n_active() == static_cast<std::int32_t>(expected_active.size()));
}

TEST_CASE("every ghost node neighbors an active node and lies outside the tube") {
    auto band = Band::build(Surface::sphere({0, 0, 0}, 1.0), 0.2, 2);
    for (const auto& g : band.ghost()) {
        CHECK(g.query.distance > band.gamma());
        bool has_active_neighbor = false;
        for (const Lattice& c : laplacian_neighbors(g.lat, band.dim())) {
            std::int32_t idx = band.find(c);
            if (idx >= 0 && band.is_active_index(idx)) has_active_neighbor = true;
        }
        CHECK(has_active_neighbor);
    }
    for (const auto& a : band.active()) CHECK(a.query.distance <= band.gamma());
}

TEST_CASE("band is independent of the seed choice") {
    auto surface = Surface::circle({0, 0}, 1.0);
    Vec3 s1{1.0, 0.0, 0.0};
    Vec3 s2{-0.3, 0.95, 0.0};
    auto b1 = Band::build(surface, 0.1, 2, std::span<const Vec3>(&s1, 1));
    auto b2 = Band::build(surface, 0.1, 2, std::span<const Vec3>(&s2, 1));
    REQUIRE(b1.n_active() == b2.n_active());
    REQUIRE(b1.n_ghost() == b2.n_ghost());
    for (std::int32_t i = 0; i < b1.n_nodes(); ++i) {
        CHECK(b1.node(i).lat == b2.node(i).lat);
    }
}

TEST_CASE("refinement monotonicity") {
    auto circle = Surface::circle({0, 0}, 1.0);
    double na_coarse = Band::build(circle, 0.1, 2).n_active();
    double na_fine = Band::build(circle, 0.05, 2).n_active();
    CHECK(na_fine / na_coarse > 1.8);

    auto sphere = Surface::sphere({0, 0, 0}, 1.0);
    double ns_coarse = Band::build(sphere, 0.2, 2).n_active();
    double ns_fine = Band::build(sphere, 0.1, 2).n_active();
    CHECK(ns_fine / ns_coarse > 3.5);
}

TEST_CASE("stencil base arithmetic") {
    // Degree 2 (even): nearest-node centering.
    auto b2 = Band::build(Surface::circle({0, 0}, 1.0), 0.1, 2);
    {
        auto base = b2.interp_stencil_base({0.34, 0.0, 0.0});  // t = 3.4
        CHECK(base[0] == 2);
    }
    // Degree 2, dx = 0.5 example: round(0.52) = 1, base 0.
    auto b_half = Band::build(Surface::circle({0, 0}, 1.0), 0.5, 2);
    {
        auto base = b_half.interp_stencil_base({0.26, 0.26, 0.0});
        CHECK(base[0] == 0);
        CHECK(base[1] == 0);
    }
    // Degree 3 (odd): containing-cell centering.
    auto b3 = Band::build(Surface::circle({0, 0}, 1.0), 0.1, 3);
    {
        auto base = b3.interp_stencil_base({0.34, 0.0, 0.0});
        CHECK(base[0] == 2);  // floor(3.4) - 1
    }
}

TEST_CASE("interpolation stencils of all nodes are active") {
    auto band = Band::build(Surface::circle({0, 0}, 1.0), 0.1, 2);
    for (std::int32_t i = 0; i < band.n_nodes(); ++i) {
        Lattice base = band.interp_stencil_base(band.node(i).query.closest_point);
        for (const Lattice& c : band.stencil_coords(base)) {
            std::int32_t idx = band.find(c);
            REQUIRE(idx >= 0);
            REQUIRE(band.is_active_index(idx));
        }
    }
}

TEST_CASE("TubeTooWide when gamma reaches 1/kappa") {
    auto small = Surface::circle({0, 0}, 0.5);  // kappa = 2, 1/kappa = 0.5
    CHECK_THROWS_AS((void)Band::build(small, 0.2, 2), Error);  // gamma = 0.566 > 0.5
}

TEST_CASE("SeedOffTube for distant seeds") {
    auto surface = Surface::circle({0, 0}, 1.0);
    Vec3 bad{3.0, 3.0, 0.0};
    CHECK_THROWS_AS((void)Band::build(surface, 0.1, 2, std::span<const Vec3>(&bad, 1)), Error);
}

TEST_CASE("band summary export") {
    auto band = Band::build(Surface::circle({0, 0}, 1.0), 0.1, 2);
    auto text = band.summary_text();
    CHECK(text.find("active nodes") != std::string::npos);
    std::ostringstream os;
    band.write_summary_csv(os);
    CHECK(os.str().find("n_active") != std::string::npos);
}
