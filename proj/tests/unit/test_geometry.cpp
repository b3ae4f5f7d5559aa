#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harnack_lab/geometry.hpp"
#include "support/oracles.hpp"

using namespace harnack;
using std::numbers::pi;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("make_sector validates the opening and keeps the bisector on +x2") {
    CHECK_THROWS_AS(make_sector(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_sector(2.0 * pi), std::invalid_argument);
    CHECK_THROWS_AS(make_sector(-1.0), std::invalid_argument);
    const auto s = make_sector(pi / 4.0);
    CHECK(s.dim == 2);
    CHECK(signed_distance(s, {0.0, 0.5, 0.0}) < 0.0);
    CHECK(signed_distance(s, {0.5, 0.0, 0.0}) > 0.0);
    const auto half = make_sector(pi);
    CHECK(signed_distance(half, {0.0, 0.3, 0.0}) == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(signed_distance(half, {0.7, -0.2, 0.0}) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("make_cone half-aperture follows the slope") {
    const auto half_space = make_cone(3, 0.0);
    CHECK(half_space.aperture == doctest::Approx(pi / 2.0));
    CHECK(signed_distance(half_space, {0.0, 0.0, 0.3}) == doctest::Approx(-0.3));
    const auto c1 = make_cone(3, 1.0);
    CHECK(c1.aperture == doctest::Approx(pi / 4.0));
    CHECK_THROWS_AS(make_cone(1, 0.0), std::invalid_argument);
}

TEST_CASE("a reentrant planar cone matches the wide sector") {
    // {x2 > -|x1|} is the sector of opening 3*pi/2 around +x2.
    const auto cone = make_cone(2, -1.0);
    const auto sector = make_sector(3.0 * pi / 2.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        const Point p{coord(rng), coord(rng), 0.0};
        CHECK(signed_distance(cone, p) ==
              doctest::Approx(signed_distance(sector, p)).epsilon(1e-12));
    }
}

TEST_CASE("make_lipschitz_graph computes the Lipschitz constant") {
    CHECK(make_lipschitz_graph({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, 1.0).slope == 0.0);
    CHECK(make_lipschitz_graph({{-1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}}, 1.0).slope ==
          doctest::Approx(1.0));
    CHECK(make_lipschitz_graph({{-1.0, 0.5}, {0.0, 0.0}, {1.0, 0.25}}, 1.0).slope ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(make_lipschitz_graph({{-1.0, 0.1}, {1.0, 0.2}}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("sector distance on the bisector") {
    const auto s = make_sector(pi / 2.0);
    for (double r : {0.1, 0.35, 0.8}) {
        CHECK(signed_distance(s, {0.0, r, 0.0}) ==
              doctest::Approx(-r * std::sin(pi / 4.0)).epsilon(1e-13));
    }
}

TEST_CASE("wedge graph distance agrees with dense boundary sampling") {
    const auto g = make_lipschitz_graph({{-1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}}, 1.0);
    for (const Point& p : {Point{0.5, 1.0, 0.0}, Point{0.1, 0.4, 0.0}, Point{-0.3, 0.9, 0.0}}) {
        const double oracle = oracles::graph_boundary_distance_sampled(g, p, 20000);
        const double got = std::abs(truncated_signed_distance(g, p));
        CHECK(std::abs(got - oracle) <= 1e-12);
    }
}

TEST_CASE("scaling invariance of cone and sector distances") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 8.0);
    const auto specs = {make_sector(3.0 * pi / 4.0), make_cone(3, 0.5), make_cone(2, -0.3)};
    for (const auto& spec : specs) {
        for (int i = 0; i < 100; ++i) {
            Point p{coord(rng), coord(rng), spec.dim == 3 ? coord(rng) : 0.0};
            const double s = scale(rng);
            Point ps{p[0] * s, p[1] * s, p[2] * s};
            CHECK(signed_distance(spec, ps) ==
                  doctest::Approx(s * signed_distance(spec, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rasterize half-plane: first-row intercepts carry eta = 1/2") {
    const auto g = rasterize(make_cone(2, 0.0), 1.0 / 32.0);
    int checked = 0;
    for (int eq = 0; eq < g.interior_count(); ++eq) {
        const std::int64_t f = g.cell_of_eq[std::size_t(eq)];
        const Point c = g.center(f);
        CHECK(c[1] > 0.0);  // every interior center lies inside
        const CutArm& down = g.arm(eq, 2);  // -y arm
        if (!down.cut || down.outer) continue;
        // Lateral cut: boundary at x2 = 0, center at x2 = h/2.
        CHECK(down.eta == doctest::Approx(c[1] / g.h).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("rasterize interior count approximates the sector area") {
    const double omega = pi / 4.0;
    const auto g = rasterize(make_sector(omega), 1.0 / 64.0);
    const double measured = g.interior_count() * g.h * g.h;
    CHECK(measured == doctest::Approx(omega / 2.0).epsilon(0.01));
}

TEST_CASE("rasterize cone classification matches the distance sign") {
    const auto spec = make_cone(3, 1.0);
    const auto g = rasterize(spec, 1.0 / 32.0);
    for (std::int64_t f = 0; f < g.cell_count(); ++f) {
        const double sd = truncated_signed_distance(spec, g.center(f));
        if (g.cls[std::size_t(f)] == CellClass::Exterior)
            CHECK(sd >= -1e-12);
        else
            CHECK(sd < -1e-12);
    }
}

TEST_CASE("walking eta h along a cut arm lands on the zero level") {
    for (const auto& spec : {make_sector(3.0 * pi / 4.0), make_lipschitz_graph(
                                 {{-1.0, 0.3}, {0.0, 0.0}, {1.0, 0.45}}, 1.0)}) {
        const auto g = rasterize(spec, 1.0 / 32.0);
        int checked = 0;
        for (int eq = 0; eq < g.interior_count(); ++eq) {
            for (int dir = 0; dir < 2 * g.dim; ++dir) {
                const CutArm& arm = g.arm(eq, dir);
                if (!arm.cut || arm.eta >= 1.0) continue;
                const Point x = g.crossing_point(eq, dir);
                CHECK(std::abs(truncated_signed_distance(spec, x)) <= 1e-9);
                ++checked;
            }
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("interior cells are monotone in the sector aperture") {
    const auto g1 = rasterize(make_sector(pi / 3.0), 1.0 / 32.0);
    const auto g2 = rasterize(make_sector(2.0 * pi / 3.0), 1.0 / 32.0);
    REQUIRE(g1.m == g2.m);
    for (std::int64_t f = 0; f < g1.cell_count(); ++f) {
        if (g1.cls[std::size_t(f)] != CellClass::Exterior)
            CHECK(g2.cls[std::size_t(f)] != CellClass::Exterior);
    }
}

TEST_CASE("rasterize rejects too-coarse grids and empty domains") {
    CHECK_THROWS_AS(rasterize(make_sector(pi / 2.0), 0.2), std::invalid_argument);
    CHECK_THROWS_AS(rasterize(make_sector(pi / 2.0), -0.1), std::invalid_argument);
}

TEST_CASE("DomainSpec JSON round trip and unknown-key rejection") {
    const auto spec = make_lipschitz_graph({{-1.0, 0.5}, {0.0, 0.0}, {1.0, 0.25}}, 1.0);
    nlohmann::ordered_json j;
    to_json(j, spec);
    CHECK(j.at("kind") == "lipschitz_graph");
    const auto back = nlohmann::json(j).get<DomainSpec>();
    CHECK(back.kind == spec.kind);
    CHECK(back.slope == doctest::Approx(spec.slope));
    CHECK(back.vertices == spec.vertices);

    nlohmann::json bad = nlohmann::json(j);
    bad["extra"] = 1;
    CHECK_THROWS_AS(bad.get<DomainSpec>(), std::invalid_argument);
}

TEST_CASE("polygon containment and distance") {
    const auto square = make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    CHECK(signed_distance(square, {0.0, 0.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(signed_distance(square, {0.9, 0.0, 0.0}) == doctest::Approx(-0.1));
    CHECK(signed_distance(square, {1.5, 0.0, 0.0}) == doctest::Approx(0.5));
    const auto g = rasterize(square, 1.0 / 16.0);
    CHECK(g.interior_count() * g.h * g.h == doctest::Approx(4.0).epsilon(0.01));
}

TEST_SUITE_END();
