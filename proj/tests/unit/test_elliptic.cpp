#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harnack_lab/elliptic.hpp"

using namespace harnack;
using namespace harnack::elliptic;
using std::numbers::pi;

TEST_SUITE_BEGIN("elliptic");

namespace {

std::shared_ptr<const GridDomain> grid_of(const DomainSpec& spec, double h) {
    return std::make_shared<const GridDomain>(rasterize(spec, h));
}

/// Harmonic function on the sector vanishing on both edges.
double sector_mode(const DomainSpec& sector, const Point& p) {
    const double phi0 = pi / 2.0 - sector.aperture / 2.0;
    const std::complex<double> z{p[0], p[1]};
    const std::complex<double> rot = std::polar(1.0, -phi0);
    return std::imag(std::pow(z * rot, pi / sector.aperture));
}

}  // namespace

TEST_CASE("shortley-weller reproduces linear data exactly") {
    const auto grid = grid_of(make_cone(2, 0.0), 1.0 / 16.0);
    CoefficientField ident;
    const auto bc = BoundaryData::of_function([](const Point& p) { return p[0]; });
    const auto sys = assemble(grid, ident, RhsSpec::zero(), bc);
    const auto u = solve(sys, 1e-14, 50000);
    double err = 0.0;
    for (int eq = 0; eq < grid->interior_count(); ++eq) {
        const Point c = grid->center(grid->cell_of_eq[std::size_t(eq)]);
        err = std::max(err, std::abs(u.values[std::size_t(eq)] - c[0]));
    }
    CHECK(err <= 1e-12);
}

TEST_CASE("disk Poisson recovers the quadratic bubble at the center") {
    const double h = 1.0 / 64.0;
    const auto grid = grid_of(make_disk(1.0), h);
    CoefficientField ident;
    const auto sys = assemble(grid, ident, RhsSpec::constant(-1.0), BoundaryData::zero());
    const auto u = solve(sys, 1e-11);
    CHECK(u.value({0.0, 0.0, 0.0}) == doctest::Approx(0.25).epsilon(8.0 * h * h));
    // Zero extension outside the domain.
    CHECK(u.value({2.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("sector harmonic mode: convergence of order at least one") {
    const auto sector = make_sector(3.0 * pi / 4.0);
    std::vector<double> errs;
    for (const double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}) {
        const auto grid = grid_of(sector, h);
        CoefficientField ident;
        const auto bc = BoundaryData::of_function(
            [&](const Point& p) { return sector_mode(sector, p); });
        const auto u = solve(assemble(grid, ident, RhsSpec::zero(), bc), 1e-11);
        double err = 0.0;
        for (int eq = 0; eq < grid->interior_count(); ++eq) {
            const Point c = grid->center(grid->cell_of_eq[std::size_t(eq)]);
            err = std::max(err,
                           std::abs(u.values[std::size_t(eq)] - sector_mode(sector, c)));
        }
        errs.push_back(err);
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.0);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.0);
}

TEST_CASE("radial forcing on the sector self-converges at order one or better") {
    const auto sector = make_sector(3.0 * pi / 4.0);
    CoefficientField ident;
    const auto bc = BoundaryData::lateral_outer(0.0, 0.0);
    std::vector<ScalarField> sols;
    for (const double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}) {
        const auto grid = grid_of(sector, h);
        sols.push_back(
            solve(assemble(grid, ident, RhsSpec::radial_power(0.0, -1.0), bc), 1e-11));
    }
    // Coarse-against-fine differences at coarse cell centers.
    auto diff = [](const ScalarField& coarse, const ScalarField& fine) {
        double err = 0.0;
        const GridDomain& g = *coarse.grid;
        for (int eq = 0; eq < g.interior_count(); ++eq) {
            const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
            if (-truncated_signed_distance(g.spec, c) < 2.0 * g.h) continue;
            err = std::max(err, std::abs(coarse.values[std::size_t(eq)] - fine.value(c)));
        }
        return err;
    };
    const double e1 = diff(sols[0], sols[1]);
    const double e2 = diff(sols[1], sols[2]);
    CHECK(std::log2(e1 / e2) >= 1.0);
}

TEST_CASE("discrete maximum principle under random boundary data") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const auto specs = {make_sector(3.0 * pi / 4.0), make_cone(2, 0.0), make_cone(2, 0.4),
                        make_lipschitz_graph({{-1.0, 0.2}, {0.0, 0.0}, {1.0, 0.35}}, 1.0)};
    for (const auto& spec : specs) {
        const auto grid = grid_of(spec, 1.0 / 24.0);
        for (int inst = 0; inst < 8; ++inst) {
            const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng);
            auto data = [=](const Point& p) {
                return a0 + a1 * p[0] + a2 * std::sin(3.0 * p[1]);
            };
            double lo = 1e300, hi = -1e300;
            CoefficientField cf;
            if (inst % 2) {
                cf.kind = CoefficientKind::Checkerboard;
                cf.lambda = 2.0;
            }
            const auto sys =
                assemble(grid, cf, RhsSpec::zero(), BoundaryData::of_function(data));
            for (int eq = 0; eq < grid->interior_count(); ++eq)
                for (int dir = 0; dir < 2 * grid->dim; ++dir)
                    if (grid->arm(eq, dir).cut) {
                        const double v = data(grid->crossing_point(eq, dir));
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
            const auto u = solve(sys, 1e-11);
            for (double v : u.values) {
                CHECK(v >= lo - 1e-8);
                CHECK(v <= hi + 1e-8);
            }
        }
    }
}

TEST_CASE("comparison principle: larger forcing gives smaller solution") {
    const auto grid = grid_of(make_sector(2.0 * pi / 3.0), 1.0 / 32.0);
    CoefficientField ident;
    const auto bc = BoundaryData::lateral_outer(0.0, 1.0);
    const auto u1 = solve(assemble(grid, ident, RhsSpec::constant(-1.0), bc), 1e-11);
    const auto u2 = solve(assemble(grid, ident, RhsSpec::constant(-0.25), bc), 1e-11);
    for (std::size_t i = 0; i < u1.values.size(); ++i)
        CHECK(u1.values[i] >= u2.values[i] - 1e-9);
}

TEST_CASE("zero-order term with c <= 0 pulls the solution down but not below zero") {
    const auto grid = grid_of(make_sector(2.0 * pi / 3.0), 1.0 / 32.0);
    CoefficientField ident;
    CoefficientField with_c = ident;
    with_c.c = -0.5;
    with_c.lambda = 1.5;
    const auto bc = BoundaryData::lateral_outer(0.0, 1.0);
    const auto u0 = solve(assemble(grid, ident, RhsSpec::zero(), bc), 1e-11);
    const auto uc = solve(assemble(grid, with_c, RhsSpec::zero(), bc), 1e-11);
    for (std::size_t i = 0; i < u0.values.size(); ++i) {
        CHECK(uc.values[i] <= u0.values[i] + 1e-9);
        CHECK(uc.values[i] >= -1e-9);
    }
}

TEST_CASE("drift terms assemble to a solvable nonsymmetric system") {
    const auto grid = grid_of(make_sector(2.0 * pi / 3.0), 1.0 / 24.0);
    CoefficientField cf;
    cf.b = {0.3, -0.2, 0.0};
    cf.lambda = 1.5;
    const auto sys =
        assemble(grid, cf, RhsSpec::zero(), BoundaryData::lateral_outer(0.0, 1.0));
    CHECK_FALSE(sys.symmetric);
    const auto u = solve(sys, 1e-10);
    for (double v : u.values) {
        CHECK(v >= -1e-8);
        CHECK(v <= 1.0 + 1e-8);
    }
}

TEST_CASE("coefficient validation enforces the structural bounds") {
    const auto grid = grid_of(make_sector(pi / 2.0), 1.0 / 16.0);
    CoefficientField bad_c;
    bad_c.c = 0.5;
    CHECK_THROWS_AS(assemble(grid, bad_c, RhsSpec::zero(), BoundaryData::zero()),
                    std::invalid_argument);
    CoefficientField big_b;
    big_b.b = {5.0, 0.0, 0.0};
    big_b.lambda = 1.5;
    CHECK_THROWS_AS(assemble(grid, big_b, RhsSpec::zero(), BoundaryData::zero()),
                    std::invalid_argument);
}

TEST_CASE("rhs validation enforces the integrability threshold") {
    const auto grid =
        grid_of(make_lipschitz_graph({{-1.0, 0.3}, {0.0, 0.0}, {1.0, 0.3}}, 1.0), 1.0 / 16.0);
    CoefficientField ident;
    CHECK_THROWS_AS(
        assemble(grid, ident, RhsSpec::distance_power(-1.5, -1.0), BoundaryData::zero()),
        std::invalid_argument);
    const auto sys =
        assemble(grid, ident, RhsSpec::distance_power(-0.5, -1.0), BoundaryData::zero());
    const auto u = solve(sys, 1e-10);
    for (double v : u.values) CHECK(v >= -1e-9);
}

TEST_CASE("solve_pair produces the comparison pair on the half-plane") {
    const auto pair = solve_pair(make_cone(2, 0.0), 0.0, 1.0 / 32.0, 1e-11);
    const GridDomain& g = *pair.u.grid;
    for (double v : pair.u.values) {
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
    }
    for (double v : pair.v.values) CHECK(v >= -1e-9);
    // v/u stays bounded away from the resolution floor: margin 2 - 1 + 0 > 0.
    double worst = 0.0;
    for (int eq = 0; eq < g.interior_count(); ++eq) {
        const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
        if (-signed_distance(g.spec, c) < 2.0 * g.h) continue;
        worst = std::max(worst,
                         pair.v.values[std::size_t(eq)] / pair.u.values[std::size_t(eq)]);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("solve_pair outer-data scaling is exact linearity") {
    const auto spec = make_sector(3.0 * pi / 4.0);
    const auto grid = grid_of(spec, 1.0 / 32.0);
    CoefficientField ident;
    const auto u1 = solve(
        assemble(grid, ident, RhsSpec::zero(), BoundaryData::lateral_outer(0.0, 1.0)), 1e-12);
    const auto u4 = solve(
        assemble(grid, ident, RhsSpec::zero(), BoundaryData::lateral_outer(0.0, 4.0)), 1e-12);
    for (std::size_t i = 0; i < u1.values.size(); ++i)
        CHECK(u4.values[i] == doctest::Approx(4.0 * u1.values[i]).epsilon(1e-11));
}

TEST_CASE("solve_obstacle: zero forcing stays zero, source region is positive") {
    const auto grid = grid_of(make_disk(1.0), 1.0 / 32.0);
    const std::vector<double> zero(std::size_t(grid->interior_count()), 0.0);
    const auto u0 = solve_obstacle(grid, zero);
    for (double v : u0.values) CHECK(v == 0.0);

    std::vector<double> b(std::size_t(grid->interior_count()), -1.0);
    for (int eq = 0; eq < grid->interior_count(); ++eq) {
        const Point c = grid->center(grid->cell_of_eq[std::size_t(eq)]);
        if (std::hypot(c[0], c[1]) <= 0.1) b[std::size_t(eq)] = 25.0;
    }
    const auto u = solve_obstacle(grid, b, 1e-11);
    CHECK(u.value({0.0, 0.0, 0.0}) > 0.0);
    for (int eq = 0; eq < grid->interior_count(); ++eq) {
        const Point c = grid->center(grid->cell_of_eq[std::size_t(eq)]);
        if (std::hypot(c[0], c[1]) > 0.9) CHECK(u.values[std::size_t(eq)] <= 1e-11);
    }
}

TEST_CASE("degenerate domains are rejected") {
    CHECK_THROWS_AS(grid_of(make_sector(0.01, 0.5), 1.0 / 64.0), empty_domain_error);
}

TEST_SUITE_END();
