#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "harnack_lab/elliptic.hpp"
#include "harnack_lab/geometry.hpp"
#include "json.hpp"

namespace harnack::heleshaw {

struct Options {
    double theta_wet = 1e-12;           // wetting threshold on the potential
    double initial_radius_cells = 8.0;  // radius of the initial wet ball, in cells
    // Complementarity gap tolerance; mask decisions only need the potential
    // to a fraction of the h^2/2 first-wet-cell scale.
    double tol = 1e-8;
    int max_sweeps = 400000;
};

/// Baiocchi potential of the injection flow at parameter t, on a table with
/// absorbing (zero Dirichlet) edges. The wet set is {u > theta_wet} united
/// with the initial ball.
struct HeleShawState {
    double t = 0.0;
    elliptic::ScalarField u;
    std::vector<std::uint8_t> wet;          // per interior equation
    std::vector<std::uint8_t> initial_wet;  // per interior equation
    Point source{0, 0, 0};
    double initial_volume = 0.0;
    double wet_volume = 0.0;
    double volume_balance_error = 0.0;  // |wet - initial - drained - t| (continuum: 0)

    std::shared_ptr<const GridDomain> grid() const { return u.grid; }
};

/// Solve the complementarity problem
///   u >= 0,  -Delta u >= t delta_z + chi_0 - 1 where u = 0 (equality where u > 0)
/// with u = 0 on the table edge. The Dirac mass is lumped on the cell
/// containing z; the initial wet set is a ball of radius 8h around z.
HeleShawState heleshaw_solve(std::shared_ptr<const GridDomain> grid, const Point& source,
                             double t, const Options& opts = {},
                             const HeleShawState* warm_start = nullptr);
HeleShawState heleshaw_solve(const DomainSpec& table, const Point& source, double t,
                             double h, const Options& opts = {});

struct WettingReport {
    bool wet = false;
    std::optional<double> first_t;
    std::vector<double> schedule;
    Point corner{0, 0, 0};
    double corner_angle = 0.0;         // interior angle at the corner (polygons)
    double corner_neighborhood = 0.0;  // 4h
    double volume_balance_error = 0.0; // at the last solve
    double h = 0.0;
    double initial_volume = 0.0;
};

/// Sweep t over a geometric schedule (factor 2) up to t_max and report
/// whether any cell within 4h of the corner becomes wet, and the first such t.
WettingReport wets_corner(const DomainSpec& table, const Point& corner, const Point& source,
                          double t_max, int steps, double h, const Options& opts = {});

void to_json(nlohmann::ordered_json& j, const WettingReport& r);

}  // namespace harnack::heleshaw
