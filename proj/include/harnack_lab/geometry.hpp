#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace harnack {

// Fixed-size point; the third component is ignored for planar domains.
using Point = std::array<double, 3>;

struct empty_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DomainKind { Sector, Cone, LipschitzGraph, Disk, Polygon };

/// Symbolic description of a domain with the origin on its boundary
/// (except Disk/Polygon table shapes, which are used as bounded vessels).
///
/// Sector:         2D, vertex at the origin, bisector along +x2,
///                 full opening angle `aperture`.
/// Cone:           {x_n > slope * |x'|}; `aperture` holds the half-aperture
///                 pi/2 - atan(slope). Both parameterizations are kept in sync.
/// LipschitzGraph: {x2 > g(x1)} inside B_radius, g piecewise linear through
///                 `vertices` with g(0)=0, extended with the end slopes.
/// Disk:           {|x| < radius}.
/// Polygon:        simple closed polygon through `vertices` (table shapes).
struct DomainSpec {
    DomainKind kind = DomainKind::Sector;
    int dim = 2;
    double aperture = 0.0;
    double slope = 0.0;
    std::vector<std::array<double, 2>> vertices;
    double radius = 1.0;
};

DomainSpec make_sector(double opening, double radius = 1.0);
DomainSpec make_cone(int dim, double slope, double radius = 1.0);
DomainSpec make_lipschitz_graph(const std::vector<std::array<double, 2>>& vertices,
                                double radius);
DomainSpec make_disk(double radius = 1.0);
DomainSpec make_polygon(const std::vector<std::array<double, 2>>& ring);

/// Signed distance to the generating boundary: negative inside, positive
/// outside. For sectors/cones this is the (unbounded, scale-invariant)
/// lateral boundary; for graph domains the graph curve; for disks and
/// polygons the full boundary.
double signed_distance(const DomainSpec& spec, const Point& p);

/// Signed distance of the solve domain: sectors, cones and graph domains are
/// truncated by the ball B_radius (CSG max), disks/polygons are unchanged.
double truncated_signed_distance(const DomainSpec& spec, const Point& p);

/// Piecewise-linear graph evaluation (LipschitzGraph only).
double graph_height(const DomainSpec& spec, double x1);

enum class CellClass : std::uint8_t { Exterior = 0, Interior = 1, BoundaryAdjacent = 2 };

/// One arm of the stencil at an interior cell. `eta` is the fraction of the
/// grid step at which the segment to the neighbor crosses the boundary
/// (1 when the neighbor is interior). `outer` marks crossings on the
/// truncation sphere |x| = R rather than the lateral boundary.
struct CutArm {
    double eta = 1.0;
    bool cut = false;
    bool outer = false;
};

/// Rasterized domain on a uniform cell-centered grid. Centers sit at
/// xmin + (i + 1/2) h, so the physical origin lies on a lattice corner.
/// Directions are encoded 0..2*dim-1 as {-x,+x,-y,+y,-z,+z}.
struct GridDomain {
    DomainSpec spec;
    int dim = 2;
    double h = 0.0;
    std::array<int, 3> m{1, 1, 1};
    std::array<double, 3> xmin{0.0, 0.0, 0.0};
    std::array<int, 3> origin_index{0, 0, 0};
    std::vector<CellClass> cls;
    std::vector<std::int32_t> eq_of_cell;
    std::vector<std::int32_t> cell_of_eq;
    std::vector<std::array<CutArm, 6>> arms;  // parallel to cell_of_eq

    std::int64_t cell_count() const {
        return std::int64_t(m[0]) * m[1] * m[2];
    }
    std::int64_t flat(int i, int j, int k = 0) const {
        return (std::int64_t(k) * m[1] + j) * m[0] + i;
    }
    std::array<int, 3> coords(std::int64_t f) const {
        int i = int(f % m[0]);
        int j = int((f / m[0]) % m[1]);
        int k = int(f / (std::int64_t(m[0]) * m[1]));
        return {i, j, k};
    }
    Point center(std::int64_t f) const {
        auto c = coords(f);
        Point p{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) p[d] = xmin[d] + (c[d] + 0.5) * h;
        return p;
    }
    bool in_bounds(const std::array<int, 3>& c) const {
        for (int d = 0; d < dim; ++d)
            if (c[d] < 0 || c[d] >= m[d]) return false;
        return true;
    }
    /// Flat index of the neighbor in direction `dir`, or -1 off grid.
    std::int64_t neighbor(std::int64_t f, int dir) const {
        auto c = coords(f);
        int axis = dir / 2;
        c[axis] += (dir % 2 == 0) ? -1 : +1;
        if (!in_bounds(c)) return -1;
        return flat(c[0], c[1], c[2]);
    }
    bool is_interior(std::int64_t f) const {
        return f >= 0 && cls[std::size_t(f)] != CellClass::Exterior;
    }
    int interior_count() const { return int(cell_of_eq.size()); }
    const CutArm& arm(int eq, int dir) const { return arms[std::size_t(eq)][std::size_t(dir)]; }
    Point crossing_point(int eq, int dir) const {
        Point p = center(cell_of_eq[std::size_t(eq)]);
        int axis = dir / 2;
        double sgn = (dir % 2 == 0) ? -1.0 : +1.0;
        p[axis] += sgn * arms[std::size_t(eq)][std::size_t(dir)].eta * h;
        return p;
    }
};

/// Rasterize `spec` at cell width h (requires h <= radius/16). Classification
/// follows the sign of truncated_signed_distance at cell centers; centers
/// within 1e-12 of the boundary count as exterior. Intercept fractions are
/// found by bisection on the signed distance along grid segments.
GridDomain rasterize(const DomainSpec& spec, double h);

const char* to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);
void to_json(nlohmann::ordered_json& j, const DomainSpec& spec);
void from_json(const nlohmann::json& j, DomainSpec& spec);

}  // namespace harnack
