#include "harnack_lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace harnack {

namespace {

constexpr double kBoundarySnap = 1e-12;  // centers this close to the boundary are exterior

double norm2(const Point& p, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += p[d] * p[d];
    return std::sqrt(s);
}

// Signed distance in the meridian half-plane (rho >= 0) to the boundary ray
// {z = L*rho} of the cone {z > L*rho}. Exact for all L, including reentrant
// cones (L < 0): points projecting behind the vertex see the vertex.
double cone_meridian_sd(double rho, double z, double L) {
    const double s = std::hypot(1.0, L);
    const double dx = 1.0 / s, dz = L / s;
    const double t = rho * dx + z * dz;
    double dist;
    if (t <= 0.0)
        dist = std::hypot(rho, z);
    else
        dist = std::abs(rho * dz - z * dx);
    return (z > L * rho) ? -dist : dist;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx,
                              double by) {
    const double vx = bx - ax, vy = by - ay;
    const double wx = px - ax, wy = py - ay;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = wx - t * vx, ey = wy - t * vy;
    return std::hypot(ex, ey);
}

// Graph polyline with linear end extensions, as an extended vertex list.
std::vector<std::array<double, 2>> extended_graph(const DomainSpec& spec) {
    const auto& v = spec.vertices;
    const double big = 1e6 * (spec.radius + 1.0);
    const auto a0 = v.front();
    const auto a1 = v[1];
    const auto b1 = v[v.size() - 2];
    const auto b0 = v.back();
    const double sl = (a1[1] - a0[1]) / (a1[0] - a0[0]);
    const double sr = (b0[1] - b1[1]) / (b0[0] - b1[0]);
    std::vector<std::array<double, 2>> out;
    out.reserve(v.size() + 2);
    out.push_back({a0[0] - big, a0[1] - big * sl});
    out.insert(out.end(), v.begin(), v.end());
    out.push_back({b0[0] + big, b0[1] + big * sr});
    return out;
}

double polyline_distance(const std::vector<std::array<double, 2>>& v, double px,
                         double py, bool closed) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = v.size();
    const std::size_t last = closed ? n : n - 1;
    for (std::size_t i = 0; i < last; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        best = std::min(best, point_segment_distance(px, py, a[0], a[1], b[0], b[1]));
    }
    return best;
}

bool polygon_contains(const std::vector<std::array<double, 2>>& v, double px, double py) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const bool above_i = v[i][1] > py;
        const bool above_j = v[j][1] > py;
        if (above_i != above_j) {
            const double xi =
                v[i][0] + (py - v[i][1]) * (v[j][0] - v[i][0]) / (v[j][1] - v[i][1]);
            if (px < xi) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

DomainSpec make_sector(double opening, double radius) {
    if (!(opening > 0.0) || !(opening < 2.0 * std::numbers::pi))
        throw std::invalid_argument("make_sector: opening must lie in (0, 2*pi)");
    if (!(radius > 0.0)) throw std::invalid_argument("make_sector: radius must be positive");
    DomainSpec s;
    s.kind = DomainKind::Sector;
    s.dim = 2;
    s.aperture = opening;
    s.radius = radius;
    return s;
}

DomainSpec make_cone(int dim, double slope, double radius) {
    if (dim < 2) throw std::invalid_argument("make_cone: dim must be >= 2");
    if (!std::isfinite(slope)) throw std::invalid_argument("make_cone: slope must be finite");
    if (!(radius > 0.0)) throw std::invalid_argument("make_cone: radius must be positive");
    DomainSpec s;
    s.kind = DomainKind::Cone;
    s.dim = dim;
    s.slope = slope;
    s.aperture = std::numbers::pi / 2.0 - std::atan(slope);
    s.radius = radius;
    return s;
}

DomainSpec make_lipschitz_graph(const std::vector<std::array<double, 2>>& vertices,
                                double radius) {
    if (vertices.size() < 2)
        throw std::invalid_argument("make_lipschitz_graph: need at least two vertices");
    if (!(radius > 0.0))
        throw std::invalid_argument("make_lipschitz_graph: radius must be positive");
    auto v = vertices;
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    bool has_origin = false;
    double L = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double dx = v[i + 1][0] - v[i][0];
        if (!(dx > 0.0))
            throw std::invalid_argument("make_lipschitz_graph: abscissae must be distinct");
        L = std::max(L, std::abs((v[i + 1][1] - v[i][1]) / dx));
    }
    for (const auto& p : v)
        if (p[0] == 0.0 && p[1] == 0.0) has_origin = true;
    if (!has_origin)
        throw std::invalid_argument("make_lipschitz_graph: vertices must include (0, 0)");
    DomainSpec s;
    s.kind = DomainKind::LipschitzGraph;
    s.dim = 2;
    s.slope = L;
    s.vertices = std::move(v);
    s.radius = radius;
    return s;
}

DomainSpec make_disk(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("make_disk: radius must be positive");
    DomainSpec s;
    s.kind = DomainKind::Disk;
    s.dim = 2;
    s.radius = radius;
    return s;
}

DomainSpec make_polygon(const std::vector<std::array<double, 2>>& ring) {
    if (ring.size() < 3) throw std::invalid_argument("make_polygon: need at least 3 vertices");
    DomainSpec s;
    s.kind = DomainKind::Polygon;
    s.dim = 2;
    s.vertices = ring;
    double r = 0.0;
    for (const auto& p : ring) r = std::max(r, std::hypot(p[0], p[1]));
    s.radius = r;
    return s;
}

double graph_height(const DomainSpec& spec, double x1) {
    const auto& v = spec.vertices;
    if (x1 <= v.front()[0]) {
        const double sl = (v[1][1] - v[0][1]) / (v[1][0] - v[0][0]);
        return v[0][1] + sl * (x1 - v[0][0]);
    }
    if (x1 >= v.back()[0]) {
        const auto& a = v[v.size() - 2];
        const auto& b = v.back();
        const double sr = (b[1] - a[1]) / (b[0] - a[0]);
        return b[1] + sr * (x1 - b[0]);
    }
    auto it = std::upper_bound(v.begin(), v.end(), x1,
                               [](double x, const auto& p) { return x < p[0]; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double t = (x1 - a[0]) / (b[0] - a[0]);
    return a[1] + t * (b[1] - a[1]);
}

double signed_distance(const DomainSpec& spec, const Point& p) {
    switch (spec.kind) {
        case DomainKind::Sector: {
            const double half = spec.aperture / 2.0;
            const double L = std::cos(half) / std::sin(half);
            return cone_meridian_sd(std::abs(p[0]), p[1], L);
        }
        case DomainKind::Cone: {
            double rho;
            if (spec.dim == 2)
                rho = std::abs(p[0]);
            else
                rho = std::hypot(p[0], p[1]);
            const double z = p[spec.dim - 1];
            return cone_meridian_sd(rho, z, spec.slope);
        }
        case DomainKind::LipschitzGraph: {
            const auto ext = extended_graph(spec);
            const double dist = polyline_distance(ext, p[0], p[1], false);
            const bool inside = p[1] > graph_height(spec, p[0]);
            return inside ? -dist : dist;
        }
        case DomainKind::Disk:
            return std::hypot(p[0], p[1]) - spec.radius;
        case DomainKind::Polygon: {
            const double dist = polyline_distance(spec.vertices, p[0], p[1], true);
            return polygon_contains(spec.vertices, p[0], p[1]) ? -dist : dist;
        }
    }
    return 0.0;
}

double truncated_signed_distance(const DomainSpec& spec, const Point& p) {
    const double lat = signed_distance(spec, p);
    switch (spec.kind) {
        case DomainKind::Sector:
        case DomainKind::Cone:
        case DomainKind::LipschitzGraph:
            return std::max(lat, norm2(p, spec.dim) - spec.radius);
        default:
            return lat;
    }
}

GridDomain rasterize(const DomainSpec& spec, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rasterize: h must be positive");
    if (h > spec.radius / 16.0 + 1e-15)
        throw std::invalid_argument("rasterize: h must be at most radius/16");

    GridDomain g;
    g.spec = spec;
    g.dim = spec.dim;
    g.h = h;

    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    if (spec.kind == DomainKind::Polygon) {
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (const auto& p : spec.vertices) {
            for (int d = 0; d < 2; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        }
        for (int d = 0; d < 2; ++d) {
            lo[d] -= h;
            hi[d] += h;
        }
    } else {
        for (int d = 0; d < spec.dim; ++d) {
            lo[d] = -spec.radius;
            hi[d] = spec.radius;
        }
    }
    // Anchor the lattice at integer multiples of h so that the physical
    // origin is a cell corner and centers sit at half-integer coordinates.
    for (int d = 0; d < spec.dim; ++d) {
        const int klo = int(std::floor(lo[d] / h)) - 1;
        const int khi = int(std::ceil(hi[d] / h)) + 1;
        g.xmin[d] = klo * h;
        g.m[d] = khi - klo;
        g.origin_index[d] = -klo;
    }

    const std::int64_t n = g.cell_count();
    g.cls.assign(std::size_t(n), CellClass::Exterior);
    g.eq_of_cell.assign(std::size_t(n), -1);

    for (std::int64_t f = 0; f < n; ++f) {
        const Point c = g.center(f);
        if (truncated_signed_distance(spec, c) < -kBoundarySnap) {
            g.cls[std::size_t(f)] = CellClass::Interior;
            g.eq_of_cell[std::size_t(f)] = std::int32_t(g.cell_of_eq.size());
            g.cell_of_eq.push_back(std::int32_t(f));
        }
    }
    if (g.cell_of_eq.empty()) throw empty_domain_error("rasterize: empty interior");

    const bool truncated = spec.kind == DomainKind::Sector ||
                           spec.kind == DomainKind::Cone ||
                           spec.kind == DomainKind::LipschitzGraph;

    g.arms.assign(g.cell_of_eq.size(), {});
    for (std::size_t eq = 0; eq < g.cell_of_eq.size(); ++eq) {
        const std::int64_t f = g.cell_of_eq[eq];
        const Point c = g.center(f);
        bool cut_any = false;
        for (int dir = 0; dir < 2 * g.dim; ++dir) {
            const std::int64_t nb = g.neighbor(f, dir);
            if (nb >= 0 && g.cls[std::size_t(nb)] != CellClass::Exterior) continue;

            CutArm& arm = g.arms[eq][std::size_t(dir)];
            arm.cut = true;
            cut_any = true;
            const int axis = dir / 2;
            const double sgn = (dir % 2 == 0) ? -1.0 : +1.0;
            auto sd_at = [&](double t) {
                Point q = c;
                q[axis] += sgn * t * h;
                return truncated_signed_distance(spec, q);
            };
            double t_hi = 1.0;
            if (sd_at(1.0) <= 0.0) {
                arm.eta = 1.0;  // neighbor center snapped to boundary
            } else {
                double a = 0.0, b = t_hi;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (a + b);
                    if (sd_at(mid) < 0.0)
                        a = mid;
                    else
                        b = mid;
                }
                arm.eta = std::max(0.5 * (a + b), 1e-6);
            }
            if (truncated) {
                Point x = c;
                x[axis] += sgn * arm.eta * h;
                const double lat = signed_distance(spec, x);
                arm.outer = std::abs(norm2(x, g.dim) - spec.radius) < 1e-9 && lat < -1e-9;
            }
        }
        if (cut_any) g.cls[std::size_t(f)] = CellClass::BoundaryAdjacent;
    }
    return g;
}

const char* to_string(DomainKind k) {
    switch (k) {
        case DomainKind::Sector: return "sector";
        case DomainKind::Cone: return "cone";
        case DomainKind::LipschitzGraph: return "lipschitz_graph";
        case DomainKind::Disk: return "disk";
        case DomainKind::Polygon: return "polygon";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "sector") return DomainKind::Sector;
    if (s == "cone") return DomainKind::Cone;
    if (s == "lipschitz_graph") return DomainKind::LipschitzGraph;
    if (s == "disk") return DomainKind::Disk;
    if (s == "polygon") return DomainKind::Polygon;
    throw std::invalid_argument("unknown domain kind: " + s);
}

void to_json(nlohmann::ordered_json& j, const DomainSpec& spec) {
    j = nlohmann::ordered_json{{"kind", to_string(spec.kind)},
                               {"dim", spec.dim},
                               {"aperture", spec.aperture},
                               {"slope", spec.slope},
                               {"vertices", spec.vertices},
                               {"radius", spec.radius}};
}

void from_json(const nlohmann::json& j, DomainSpec& spec) {
    static const char* known[] = {"kind", "dim", "aperture", "slope", "vertices", "radius"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("DomainSpec: unknown key '" + it.key() + "'");
    }
    const auto kind = domain_kind_from_string(j.at("kind").get<std::string>());
    const double radius = j.value("radius", 1.0);
    switch (kind) {
        case DomainKind::Sector:
            spec = make_sector(j.at("aperture").get<double>(), radius);
            break;
        case DomainKind::Cone:
            spec = make_cone(j.value("dim", 2), j.at("slope").get<double>(), radius);
            break;
        case DomainKind::LipschitzGraph:
            spec = make_lipschitz_graph(
                j.at("vertices").get<std::vector<std::array<double, 2>>>(), radius);
            break;
        case DomainKind::Disk:
            spec = make_disk(radius);
            break;
        case DomainKind::Polygon:
            spec = make_polygon(j.at("vertices").get<std::vector<std::array<double, 2>>>());
            break;
    }
}

}  // namespace harnack
