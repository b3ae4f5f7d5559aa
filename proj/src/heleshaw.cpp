#include "harnack_lab/heleshaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace harnack::heleshaw {

namespace {

std::int64_t cell_containing(const GridDomain& g, const Point& p) {
    std::array<int, 3> c{0, 0, 0};
    for (int d = 0; d < g.dim; ++d) {
        c[std::size_t(d)] = int(std::floor((p[std::size_t(d)] - g.xmin[std::size_t(d)]) / g.h));
        if (c[std::size_t(d)] < 0 || c[std::size_t(d)] >= g.m[std::size_t(d)]) return -1;
    }
    return g.flat(c[0], c[1], c[2]);
}

double corner_angle_of(const DomainSpec& table, const Point& corner) {
    if (table.kind != DomainKind::Polygon) return 0.0;
    const auto& v = table.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::hypot(v[i][0] - corner[0], v[i][1] - corner[1]) > 1e-12) continue;
        const auto& prev = v[(i + n - 1) % n];
        const auto& next = v[(i + 1) % n];
        const double ax = prev[0] - v[i][0], ay = prev[1] - v[i][1];
        const double bx = next[0] - v[i][0], by = next[1] - v[i][1];
        double ang = std::atan2(ay, ax) - std::atan2(by, bx);
        while (ang < 0.0) ang += 2.0 * std::numbers::pi;
        while (ang >= 2.0 * std::numbers::pi) ang -= 2.0 * std::numbers::pi;
        // Interior angle: probe the bisector to pick the side inside the table.
        const double mid = std::atan2(by, bx) + ang / 2.0;
        Point probe{v[i][0] + 1e-6 * std::cos(mid), v[i][1] + 1e-6 * std::sin(mid), 0.0};
        if (signed_distance(table, probe) < 0.0) return ang;
        return 2.0 * std::numbers::pi - ang;
    }
    return 0.0;
}

}  // namespace

HeleShawState heleshaw_solve(std::shared_ptr<const GridDomain> grid, const Point& source,
                             double t, const Options& opts,
                             const HeleShawState* warm_start) {
    const GridDomain& g = *grid;
    if (t < 0.0) throw std::invalid_argument("heleshaw_solve: t must be >= 0");
    const std::int64_t src = cell_containing(g, source);
    if (src < 0 || !g.is_interior(src))
        throw std::invalid_argument("heleshaw_solve: source must be strictly inside the table");

    // Cold large solves are seeded from a coarse-grid solve; PSOR on the
    // target grid still enforces the complementarity system to tolerance.
    std::vector<double> cascade_seed;
    if (!warm_start && g.interior_count() > 120000 &&
        2.0 * g.h <= g.spec.radius / 16.0) {
        auto coarse =
            std::make_shared<const GridDomain>(rasterize(g.spec, 2.0 * g.h));
        const HeleShawState cs = heleshaw_solve(coarse, source, t, opts);
        cascade_seed.resize(std::size_t(g.interior_count()), 0.0);
        for (int eq = 0; eq < g.interior_count(); ++eq) {
            const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
            cascade_seed[std::size_t(eq)] = std::max(0.0, cs.u.value(c));
        }
    }

    const int n = g.interior_count();
    const double hn = std::pow(g.h, g.dim);
    const double r0 = opts.initial_radius_cells * g.h;

    HeleShawState st;
    st.t = t;
    st.source = source;
    st.initial_wet.assign(std::size_t(n), 0);
    for (int eq = 0; eq < n; ++eq) {
        const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
        double d2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double dd = c[std::size_t(d)] - source[std::size_t(d)];
            d2 += dd * dd;
        }
        if (d2 <= r0 * r0) st.initial_wet[std::size_t(eq)] = 1;
    }

    std::vector<double> b(std::size_t(n), 0.0);
    for (int eq = 0; eq < n; ++eq)
        b[std::size_t(eq)] = (st.initial_wet[std::size_t(eq)] ? 0.0 : -1.0);
    b[std::size_t(g.eq_of_cell[std::size_t(src)])] += t / hn;

    elliptic::CoefficientField ident;
    elliptic::LinearSystem sys = elliptic::assemble(grid, ident, elliptic::RhsSpec::zero(),
                                                    elliptic::BoundaryData::zero());
    const int mmax = *std::max_element(g.m.begin(), g.m.begin() + g.dim);
    const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / mmax));
    const std::vector<double>* warm =
        warm_start ? &warm_start->u.values
                   : (cascade_seed.empty() ? nullptr : &cascade_seed);

    st.u.grid = grid;
    st.u.boundary = elliptic::BoundaryData::zero();
    st.u.values = linalg::psor_lcp(sys.A, b, omega, opts.tol, opts.max_sweeps, warm);

    st.wet.assign(std::size_t(n), 0);
    double v_wet = 0.0, v_init = 0.0;
    for (int eq = 0; eq < n; ++eq) {
        const bool wet =
            st.u.values[std::size_t(eq)] > opts.theta_wet || st.initial_wet[std::size_t(eq)];
        st.wet[std::size_t(eq)] = wet ? 1 : 0;
        if (wet) v_wet += hn;
        if (st.initial_wet[std::size_t(eq)]) v_init += hn;
    }
    st.initial_volume = v_init;
    st.wet_volume = v_wet;

    // Discrete mass balance: injected volume = wet growth + edge drainage +
    // influx stored against the dry film. Exact in the continuum; the
    // residual measures Dirac lumping and free-boundary rounding.
    std::vector<double> Au;
    sys.A.multiply(st.u.values, Au);
    double drained = 0.0, dry_influx = 0.0;
    for (int eq = 0; eq < n; ++eq) {
        drained += Au[std::size_t(eq)] * hn;
        if (!st.wet[std::size_t(eq)]) dry_influx -= Au[std::size_t(eq)] * hn;
    }
    st.volume_balance_error =
        std::abs((v_wet - v_init) + drained + dry_influx - t);
    return st;
}

HeleShawState heleshaw_solve(const DomainSpec& table, const Point& source, double t,
                             double h, const Options& opts) {
    auto grid = std::make_shared<const GridDomain>(rasterize(table, h));
    return heleshaw_solve(std::move(grid), source, t, opts);
}

WettingReport wets_corner(const DomainSpec& table, const Point& corner, const Point& source,
                          double t_max, int steps, double h, const Options& opts) {
    if (steps < 1) throw std::invalid_argument("wets_corner: steps must be >= 1");
    auto grid = std::make_shared<const GridDomain>(rasterize(table, h));
    const GridDomain& g = *grid;

    WettingReport rep;
    rep.corner = corner;
    rep.corner_angle = corner_angle_of(table, corner);
    rep.corner_neighborhood = 4.0 * h;
    rep.h = h;

    std::vector<int> near_corner;
    for (int eq = 0; eq < g.interior_count(); ++eq) {
        const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
        double d2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double dd = c[std::size_t(d)] - corner[std::size_t(d)];
            d2 += dd * dd;
        }
        if (d2 <= rep.corner_neighborhood * rep.corner_neighborhood) near_corner.push_back(eq);
    }

    for (int i = 0; i < steps; ++i)
        rep.schedule.push_back(t_max * std::pow(2.0, -(steps - 1 - i)));

    HeleShawState state;
    bool have_state = false;
    for (const double t : rep.schedule) {
        state = heleshaw_solve(grid, source, t, opts, have_state ? &state : nullptr);
        have_state = true;
        rep.initial_volume = state.initial_volume;
        rep.volume_balance_error = state.volume_balance_error;
        bool wet_here = false;
        for (int eq : near_corner)
            if (state.wet[std::size_t(eq)]) wet_here = true;
        if (wet_here) {
            rep.wet = true;
            rep.first_t = t;
            break;
        }
    }
    return rep;
}

void to_json(nlohmann::ordered_json& j, const WettingReport& r) {
    j = nlohmann::ordered_json{
        {"corner", {r.corner[0], r.corner[1]}},
        {"corner_angle", r.corner_angle},
        {"corner_neighborhood", r.corner_neighborhood},
        {"h", r.h},
        {"t_schedule", r.schedule},
        {"wet", r.wet},
        {"first_wet_t", r.first_t ? nlohmann::ordered_json(*r.first_t)
                                  : nlohmann::ordered_json(nullptr)},
        {"initial_volume", r.initial_volume},
        {"volume_balance_error", r.volume_balance_error}};
}

}  // namespace harnack::heleshaw
