#include "harnack_lab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace harnack::elliptic {

double CoefficientField::a_at(const GridDomain& g, std::int64_t cell) const {
    switch (kind) {
        case CoefficientKind::Identity:
            return 1.0;
        case CoefficientKind::Checkerboard: {
            const auto c = g.coords(cell);
            int parity = 0;
            for (int d = 0; d < g.dim; ++d) parity += c[d] / std::max(1, checker_period);
            return (parity % 2 == 0) ? checker_lo : checker_hi;
        }
        case CoefficientKind::Table:
            return a_table(g.center(cell));
    }
    return 1.0;
}

void CoefficientField::validate(int dim) const {
    if (!(lambda >= 1.0))
        throw std::invalid_argument("CoefficientField: Lambda must be >= 1");
    if (c > 0.0) throw std::invalid_argument("CoefficientField: c must be <= 0");
    if (std::abs(c) > lambda - 1.0 + 1e-12)
        throw std::invalid_argument("CoefficientField: |c| must be <= Lambda - 1");
    double bsum = 0.0;
    for (int d = 0; d < dim; ++d) bsum += std::abs(b[std::size_t(d)]);
    if (bsum > lambda - 1.0 + 1e-12)
        throw std::invalid_argument("CoefficientField: sum |b_i| must be <= Lambda - 1");
    if (kind == CoefficientKind::Checkerboard) {
        for (double v : {checker_lo, checker_hi})
            if (v < 1.0 / lambda - 1e-12 || v > lambda + 1e-12)
                throw std::invalid_argument(
                    "CoefficientField: checkerboard values violate ellipticity");
    }
    if (kind == CoefficientKind::Table && !a_table)
        throw std::invalid_argument("CoefficientField: missing table callable");
}

RhsSpec RhsSpec::constant(double amplitude) {
    RhsSpec r;
    r.kind = RhsKind::Constant;
    r.amplitude = amplitude;
    r.sign = amplitude <= 0.0 ? RhsSign::Nonpositive
                              : (amplitude >= 0.0 ? RhsSign::Nonnegative : RhsSign::Signed);
    return r;
}

RhsSpec RhsSpec::radial_power(double gamma, double amplitude) {
    RhsSpec r;
    r.kind = RhsKind::RadialPower;
    r.gamma = gamma;
    r.amplitude = amplitude;
    r.sign = amplitude <= 0.0 ? RhsSign::Nonpositive : RhsSign::Nonnegative;
    return r;
}

RhsSpec RhsSpec::distance_power(double gamma, double amplitude) {
    RhsSpec r;
    r.kind = RhsKind::DistancePower;
    r.gamma = gamma;
    r.amplitude = amplitude;
    r.sign = amplitude <= 0.0 ? RhsSign::Nonpositive : RhsSign::Nonnegative;
    return r;
}

void RhsSpec::validate(int dim) const {
    if (kind == RhsKind::DistancePower && !(gamma > -2.0 / dim))
        throw std::invalid_argument("RhsSpec: distance_power requires gamma > -2/n");
}

double RhsSpec::eval(const GridDomain& g, const Point& x) const {
    switch (kind) {
        case RhsKind::Zero:
            return 0.0;
        case RhsKind::Constant:
            return amplitude;
        case RhsKind::RadialPower: {
            double r = 0.0;
            for (int d = 0; d < g.dim; ++d) r += x[std::size_t(d)] * x[std::size_t(d)];
            r = std::sqrt(r);
            if (gamma < 0.0) r = std::max(r, g.h / 2.0);
            return amplitude * std::pow(r, gamma);
        }
        case RhsKind::DistancePower: {
            double d = -signed_distance(g.spec, x);
            if (gamma < 0.0) d = std::max(d, g.h / 2.0);
            d = std::max(d, 0.0);
            return amplitude * std::pow(d, gamma);
        }
    }
    return 0.0;
}

BoundaryData BoundaryData::lateral_outer(double lateral, double outer) {
    BoundaryData b;
    b.fn = [lateral, outer](const Point&, bool is_outer) {
        return is_outer ? outer : lateral;
    };
    return b;
}

BoundaryData BoundaryData::of_function(std::function<double(const Point&)> f) {
    BoundaryData b;
    b.fn = [f = std::move(f)](const Point& p, bool) { return f(p); };
    return b;
}

double ScalarField::value(const Point& x) const {
    const GridDomain& g = *grid;
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) {
        const double s = (x[std::size_t(d)] - g.xmin[std::size_t(d)]) / g.h - 0.5;
        base[std::size_t(d)] = int(std::floor(s));
        w[std::size_t(d)] = s - base[std::size_t(d)];
    }
    double acc = 0.0;
    const int corners = 1 << g.dim;
    for (int cnr = 0; cnr < corners; ++cnr) {
        std::array<int, 3> c = base;
        double wt = 1.0;
        for (int d = 0; d < g.dim; ++d) {
            const int bit = (cnr >> d) & 1;
            c[std::size_t(d)] += bit;
            wt *= bit ? w[std::size_t(d)] : 1.0 - w[std::size_t(d)];
        }
        if (wt == 0.0 || !g.in_bounds(c)) continue;
        acc += wt * at_cell(g.flat(c[0], c[1], c[2]));
    }
    return acc;
}

std::array<double, 3> ScalarField::gradient_at(int eq) const {
    const GridDomain& g = *grid;
    const std::int64_t f = g.cell_of_eq[std::size_t(eq)];
    std::array<double, 3> grad{0.0, 0.0, 0.0};
    for (int axis = 0; axis < g.dim; ++axis) {
        const int dminus = 2 * axis, dplus = 2 * axis + 1;
        const CutArm& am = g.arm(eq, dminus);
        const CutArm& ap = g.arm(eq, dplus);
        const double vminus = am.cut ? boundary(g.crossing_point(eq, dminus), am.outer)
                                     : at_cell(g.neighbor(f, dminus));
        const double vplus = ap.cut ? boundary(g.crossing_point(eq, dplus), ap.outer)
                                    : at_cell(g.neighbor(f, dplus));
        grad[std::size_t(axis)] = (vplus - vminus) / ((ap.eta + am.eta) * g.h);
    }
    return grad;
}

LinearSystem assemble(std::shared_ptr<const GridDomain> grid, const CoefficientField& coeffs,
                      const RhsSpec& rhs, const BoundaryData& bc) {
    const GridDomain& g = *grid;
    coeffs.validate(g.dim);
    rhs.validate(g.dim);
    const int n = g.interior_count();
    if (n == 0) throw empty_domain_error("assemble: empty grid");

    std::vector<std::tuple<int, int, double>> trip;
    trip.reserve(std::size_t(n) * std::size_t(2 * g.dim + 1));
    std::vector<double> b(std::size_t(n), 0.0);
    const double h = g.h;
    const double h2 = h * h;

    for (int eq = 0; eq < n; ++eq) {
        const std::int64_t f = g.cell_of_eq[std::size_t(eq)];
        const Point xc = g.center(f);
        const double ac = coeffs.a_at(g, f);
        double diag = -coeffs.c;
        b[std::size_t(eq)] = -rhs.eval(g, xc);

        for (int axis = 0; axis < g.dim; ++axis) {
            const int dminus = 2 * axis, dplus = 2 * axis + 1;
            const CutArm& am = g.arm(eq, dminus);
            const CutArm& ap = g.arm(eq, dplus);
            const double S = am.eta + ap.eta;
            const double bdrift = coeffs.b[std::size_t(axis)];

            // One side of the Shortley-Weller second difference plus the
            // centered first-order term; `sgn` is +1 on the plus arm.
            auto add_side = [&](const CutArm& arm, int dir, double sgn) {
                const std::int64_t nb = g.neighbor(f, dir);
                double aface = ac;
                if (!arm.cut) {
                    const double anb = coeffs.a_at(g, nb);
                    aface = 2.0 * ac * anb / (ac + anb);
                }
                const double wdiff = 2.0 * aface / (S * arm.eta * h2);
                const double wdrift = sgn * bdrift / (S * h);
                diag += wdiff;
                if (arm.cut) {
                    const double gval = bc(g.crossing_point(eq, dir), arm.outer);
                    b[std::size_t(eq)] += (wdiff + wdrift) * gval;
                } else {
                    trip.emplace_back(eq, int(g.eq_of_cell[std::size_t(nb)]),
                                      -(wdiff + wdrift));
                }
            };
            add_side(am, dminus, -1.0);
            add_side(ap, dplus, +1.0);
        }
        trip.emplace_back(eq, eq, diag);
    }

    LinearSystem sys;
    sys.grid = std::move(grid);
    sys.A = linalg::CsrMatrix::from_triplets(n, std::move(trip));
    sys.rhs = std::move(b);
    sys.symmetric = sys.A.is_symmetric();
    sys.boundary = bc;
    return sys;
}

ScalarField solve(const LinearSystem& system, double tol, int max_iter,
                  linalg::SolveStats* stats) {
    ScalarField f;
    f.grid = system.grid;
    f.boundary = system.boundary;
    if (system.symmetric)
        f.values = linalg::solve_cg(system.A, system.rhs, tol, max_iter, stats);
    else
        f.values = linalg::solve_bicgstab(system.A, system.rhs, tol, max_iter, stats);
    return f;
}

PairFields solve_pair(const DomainSpec& spec, double gamma, double h, double tol,
                      const CoefficientField* coeffs, int max_iter) {
    auto grid = std::make_shared<const GridDomain>(rasterize(spec, h));
    CoefficientField ident;
    const CoefficientField& cf = coeffs ? *coeffs : ident;
    const BoundaryData bc = BoundaryData::lateral_outer(0.0, 1.0);

    const RhsSpec v_rhs = (spec.kind == DomainKind::LipschitzGraph)
                              ? RhsSpec::distance_power(gamma, -1.0)
                              : RhsSpec::radial_power(gamma, -1.0);

    PairFields out;
    out.u = solve(assemble(grid, cf, RhsSpec::zero(), bc), tol, max_iter);
    out.v = solve(assemble(grid, cf, v_rhs, bc), tol, max_iter);
    return out;
}

ScalarField solve_obstacle(std::shared_ptr<const GridDomain> grid,
                           const std::vector<double>& forcing, double tol, int max_sweeps,
                           const std::vector<double>* warm_start) {
    const GridDomain& g = *grid;
    if (forcing.size() != std::size_t(g.interior_count()))
        throw std::invalid_argument("solve_obstacle: forcing size mismatch");
    CoefficientField ident;
    LinearSystem sys = assemble(grid, ident, RhsSpec::zero(), BoundaryData::zero());
    // SOR relaxation factor tuned for the 5/7-point Laplacian.
    const int mmax = *std::max_element(g.m.begin(), g.m.begin() + g.dim);
    const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / mmax));
    linalg::LcpStats st;
    ScalarField f;
    f.grid = std::move(grid);
    f.boundary = BoundaryData::zero();
    f.values = linalg::psor_lcp(sys.A, forcing, omega, tol, max_sweeps, warm_start, &st);
    return f;
}

}  // namespace harnack::elliptic
