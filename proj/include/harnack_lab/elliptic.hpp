#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "harnack_lab/geometry.hpp"
#include "harnack_lab/linalg.hpp"

namespace harnack::elliptic {

using linalg::numerical_failure;

enum class CoefficientKind { Identity, Checkerboard, Table };

/// Coefficients of (a u_i)_i + b^i u_i + c u with scalar a per cell,
/// constant drift b (sum |b_i| <= Lambda - 1) and constant c <= 0.
struct CoefficientField {
    CoefficientKind kind = CoefficientKind::Identity;
    double lambda = 1.0;
    double checker_lo = 0.5;
    double checker_hi = 2.0;
    int checker_period = 1;  // block size in cells
    std::function<double(const Point&)> a_table;
    std::array<double, 3> b{0.0, 0.0, 0.0};
    double c = 0.0;

    double a_at(const GridDomain& g, std::int64_t cell) const;
    void validate(int dim) const;
};

enum class RhsKind { Zero, Constant, RadialPower, DistancePower };
enum class RhsSign { Nonpositive, Nonnegative, Signed };

/// Right-hand side F of L u = F. RadialPower evaluates amplitude * |x|^gamma,
/// DistancePower amplitude * dist(x, lateral boundary)^gamma; for gamma < 0
/// the distance argument is clipped below at h/2.
struct RhsSpec {
    RhsKind kind = RhsKind::Zero;
    double gamma = 0.0;
    double amplitude = 0.0;
    RhsSign sign = RhsSign::Signed;

    static RhsSpec zero() { return {}; }
    static RhsSpec constant(double amplitude);
    static RhsSpec radial_power(double gamma, double amplitude);
    static RhsSpec distance_power(double gamma, double amplitude);

    double eval(const GridDomain& g, const Point& x) const;
    void validate(int dim) const;
};

/// Dirichlet data evaluated at boundary crossing points; `outer` is true on
/// the truncation sphere |x| = R of cone/sector/graph domains.
struct BoundaryData {
    std::function<double(const Point&, bool outer)> fn = [](const Point&, bool) {
        return 0.0;
    };
    static BoundaryData zero() { return {}; }
    static BoundaryData lateral_outer(double lateral, double outer);
    static BoundaryData of_function(std::function<double(const Point&)> f);
    double operator()(const Point& p, bool outer) const { return fn(p, outer); }
};

/// Solution values on the interior cells of a grid; cells outside the domain
/// carry the extended value 0.
struct ScalarField {
    std::shared_ptr<const GridDomain> grid;
    std::vector<double> values;  // one per interior equation
    BoundaryData boundary;

    double at_cell(std::int64_t flat) const {
        if (flat < 0) return 0.0;
        const auto eq = grid->eq_of_cell[std::size_t(flat)];
        return eq < 0 ? 0.0 : values[std::size_t(eq)];
    }
    /// Multilinear interpolation with zero extension outside the domain.
    double value(const Point& x) const;
    /// Arm-aware centered gradient at an interior cell.
    std::array<double, 3> gradient_at(int eq) const;
    /// Distance of a cell center to the lateral boundary.
    double lateral_distance(std::int64_t flat) const {
        return -signed_distance(grid->spec, grid->center(flat));
    }
};

struct LinearSystem {
    std::shared_ptr<const GridDomain> grid;
    linalg::CsrMatrix A;  // A = -L, an M-matrix
    std::vector<double> rhs;
    bool symmetric = false;
    BoundaryData boundary;
};

/// Shortley-Weller cut-cell discretization of -L u = -F with Dirichlet data
/// from `bc` at the boundary crossings. Second order at interior cells,
/// first order at cut cells.
LinearSystem assemble(std::shared_ptr<const GridDomain> grid, const CoefficientField& coeffs,
                      const RhsSpec& rhs, const BoundaryData& bc);

/// Iterative solution of an assembled system: conjugate gradients when the
/// matrix is symmetric, BiCGStab otherwise, both Jacobi-preconditioned and
/// deterministic. Throws numerical_failure with the final residual attached.
ScalarField solve(const LinearSystem& system, double tol = 1e-10, int max_iter = 100000,
                  linalg::SolveStats* stats = nullptr);

struct PairFields {
    ScalarField u;  // L u = 0, u = 0 lateral, u = 1 outer
    ScalarField v;  // L v = -|x|^gamma (cones/sectors) or -d^gamma (graphs)
};

/// The two fields compared by the ratio experiments.
PairFields solve_pair(const DomainSpec& spec, double gamma, double h, double tol = 1e-10,
                      const CoefficientField* coeffs = nullptr, int max_iter = 100000);

/// Projected-SOR solution of the complementarity problem
///   u >= 0,  (-Delta u - forcing) >= 0 where u = 0,  = 0 where u > 0,
/// with zero Dirichlet data. `forcing` has one entry per interior equation.
ScalarField solve_obstacle(std::shared_ptr<const GridDomain> grid,
                           const std::vector<double>& forcing, double tol = 1e-10,
                           int max_sweeps = 200000,
                           const std::vector<double>* warm_start = nullptr);

}  // namespace harnack::elliptic
