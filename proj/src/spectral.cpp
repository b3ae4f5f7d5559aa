#include "harnack_lab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "harnack_lab/linalg.hpp"

namespace harnack::spectral {

namespace {

constexpr int kSteps = 4096;
constexpr double kThetaStart = 1e-6;

struct ShootResult {
    double f_end = 0.0;
    int interior_zeros = 0;
    std::vector<double> theta;
    std::vector<double> f;
};

// Cross-section ODE f'' + (n-2) cot(theta) f' + lambda f = 0 with f bounded
// at the pole. Frobenius start f = 1 - lambda theta^2 / (2(n-1)) at
// theta = 1e-6, then a geometrically graded ramp up to the uniform grid
// (the cot term makes fixed steps unstable near the pole), then classical
// RK4 with step theta_end/4096.
ShootResult shoot(int n, double theta_end, double lambda, bool record = false) {
    const double c2 = -lambda / (2.0 * (n - 1));
    const double h0 = theta_end / kSteps;
    double th = std::min(kThetaStart, h0 / 4.0);  // stay left of the first node
    double f = 1.0 + c2 * th * th;
    double fp = 2.0 * c2 * th;

    auto rhs = [&](double t, double y0, double y1, double& d0, double& d1) {
        d0 = y1;
        d1 = -double(n - 2) / std::tan(t) * y1 - lambda * y0;
    };
    auto rk4 = [&](double t, double dt) {
        double k1f, k1p, k2f, k2p, k3f, k3p, k4f, k4p;
        rhs(t, f, fp, k1f, k1p);
        rhs(t + dt / 2, f + dt / 2 * k1f, fp + dt / 2 * k1p, k2f, k2p);
        rhs(t + dt / 2, f + dt / 2 * k2f, fp + dt / 2 * k2p, k3f, k3p);
        rhs(t + dt, f + dt * k3f, fp + dt * k3p, k4f, k4p);
        f += dt / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
        fp += dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    };

    ShootResult out;
    const double h = h0;
    while (th < h) {
        const double step = std::min(0.1 * th, h - th);
        rk4(th, step);
        th += step;
    }
    if (record) {
        out.theta.reserve(kSteps + 1);
        out.f.reserve(kSteps + 1);
        out.theta.push_back(th);
        out.f.push_back(f);
    }
    double prev = f;
    for (int i = 1; i <= kSteps; ++i) {
        const double target = i * h;
        rk4(th, target - th);
        th = target;
        if (i < kSteps && ((prev > 0.0 && f < 0.0) || (prev < 0.0 && f > 0.0)))
            ++out.interior_zeros;
        if (f != 0.0) prev = f;
        if (record) {
            out.theta.push_back(th);
            out.f.push_back(f);
        }
    }
    out.f_end = f;
    return out;
}

// Number of zeros of the shooting solution in (0, theta_end]; by Sturm
// oscillation this is >= k exactly when alpha >= alpha_k.
int zero_count(int n, double theta_end, double alpha) {
    const double lambda = alpha * (alpha + n - 2);
    const ShootResult r = shoot(n, theta_end, lambda);
    return r.interior_zeros + (r.f_end < 0.0 ? 1 : 0);
}

}  // namespace

double alpha_sector(double opening, int k) {
    if (!(opening > 0.0) || !(opening < 2.0 * std::numbers::pi))
        throw std::invalid_argument("alpha_sector: opening must lie in (0, 2*pi)");
    if (k < 1) throw std::invalid_argument("alpha_sector: k must be >= 1");
    return k * std::numbers::pi / opening;
}

HomogeneityReport alpha_axisymmetric(int dim, double half_aperture, int k) {
    if (dim < 2) throw std::invalid_argument("alpha_axisymmetric: dim must be >= 2");
    if (!(half_aperture > 0.0) || !(half_aperture < std::numbers::pi))
        throw std::invalid_argument("alpha_axisymmetric: half_aperture must lie in (0, pi)");
    if (k < 1) throw std::invalid_argument("alpha_axisymmetric: k must be >= 1");

    auto locate = [&](int target) {
        double hi = 1.0;
        int guard = 0;
        while (zero_count(dim, half_aperture, hi) < target) {
            hi *= 2.0;
            if (++guard > 60)
                throw linalg::numerical_failure("alpha_axisymmetric: bracket not found", 0.0,
                                                guard);
        }
        double lo = 0.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (zero_count(dim, half_aperture, mid) >= target)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    if (k > 2) throw std::invalid_argument("alpha_axisymmetric: only k in {1, 2} supported");

    HomogeneityReport rep;
    rep.dim = dim;
    rep.aperture = half_aperture;
    rep.alpha1 = locate(1);
    rep.alpha2 = locate(2);
    rep.lambda1 = rep.alpha1 * (rep.alpha1 + dim - 2);

    ShootResult prof = shoot(dim, half_aperture, rep.lambda1, true);
    double sup = 0.0;
    for (double v : prof.f) sup = std::max(sup, std::abs(v));
    rep.theta = std::move(prof.theta);
    rep.f1_samples = std::move(prof.f);
    for (double& v : rep.f1_samples) v /= sup;
    rep.f1_samples.back() = 0.0;  // bisection leaves O(1e-12) at the cap edge
    return rep;
}

double alpha_from_eigenvalue(int dim, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("alpha_from_eigenvalue: lambda must be > 0");
    const double nm2 = dim - 2;
    return 0.5 * (-nm2 + std::sqrt(nm2 * nm2 + 4.0 * lambda));
}

double critical_aperture(int dim) {
    if (dim < 2) throw std::invalid_argument("critical_aperture: dim must be >= 2");
    if (dim == 2) return std::numbers::pi / 2.0;

    // alpha1(theta_c) = 2 exactly when the solution at lambda = 2n has its
    // first zero at theta_c.
    const double lambda = 2.0 * dim;
    const double span = std::numbers::pi - 2e-3;
    const ShootResult scan = shoot(dim, span, lambda, true);
    double lo = -1.0, hi = -1.0;
    for (std::size_t i = 1; i < scan.f.size(); ++i) {
        if (scan.f[i - 1] > 0.0 && scan.f[i] <= 0.0) {
            lo = scan.theta[i - 1];
            hi = scan.theta[i];
            break;
        }
    }
    if (lo < 0.0)
        throw linalg::numerical_failure("critical_aperture: no sign change found", 0.0, 0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(dim, mid, lambda).f_end > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double fredholm_residual_with_forcing(int dim, const std::function<double(double)>& forcing,
                                      int nodes) {
    if (dim < 2) throw std::invalid_argument("fredholm_residual: dim must be >= 2");
    if (nodes < 16) throw std::invalid_argument("fredholm_residual: nodes must be >= 16");
    const double cap = critical_aperture(dim);  // full opening for dim 2
    const double dtheta = cap / nodes;
    const double two_n = 2.0 * dim;
    auto w_at = [&](double th) {
        return dim == 2 ? 1.0 : std::pow(std::sin(th), double(dim - 2));
    };

    // Node-based flux discretization of (1/w)(w g')' + 2n with weight
    // w = sin^(n-2) and a Dirichlet node at the cap edge. For dim 2 both
    // ends are Dirichlet; for dim >= 3 the pole cell [0, dtheta/2] carries
    // no flux through theta = 0 since the weight vanishes there.
    const int n = dim == 2 ? nodes - 1 : nodes;
    const int i0 = dim == 2 ? 1 : 0;
    std::vector<double> theta(std::size_t(n), 0.0), mass(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        theta[std::size_t(i)] = (i + i0) * dtheta;
        if (i + i0 == 0)
            mass[std::size_t(i)] = w_at(dtheta / 4.0) * dtheta / 2.0;
        else
            mass[std::size_t(i)] = w_at(theta[std::size_t(i)]) * dtheta;
    }

    linalg::Tridiag B;
    B.d.assign(std::size_t(n), 0.0);
    B.e.assign(std::size_t(n) - 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const double th = theta[std::size_t(i)];
        const double wl = w_at(th - dtheta / 2.0);
        const double wr = w_at(th + dtheta / 2.0);
        double diag = -wr / dtheta;
        if (i + i0 > 0) diag -= wl / dtheta;
        B.d[std::size_t(i)] = diag / mass[std::size_t(i)] + two_n;
        if (i + 1 < n)
            B.e[std::size_t(i)] =
                wr / (dtheta * std::sqrt(mass[std::size_t(i)] * mass[std::size_t(i) + 1]));
    }

    const linalg::EigenPair kernel = linalg::tridiag_smallest_eigenpair(B);

    // Forcing in the symmetrized coordinates c_i = sqrt(mass_i) F_i; the
    // truncated least-squares residual keeps only the near-kernel component,
    // |<c, psi_1>|.
    std::vector<double> c(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        c[std::size_t(i)] = std::sqrt(mass[std::size_t(i)]) * forcing(theta[std::size_t(i)]);
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += c[std::size_t(i)] * kernel.vector[std::size_t(i)];
    return std::abs(proj);
}

double fredholm_residual(int dim, int nodes) {
    return fredholm_residual_with_forcing(dim, [](double) { return -1.0; }, nodes);
}

void to_json(nlohmann::ordered_json& j, const HomogeneityReport& r) {
    j = nlohmann::ordered_json{{"alpha1", r.alpha1},     {"alpha2", r.alpha2},
                               {"lambda1", r.lambda1},   {"dim", r.dim},
                               {"aperture", r.aperture}, {"samples", r.f1_samples.size()}};
}

}  // namespace harnack::spectral
