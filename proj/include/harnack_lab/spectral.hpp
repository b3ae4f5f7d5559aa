#pragma once

#include <functional>
#include <vector>

#include "json.hpp"

namespace harnack::spectral {

/// Homogeneity data of the positive harmonic function r^alpha1 f1(theta) on
/// an axisymmetric cone: lambda1 = alpha1 (alpha1 + n - 2) is the first
/// Dirichlet eigenvalue of the spherical cross-section, f1 is tabulated on a
/// uniform polar-angle grid with sup f1 = 1 and f1(theta_c) = 0.
struct HomogeneityReport {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double lambda1 = 0.0;
    std::vector<double> theta;
    std::vector<double> f1_samples;
    int dim = 0;
    double aperture = 0.0;
};

/// k-th homogeneity exponent of a planar sector of full opening `opening`:
/// k*pi/opening, in closed form.
double alpha_sector(double opening, int k = 1);

/// k-th homogeneity exponent of the axisymmetric cone with the given
/// half-aperture: shooting on (w f')' + lambda w f = 0, w = sin^(n-2),
/// bisection on alpha with lambda = alpha (alpha + n - 2). Accepts dim >= 2
/// (dim 2 reproduces alpha_sector with opening = 2 * half_aperture).
HomogeneityReport alpha_axisymmetric(int dim, double half_aperture, int k = 1);

/// Positive root of alpha (alpha + n - 2) = lambda.
double alpha_from_eigenvalue(int dim, double lambda);

/// Aperture at which alpha1 = 2: full opening for dim 2, half-aperture for
/// dim >= 3. Located as the first zero of the cross-section solution at
/// lambda = 2n.
double critical_aperture(int dim);

/// Least-squares residual of (Delta_theta + 2n) g = forcing on the critical
/// cap, computed on a weighted grid of `nodes` cells with the near-kernel
/// component truncated. Converges under refinement to
/// |<forcing, f1>| / ||f1|| in the cap surface measure.
double fredholm_residual(int dim, int nodes = 2048);
double fredholm_residual_with_forcing(int dim, const std::function<double(double)>& forcing,
                                      int nodes = 2048);

void to_json(nlohmann::ordered_json& j, const HomogeneityReport& r);

}  // namespace harnack::spectral
