#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "harnack_lab/elliptic.hpp"
#include "harnack_lab/geometry.hpp"
#include "json.hpp"

namespace harnack::analysis {

struct insufficient_resolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Read access to a scalar field and its gradient at arbitrary points,
/// together with the resolution used to size quadratures. Lets the Weiss
/// functional run on grid-backed, rescaled and analytic fields alike.
class FieldView {
  public:
    virtual ~FieldView() = default;
    virtual double value(const Point& x) const = 0;
    virtual std::array<double, 3> gradient(const Point& x) const = 0;
    virtual double resolution() const = 0;
    virtual int dim() const = 0;
    virtual const DomainSpec& domain() const = 0;
};

/// Grid-backed view; gradients are arm-aware per-cell differences,
/// multilinearly interpolated, with zero extension outside the domain.
class GridFieldView : public FieldView {
  public:
    explicit GridFieldView(const elliptic::ScalarField& f);
    double value(const Point& x) const override { return field_->value(x); }
    std::array<double, 3> gradient(const Point& x) const override;
    double resolution() const override { return field_->grid->h; }
    int dim() const override { return field_->grid->dim; }
    const DomainSpec& domain() const override { return field_->grid->spec; }

  private:
    const elliptic::ScalarField* field_;
    std::vector<double> grad_[3];  // per interior equation
};

/// v_r(x) = v(r x) / r^2, the parabolic rescaling used by the Weiss
/// functional. Gradients and resolution rescale accordingly.
class ScaledFieldView : public FieldView {
  public:
    ScaledFieldView(const FieldView& base, double r) : base_(&base), r_(r) {}
    double value(const Point& x) const override;
    std::array<double, 3> gradient(const Point& x) const override;
    double resolution() const override { return base_->resolution() / r_; }
    int dim() const override { return base_->dim(); }
    const DomainSpec& domain() const override { return base_->domain(); }

  private:
    const FieldView* base_;
    double r_;
};

struct RatioProfile {
    std::vector<int> levels;    // dyadic level j of each kept entry
    std::vector<double> radii;  // R * 2^-j, strictly decreasing
    // Scale-resolved sup of v/u over admissible cells in the shell
    // (r/2, r]; this is the series whose log2 increments carry the
    // 2 - alpha1 + gamma rate.
    std::vector<double> sup_ratio;
    // Cumulative sup over the whole ball B_r (resolution-floor limited in
    // the unbounded regime).
    std::vector<double> ball_sup_ratio;
    std::vector<int> dropped_levels;
    Point anchor{0, 0, 0};
    double anchor_ratio = 0.0;  // v(anchor) / u(anchor)
    double margin = 2.0;        // admissibility margin in cells
};

/// Dyadic sup profile of v/u over cells at distance >= margin*h from the
/// boundary. Levels whose shell holds no admissible cell are dropped and
/// flagged.
RatioProfile ratio_profile(const elliptic::ScalarField& u, const elliptic::ScalarField& v,
                           const Point& anchor, int levels, double margin = 2.0);

struct GrowthFit {
    double fitted_exponent = 0.0;
    double intercept = 0.0;  // prefactor normalized by u(R/2 * e_n)
    double residual = 0.0;   // rms residual of the log-log fit
    double r_min = 0.0;
    double r_max = 0.0;
    int points = 0;
    std::vector<double> radii;  // fitted samples, largest first
    std::vector<double> sups;
};

/// Least-squares exponent of log sup_{B_r(center)} u against log r over
/// dyadic radii in [8h, R/4]. Throws insufficient_resolution with fewer
/// than 4 usable radii.
GrowthFit growth_exponent(const elliptic::ScalarField& u, const Point& center,
                          int max_levels = 16);

struct DyadicIncrements {
    std::vector<int> k;
    std::vector<double> a;  // sup |v - (v/u)(2^-k x0) u| over B_{2^-k}, times 2^{k alpha1}
};

/// The increment sequence a_k of the blow-up argument, measured on solved
/// fields down to the resolution floor 8h.
DyadicIncrements dyadic_increments(const elliptic::ScalarField& u,
                                   const elliptic::ScalarField& v, const Point& anchor,
                                   double alpha1, int levels, double margin = 2.0);

struct WeissTrace {
    std::vector<double> radii;
    std::vector<double> W;
    std::vector<double> dropped_radii;
    double quadrature_h = 0.0;
};

/// Weiss energy W(r,v) = r^-(n+2) int_{B_r cap C} (|grad v|^2 - 2v)
///                     - 2 r^-(n+3) int_{dB_r cap C} v^2
/// by scaled polar product quadrature (radial midpoint, angular trapezoid).
/// Radii outside (8h, R/2) are dropped and flagged.
WeissTrace weiss_trace(const FieldView& v, const std::vector<double>& radii);

struct HolderEstimate {
    double seminorm = 0.0;
    double beta = 0.0;
    int pairs = 0;
    std::uint64_t seed = 0;
};

/// Randomized estimator of the C^{0,beta} seminorm of q = v/u over admissible
/// cell pairs, stratified over dyadic separations; deterministic given seed.
HolderEstimate holder_quotient(const elliptic::ScalarField& u,
                               const elliptic::ScalarField& v, double beta,
                               int pair_budget = 100000, std::uint64_t seed = 42,
                               double margin = 2.0);

enum class Verdict { Bounded, Critical, Counterexample };

/// Sign of 2 - alpha1 + gamma with a 1e-9 critical band.
Verdict threshold_verdict(double alpha1, double gamma);
const char* to_string(Verdict v);

enum class SumDivBranch { PrefixMax, PositiveLimsup, ConvexEnvelope };

struct SumDivResult {
    std::vector<int> indices;  // selected positions (0-based), strictly increasing
    // ratio_table[j-1][l] = sum_{i=1..j} a[k_l - i] / a[k_l]; NaN when k_l < j.
    std::vector<std::vector<double>> ratio_table;
    std::vector<std::pair<int, double>> envelope_knots;
    SumDivBranch branch = SumDivBranch::PositiveLimsup;
};

/// Subsequence selection of the divergent-series lemma: monotone selections
/// when the running sup stays positive or grows, otherwise the strictly
/// decreasing envelope followed by the convexifying knot rule.
SumDivResult sumdiv_subsequence(const std::vector<double>& a, int j_max);

void to_json(nlohmann::ordered_json& j, const RatioProfile& p);
void to_json(nlohmann::ordered_json& j, const GrowthFit& g);
void to_json(nlohmann::ordered_json& j, const WeissTrace& w);
void to_json(nlohmann::ordered_json& j, const SumDivResult& s);

}  // namespace harnack::analysis
