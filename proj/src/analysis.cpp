#include "harnack_lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace harnack::analysis {

namespace {

double radial(const Point& p, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += p[d] * p[d];
    return std::sqrt(s);
}

// Multilinear interpolation of per-equation cell data with zero extension.
double interp_cells(const GridDomain& g, const std::vector<double>& per_eq, const Point& x) {
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) {
        const double s = (x[std::size_t(d)] - g.xmin[std::size_t(d)]) / g.h - 0.5;
        base[std::size_t(d)] = int(std::floor(s));
        w[std::size_t(d)] = s - base[std::size_t(d)];
    }
    double acc = 0.0;
    for (int cnr = 0; cnr < (1 << g.dim); ++cnr) {
        std::array<int, 3> c = base;
        double wt = 1.0;
        for (int d = 0; d < g.dim; ++d) {
            const int bit = (cnr >> d) & 1;
            c[std::size_t(d)] += bit;
            wt *= bit ? w[std::size_t(d)] : 1.0 - w[std::size_t(d)];
        }
        if (wt == 0.0 || !g.in_bounds(c)) continue;
        const auto eq = g.eq_of_cell[std::size_t(g.flat(c[0], c[1], c[2]))];
        if (eq >= 0) acc += wt * per_eq[std::size_t(eq)];
    }
    return acc;
}

// Admissible cells: interior, at least margin*h from the boundary of the
// solve domain, and u > 0 there.
std::vector<int> admissible_cells(const elliptic::ScalarField& u, double margin) {
    const GridDomain& g = *u.grid;
    std::vector<int> out;
    out.reserve(u.values.size());
    for (int eq = 0; eq < g.interior_count(); ++eq) {
        const std::int64_t f = g.cell_of_eq[std::size_t(eq)];
        const double d = -truncated_signed_distance(g.spec, g.center(f));
        if (d >= margin * g.h && u.values[std::size_t(eq)] > 0.0) out.push_back(eq);
    }
    return out;
}

struct AngularRange {
    double lo = 0.0, hi = 0.0;  // polar angle (2D) or colatitude (3D)
};

AngularRange cone_angles(const DomainSpec& spec) {
    if (spec.dim == 2) {
        const double half =
            spec.kind == DomainKind::Sector ? spec.aperture / 2.0 : spec.aperture;
        const double mid = std::numbers::pi / 2.0;
        return {mid - half, mid + half};
    }
    return {0.0, spec.aperture};
}

}  // namespace

GridFieldView::GridFieldView(const elliptic::ScalarField& f) : field_(&f) {
    const int n = f.grid->interior_count();
    for (int d = 0; d < f.grid->dim; ++d) grad_[d].resize(std::size_t(n));
    for (int eq = 0; eq < n; ++eq) {
        const auto gr = f.gradient_at(eq);
        for (int d = 0; d < f.grid->dim; ++d) grad_[d][std::size_t(eq)] = gr[std::size_t(d)];
    }
}

std::array<double, 3> GridFieldView::gradient(const Point& x) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (int d = 0; d < field_->grid->dim; ++d)
        g[std::size_t(d)] = interp_cells(*field_->grid, grad_[d], x);
    return g;
}

double ScaledFieldView::value(const Point& x) const {
    Point y{x[0] * r_, x[1] * r_, x[2] * r_};
    return base_->value(y) / (r_ * r_);
}

std::array<double, 3> ScaledFieldView::gradient(const Point& x) const {
    Point y{x[0] * r_, x[1] * r_, x[2] * r_};
    auto g = base_->gradient(y);
    for (double& v : g) v /= r_;
    return g;
}

RatioProfile ratio_profile(const elliptic::ScalarField& u, const elliptic::ScalarField& v,
                           const Point& anchor, int levels, double margin) {
    if (u.grid.get() != v.grid.get())
        throw std::invalid_argument("ratio_profile: fields must share a grid");
    const GridDomain& g = *u.grid;
    const double R = g.spec.radius;

    RatioProfile prof;
    prof.anchor = anchor;
    prof.margin = margin;
    const double ua = u.value(anchor);
    if (!(ua > 0.0)) throw std::invalid_argument("ratio_profile: u(anchor) must be > 0");
    prof.anchor_ratio = v.value(anchor) / ua;

    const auto adm = admissible_cells(u, margin);
    std::vector<Point> centers(adm.size());
    std::vector<double> rr(adm.size());
    for (std::size_t i = 0; i < adm.size(); ++i) {
        centers[i] = g.center(g.cell_of_eq[std::size_t(adm[i])]);
        rr[i] = radial(centers[i], g.dim);
    }

    for (int j = 1; j <= levels; ++j) {
        const double r = R * std::pow(2.0, -j);
        double shell = -std::numeric_limits<double>::infinity();
        double ball = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < adm.size(); ++i) {
            if (rr[i] > r) continue;
            const double ratio =
                v.values[std::size_t(adm[i])] / u.values[std::size_t(adm[i])];
            ball = std::max(ball, ratio);
            if (rr[i] > r / 2.0) shell = std::max(shell, ratio);
        }
        if (std::isinf(shell)) {
            prof.dropped_levels.push_back(j);
            continue;
        }
        prof.levels.push_back(j);
        prof.radii.push_back(r);
        prof.sup_ratio.push_back(shell);
        prof.ball_sup_ratio.push_back(ball);
    }
    return prof;
}

GrowthFit growth_exponent(const elliptic::ScalarField& u, const Point& center,
                          int max_levels) {
    const GridDomain& g = *u.grid;
    const double R = g.spec.radius;

    // Dyadic radii in [8h, R/4]; when that leaves fewer than four samples the
    // spacing refines to half and quarter octaves over the same range.
    std::vector<double> radii;
    for (const double factor : {2.0, std::sqrt(2.0), std::pow(2.0, 0.25)}) {
        radii.clear();
        for (double r = R / 4.0; r >= 8.0 * g.h && int(radii.size()) < max_levels;
             r /= factor)
            radii.push_back(r);
        if (radii.size() >= 4) break;
    }

    std::vector<double> lr, ls, rs, ss;
    for (const double r : radii) {
        double sup = 0.0;
        bool any = false;
        for (int eq = 0; eq < g.interior_count(); ++eq) {
            const Point c = g.center(g.cell_of_eq[std::size_t(eq)]);
            double dist2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double dd = c[std::size_t(d)] - center[std::size_t(d)];
                dist2 += dd * dd;
            }
            if (dist2 > r * r) continue;
            any = true;
            sup = std::max(sup, u.values[std::size_t(eq)]);
        }
        // Interpolated sphere samples remove the O(h) lattice quantization of
        // the ball sup; for nonnegative harmonic fields the sup lives there.
        if (g.dim == 2) {
            const int M = std::max(64, int(std::ceil(16.0 * r / g.h)));
            for (int m = 0; m < M; ++m) {
                const double phi = 2.0 * std::numbers::pi * m / M;
                Point x = center;
                x[0] += r * std::cos(phi);
                x[1] += r * std::sin(phi);
                sup = std::max(sup, u.value(x));
            }
        } else {
            const int M = std::min(40000, std::max(400, int(std::ceil(
                                                        12.0 * (r / g.h) * (r / g.h)))));
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (int m = 0; m < M; ++m) {
                const double z = 1.0 - 2.0 * (m + 0.5) / M;
                const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = golden * m;
                Point x = center;
                x[0] += r * rho * std::cos(phi);
                x[1] += r * rho * std::sin(phi);
                x[2] += r * z;
                sup = std::max(sup, u.value(x));
            }
        }
        if (!any || !(sup > 0.0)) continue;
        lr.push_back(std::log(r));
        ls.push_back(std::log(sup));
        rs.push_back(r);
        ss.push_back(sup);
    }
    if (lr.size() < 4)
        throw insufficient_resolution("growth_exponent: fewer than 4 usable radii");

    const std::size_t n = lr.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lr[i];
        sy += ls[i];
        sxx += lr[i] * lr[i];
        sxy += lr[i] * ls[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double icept = (sy * sxx - sx * sxy) / det;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ls[i] - (icept + slope * lr[i]);
        rss += e * e;
    }

    Point ref{0, 0, 0};
    ref[std::size_t(g.dim) - 1] = R / 2.0;
    const double uref = u.value(ref);

    GrowthFit fit;
    fit.fitted_exponent = slope;
    fit.intercept = std::exp(icept) / (uref > 0.0 ? uref : 1.0);
    fit.residual = std::sqrt(rss / double(n));
    fit.r_min = std::exp(lr.back());
    fit.r_max = std::exp(lr.front());
    fit.points = int(n);
    fit.radii = std::move(rs);
    fit.sups = std::move(ss);
    return fit;
}

DyadicIncrements dyadic_increments(const elliptic::ScalarField& u,
                                   const elliptic::ScalarField& v, const Point& anchor,
                                   double alpha1, int levels, double margin) {
    if (u.grid.get() != v.grid.get())
        throw std::invalid_argument("dyadic_increments: fields must share a grid");
    const GridDomain& g = *u.grid;
    const double R = g.spec.radius;

    const auto adm = admissible_cells(u, margin);
    std::vector<double> rr(adm.size());
    for (std::size_t i = 0; i < adm.size(); ++i)
        rr[i] = radial(g.center(g.cell_of_eq[std::size_t(adm[i])]), g.dim);

    DyadicIncrements out;
    for (int k = 0; k < levels; ++k) {
        const double scale = std::pow(2.0, -k);
        if (R * scale < 8.0 * g.h) break;
        Point ak{anchor[0] * scale, anchor[1] * scale, anchor[2] * scale};
        const double ua = u.value(ak);
        if (!(ua > 0.0)) break;
        const double ratio = v.value(ak) / ua;
        double sup = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < adm.size(); ++i) {
            if (rr[i] > R * scale) continue;
            any = true;
            const double w = v.values[std::size_t(adm[i])] -
                             ratio * u.values[std::size_t(adm[i])];
            sup = std::max(sup, std::abs(w));
        }
        if (!any) break;
        out.k.push_back(k);
        out.a.push_back(sup * std::pow(2.0, k * alpha1));
    }
    return out;
}

WeissTrace weiss_trace(const FieldView& v, const std::vector<double>& radii) {
    const DomainSpec& spec = v.domain();
    if (spec.kind != DomainKind::Sector && spec.kind != DomainKind::Cone)
        throw std::invalid_argument("weiss_trace: field must live on a cone or sector");
    const int n = v.dim();
    const double h = v.resolution();
    const AngularRange ang = cone_angles(spec);

    WeissTrace tr;
    tr.quadrature_h = h;
    for (const double r : radii) {
        if (!(r > 8.0 * h) || !(r < spec.radius / 2.0)) {
            tr.dropped_radii.push_back(r);
            continue;
        }
        const int Q = std::max(16, int(std::ceil(2.0 * r / h)));
        const int M = std::max(32, int(std::ceil(2.0 * r * (ang.hi - ang.lo) / h)));

        double bulk = 0.0, sphere = 0.0;
        if (n == 2) {
            const double dphi = (ang.hi - ang.lo) / M;
            for (int m = 0; m <= M; ++m) {
                const double phi = ang.lo + m * dphi;
                const double wphi = (m == 0 || m == M) ? dphi / 2.0 : dphi;
                const double cs = std::cos(phi), sn = std::sin(phi);
                double radial_sum = 0.0;
                for (int q = 0; q < Q; ++q) {
                    const double rho = (q + 0.5) * r / Q;
                    const Point x{rho * cs, rho * sn, 0.0};
                    const auto gr = v.gradient(x);
                    const double f =
                        gr[0] * gr[0] + gr[1] * gr[1] - 2.0 * v.value(x);
                    radial_sum += f * rho * (r / Q);
                }
                bulk += wphi * radial_sum;
                const Point xs{r * cs, r * sn, 0.0};
                const double vs = v.value(xs);
                sphere += wphi * vs * vs * r;
            }
        } else {
            const int Mphi = std::max(16, M / 2);
            const double dth = (ang.hi - ang.lo) / M;
            const double dphi = 2.0 * std::numbers::pi / Mphi;
            for (int m = 0; m <= M; ++m) {
                const double th = ang.lo + m * dth;
                const double wth = ((m == 0 || m == M) ? dth / 2.0 : dth) * std::sin(th);
                for (int p = 0; p < Mphi; ++p) {
                    const double phi = p * dphi;
                    const double sx = std::sin(th) * std::cos(phi);
                    const double sy = std::sin(th) * std::sin(phi);
                    const double sz = std::cos(th);
                    double radial_sum = 0.0;
                    for (int q = 0; q < Q; ++q) {
                        const double rho = (q + 0.5) * r / Q;
                        const Point x{rho * sx, rho * sy, rho * sz};
                        const auto gr = v.gradient(x);
                        const double f = gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2] -
                                         2.0 * v.value(x);
                        radial_sum += f * rho * rho * (r / Q);
                    }
                    bulk += wth * dphi * radial_sum;
                    const Point xs{r * sx, r * sy, r * sz};
                    const double vs = v.value(xs);
                    sphere += wth * dphi * vs * vs * r * r;
                }
            }
        }
        const double W = bulk / std::pow(r, n + 2) - 2.0 * sphere / std::pow(r, n + 3);
        tr.radii.push_back(r);
        tr.W.push_back(W);
    }
    return tr;
}

HolderEstimate holder_quotient(const elliptic::ScalarField& u,
                               const elliptic::ScalarField& v, double beta,
                               int pair_budget, std::uint64_t seed, double margin) {
    if (!(beta > 0.0) || beta > 1.0)
        throw std::invalid_argument("holder_quotient: beta must lie in (0, 1]");
    if (u.grid.get() != v.grid.get())
        throw std::invalid_argument("holder_quotient: fields must share a grid");
    const GridDomain& g = *u.grid;
    const double R = g.spec.radius;

    const auto adm = admissible_cells(u, margin);
    if (adm.size() < 2) return {0.0, beta, 0, seed};
    std::vector<double> q(adm.size());
    std::vector<Point> xs(adm.size());
    std::vector<char> is_adm(std::size_t(g.interior_count()), 0);
    std::vector<int> adm_pos(std::size_t(g.interior_count()), -1);
    for (std::size_t i = 0; i < adm.size(); ++i) {
        q[i] = v.values[std::size_t(adm[i])] / u.values[std::size_t(adm[i])];
        xs[i] = g.center(g.cell_of_eq[std::size_t(adm[i])]);
        is_adm[std::size_t(adm[i])] = 1;
        adm_pos[std::size_t(adm[i])] = int(i);
    }

    int strata = 0;
    while (R * std::pow(2.0, -(strata + 1)) >= 4.0 * g.h && strata < 24) ++strata;
    strata = std::max(strata, 1);
    const int per_stratum = std::max(1, pair_budget / strata);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, adm.size() - 1);

    HolderEstimate est;
    est.beta = beta;
    est.seed = seed;
    for (int s = 1; s <= strata; ++s) {
        const double sep_hi = R * std::pow(2.0, -s);
        const double sep_lo = sep_hi / 2.0;
        for (int trial = 0; trial < per_stratum; ++trial) {
            const std::size_t ia = pick(rng);
            const double ang = 2.0 * std::numbers::pi * unit(rng);
            const double sep = sep_lo + (sep_hi - sep_lo) * unit(rng);
            Point xb = xs[ia];
            xb[0] += sep * std::cos(ang);
            xb[1] += sep * std::sin(ang);
            if (g.dim == 3) {
                const double cz = 2.0 * unit(rng) - 1.0;
                const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
                xb = xs[ia];
                xb[0] += sep * sz * std::cos(ang);
                xb[1] += sep * sz * std::sin(ang);
                xb[2] += sep * cz;
            }
            std::array<int, 3> c{0, 0, 0};
            bool ok = true;
            for (int d = 0; d < g.dim; ++d) {
                c[std::size_t(d)] = int(std::floor((xb[std::size_t(d)] - g.xmin[std::size_t(d)]) / g.h));
                if (c[std::size_t(d)] < 0 || c[std::size_t(d)] >= g.m[std::size_t(d)]) ok = false;
            }
            if (!ok) continue;
            const std::int64_t f = g.flat(c[0], c[1], c[2]);
            const auto eq = g.eq_of_cell[std::size_t(f)];
            if (eq < 0 || !is_adm[std::size_t(eq)]) continue;
            const int ib = adm_pos[std::size_t(eq)];
            if (ib == int(ia)) continue;
            double d2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double dd = xs[ia][std::size_t(d)] - xs[std::size_t(ib)][std::size_t(d)];
                d2 += dd * dd;
            }
            const double dist = std::sqrt(d2);
            if (dist < sep_lo / 2.0) continue;
            est.seminorm = std::max(
                est.seminorm, std::abs(q[ia] - q[std::size_t(ib)]) / std::pow(dist, beta));
            ++est.pairs;
        }
    }
    return est;
}

Verdict threshold_verdict(double alpha1, double gamma) {
    if (!(alpha1 > 0.0)) throw std::invalid_argument("threshold_verdict: alpha1 must be > 0");
    const double margin = 2.0 - alpha1 + gamma;
    if (std::abs(margin) <= 1e-9) return Verdict::Critical;
    return margin > 0.0 ? Verdict::Bounded : Verdict::Counterexample;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "bounded";
        case Verdict::Critical: return "critical";
        case Verdict::Counterexample: return "counterexample";
    }
    return "?";
}

SumDivResult sumdiv_subsequence(const std::vector<double>& a, int j_max) {
    const int n = int(a.size());
    int nonzero = 0;
    for (double x : a) {
        if (x < 0.0) throw std::invalid_argument("sumdiv_subsequence: negative entry");
        if (x > 0.0) ++nonzero;
    }
    if (nonzero < 3)
        throw std::invalid_argument("sumdiv_subsequence: need at least 3 nonzero terms");

    SumDivResult res;
    double max_all = 0.0, max_tail = 0.0, max_head = 0.0;
    for (int i = 0; i < n; ++i) {
        max_all = std::max(max_all, a[std::size_t(i)]);
        if (i >= n / 2)
            max_tail = std::max(max_tail, a[std::size_t(i)]);
        else
            max_head = std::max(max_head, a[std::size_t(i)]);
    }

    if (max_tail >= 0.5 * max_all) {
        if (max_tail > 1.25 * max_head) {
            // Running sup grows: take the prefix-maximum subsequence, so
            // earlier terms never exceed the selected one.
            res.branch = SumDivBranch::PrefixMax;
            double run = 0.0;
            for (int i = 0; i < n; ++i) {
                if (a[std::size_t(i)] > 0.0 && a[std::size_t(i)] >= run) {
                    run = a[std::size_t(i)];
                    res.indices.push_back(i);
                }
            }
        } else {
            // Positive limsup: indices approaching the tail sup.
            res.branch = SumDivBranch::PositiveLimsup;
            for (int i = 0; i < n; ++i)
                if (a[std::size_t(i)] >= (1.0 - 1e-9) * max_tail) res.indices.push_back(i);
        }
        for (int i : res.indices) res.envelope_knots.emplace_back(i, a[std::size_t(i)]);
    } else {
        // Vanishing limsup: strictly decreasing envelope (last argmax of each
        // tail), then the convexifying knot selection.
        res.branch = SumDivBranch::ConvexEnvelope;
        std::vector<double> sufbest(std::size_t(n), 0.0);
        std::vector<int> sufarg(std::size_t(n), -1);
        {
            double best = -1.0;
            int arg = -1;
            for (int i = n - 1; i >= 0; --i) {
                if (a[std::size_t(i)] > best) {
                    best = a[std::size_t(i)];
                    arg = i;
                }
                sufbest[std::size_t(i)] = best;
                sufarg[std::size_t(i)] = arg;
            }
        }
        std::vector<int> env;
        int start = 0;
        while (start < n && sufbest[std::size_t(start)] > 0.0) {
            env.push_back(sufarg[std::size_t(start)]);
            start = sufarg[std::size_t(start)] + 1;
        }
        for (int i : env) res.envelope_knots.emplace_back(i, a[std::size_t(i)]);

        // f3 is piecewise linear through the accepted knots, so f3(p-1)
        // lies on the segment ending at p. The first selection is
        // unconstrained.
        std::vector<int> sel;
        sel.push_back(env.front());
        std::size_t cand = 1;
        while (cand < env.size()) {
            const int p = sel.back();
            const double fp = a[std::size_t(p)];
            double left_slope_half;
            if (sel.size() == 1) {
                left_slope_half = std::numeric_limits<double>::infinity();
            } else {
                const int q = sel[sel.size() - 2];
                left_slope_half = (a[std::size_t(q)] - fp) / (2.0 * (p - q));
            }
            bool appended = false;
            for (std::size_t j = cand; j < env.size(); ++j) {
                const int kj = env[j];
                const double seg = (a[std::size_t(kj)] - fp) / (2.0 * (kj - p));
                if (left_slope_half + seg >= 0.0) {
                    sel.push_back(kj);
                    cand = j + 1;
                    appended = true;
                    break;
                }
            }
            if (!appended) break;
        }
        res.indices = std::move(sel);
    }

    res.ratio_table.assign(std::size_t(j_max), {});
    for (int j = 1; j <= j_max; ++j) {
        auto& row = res.ratio_table[std::size_t(j) - 1];
        row.reserve(res.indices.size());
        for (int k : res.indices) {
            if (k < j || a[std::size_t(k)] <= 0.0) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            double s = 0.0;
            for (int i = 1; i <= j; ++i) s += a[std::size_t(k - i)];
            row.push_back(s / a[std::size_t(k)]);
        }
    }
    return res;
}

void to_json(nlohmann::ordered_json& j, const RatioProfile& p) {
    j = nlohmann::ordered_json{{"levels", p.levels},
                               {"radii", p.radii},
                               {"sup_ratio", p.sup_ratio},
                               {"ball_sup_ratio", p.ball_sup_ratio},
                               {"dropped_levels", p.dropped_levels},
                               {"anchor", {p.anchor[0], p.anchor[1], p.anchor[2]}},
                               {"anchor_ratio", p.anchor_ratio},
                               {"margin", p.margin}};
}

void to_json(nlohmann::ordered_json& j, const GrowthFit& g) {
    j = nlohmann::ordered_json{{"fitted_exponent", g.fitted_exponent},
                               {"intercept", g.intercept},
                               {"residual", g.residual},
                               {"r_min", g.r_min},
                               {"r_max", g.r_max},
                               {"points", g.points}};
}

void to_json(nlohmann::ordered_json& j, const WeissTrace& w) {
    j = nlohmann::ordered_json{{"radii", w.radii},
                               {"W", w.W},
                               {"dropped_radii", w.dropped_radii},
                               {"quadrature_h", w.quadrature_h}};
}

void to_json(nlohmann::ordered_json& j, const SumDivResult& s) {
    const char* branch = s.branch == SumDivBranch::PrefixMax ? "prefix_max"
                         : s.branch == SumDivBranch::PositiveLimsup ? "positive_limsup"
                                                                    : "convex_envelope";
    nlohmann::ordered_json knots = nlohmann::ordered_json::array();
    for (const auto& [k, val] : s.envelope_knots) knots.push_back({k, val});
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& row : s.ratio_table) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double x : row) {
            if (std::isnan(x))
                r.push_back(nullptr);
            else
                r.push_back(x);
        }
        table.push_back(r);
    }
    j = nlohmann::ordered_json{{"branch", branch},
                               {"indices", s.indices},
                               {"ratio_table", table},
                               {"envelope_knots", knots}};
}

}  // namespace harnack::analysis
