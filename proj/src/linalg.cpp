#include "harnack_lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace harnack::linalg {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

CsrMatrix CsrMatrix::identity(int n) {
    CsrMatrix A;
    A.n = n;
    A.row_ptr.resize(std::size_t(n) + 1);
    A.col.resize(std::size_t(n));
    A.val.assign(std::size_t(n), 1.0);
    for (int i = 0; i <= n; ++i) A.row_ptr[std::size_t(i)] = i;
    for (int i = 0; i < n; ++i) A.col[std::size_t(i)] = i;
    return A;
}

CsrMatrix CsrMatrix::from_triplets(int n,
                                   std::vector<std::tuple<int, int, double>> triplets) {
    std::sort(triplets.begin(), triplets.end());
    CsrMatrix A;
    A.n = n;
    A.row_ptr.assign(std::size_t(n) + 1, 0);
    A.col.reserve(triplets.size());
    A.val.reserve(triplets.size());
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        while (k < triplets.size() && std::get<0>(triplets[k]) == i) {
            const int j = std::get<1>(triplets[k]);
            double v = std::get<2>(triplets[k]);
            ++k;
            while (k < triplets.size() && std::get<0>(triplets[k]) == i &&
                   std::get<1>(triplets[k]) == j) {
                v += std::get<2>(triplets[k]);
                ++k;
            }
            A.col.push_back(j);
            A.val.push_back(v);
        }
        A.row_ptr[std::size_t(i) + 1] = std::int64_t(A.col.size());
    }
    return A;
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k)
            s += val[std::size_t(k)] * x[std::size_t(col[std::size_t(k)])];
        y[std::size_t(i)] = s;
    }
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (std::int64_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k)
            if (col[std::size_t(k)] == i) d[std::size_t(i)] = val[std::size_t(k)];
    return d;
}

double CsrMatrix::coeff(int i, int j) const {
    for (std::int64_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k)
        if (col[std::size_t(k)] == j) return val[std::size_t(k)];
    return 0.0;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
    double scale = 0.0;
    for (double v : val) scale = std::max(scale, std::abs(v));
    const double tol = rel_tol * std::max(scale, 1.0);
    for (int i = 0; i < n; ++i) {
        for (std::int64_t k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k) {
            const int j = col[std::size_t(k)];
            if (j <= i) continue;
            if (std::abs(val[std::size_t(k)] - coeff(j, i)) > tol) return false;
        }
    }
    return true;
}

std::vector<double> solve_cg(const CsrMatrix& A, const std::vector<double>& b, double tol,
                             int max_iter, SolveStats* stats) {
    const int n = A.n;
    std::vector<double> x(std::size_t(n), 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        if (stats) *stats = {0, 0.0};
        return x;
    }
    std::vector<double> d = A.diagonal();
    for (double& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;

    std::vector<double> r = b;
    std::vector<double> z(std::size_t(n), 0.0), p, Ap(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) z[std::size_t(i)] = d[std::size_t(i)] * r[std::size_t(i)];
    p = z;
    double rz = dot(r, z);
    double rel = norm2(r) / bnorm;
    int it = 0;
    while (rel > tol && it < max_iter) {
        A.multiply(p, Ap);
        const double pAp = dot(p, Ap);
        if (pAp == 0.0) break;
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[std::size_t(i)] += alpha * p[std::size_t(i)];
            r[std::size_t(i)] -= alpha * Ap[std::size_t(i)];
        }
        for (int i = 0; i < n; ++i) z[std::size_t(i)] = d[std::size_t(i)] * r[std::size_t(i)];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i)
            p[std::size_t(i)] = z[std::size_t(i)] + beta * p[std::size_t(i)];
        rel = norm2(r) / bnorm;
        ++it;
    }
    if (stats) *stats = {it, rel};
    if (rel > tol)
        throw numerical_failure("cg: no convergence after " + std::to_string(it) +
                                    " iterations (residual " + std::to_string(rel) + ")",
                                rel, it);
    return x;
}

std::vector<double> solve_bicgstab(const CsrMatrix& A, const std::vector<double>& b,
                                   double tol, int max_iter, SolveStats* stats) {
    const int n = A.n;
    std::vector<double> x(std::size_t(n), 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        if (stats) *stats = {0, 0.0};
        return x;
    }
    std::vector<double> d = A.diagonal();
    for (double& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;

    std::vector<double> r = b;
    std::vector<double> r0 = r;
    std::vector<double> p(std::size_t(n), 0.0), v(std::size_t(n), 0.0);
    std::vector<double> ph(std::size_t(n), 0.0), sh(std::size_t(n), 0.0), s(std::size_t(n), 0.0),
        t(std::size_t(n), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double rel = norm2(r) / bnorm;
    int it = 0;
    while (rel > tol && it < max_iter) {
        const double rho_new = dot(r0, r);
        if (rho_new == 0.0) break;
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho_new / rho) * (alpha / omega);
            for (int i = 0; i < n; ++i)
                p[std::size_t(i)] = r[std::size_t(i)] +
                                    beta * (p[std::size_t(i)] - omega * v[std::size_t(i)]);
        }
        rho = rho_new;
        for (int i = 0; i < n; ++i) ph[std::size_t(i)] = d[std::size_t(i)] * p[std::size_t(i)];
        A.multiply(ph, v);
        const double r0v = dot(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i)
            s[std::size_t(i)] = r[std::size_t(i)] - alpha * v[std::size_t(i)];
        if (norm2(s) / bnorm <= tol) {
            for (int i = 0; i < n; ++i) x[std::size_t(i)] += alpha * ph[std::size_t(i)];
            r = s;
            rel = norm2(r) / bnorm;
            ++it;
            break;
        }
        for (int i = 0; i < n; ++i) sh[std::size_t(i)] = d[std::size_t(i)] * s[std::size_t(i)];
        A.multiply(sh, t);
        const double tt = dot(t, t);
        if (tt == 0.0) break;
        omega = dot(t, s) / tt;
        for (int i = 0; i < n; ++i) {
            x[std::size_t(i)] += alpha * ph[std::size_t(i)] + omega * sh[std::size_t(i)];
            r[std::size_t(i)] = s[std::size_t(i)] - omega * t[std::size_t(i)];
        }
        rel = norm2(r) / bnorm;
        if (omega == 0.0) break;
        ++it;
    }
    if (stats) *stats = {it, rel};
    if (rel > tol)
        throw numerical_failure("bicgstab: no convergence after " + std::to_string(it) +
                                    " iterations (residual " + std::to_string(rel) + ")",
                                rel, it);
    return x;
}

std::vector<double> psor_lcp(const CsrMatrix& A, const std::vector<double>& b,
                             double omega, double tol, int max_sweeps,
                             const std::vector<double>* warm_start, LcpStats* stats) {
    const int n = A.n;
    std::vector<double> x =
        warm_start ? *warm_start : std::vector<double>(std::size_t(n), 0.0);
    std::vector<double> diag = A.diagonal();
    double bscale = 1.0;
    for (double v : b) bscale = std::max(bscale, std::abs(v));

    double gap = 0.0;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::int64_t k = A.row_ptr[std::size_t(i)]; k < A.row_ptr[std::size_t(i) + 1];
                 ++k)
                s += A.val[std::size_t(k)] * x[std::size_t(A.col[std::size_t(k)])];
            const double xi = x[std::size_t(i)] +
                              omega * (b[std::size_t(i)] - s) / diag[std::size_t(i)];
            x[std::size_t(i)] = std::max(0.0, xi);
        }
        if (sweep % 8 != 7 && sweep + 1 != max_sweeps) continue;
        gap = 0.0;
        std::vector<double> Ax;
        A.multiply(x, Ax);
        for (int i = 0; i < n; ++i) {
            const double w = Ax[std::size_t(i)] - b[std::size_t(i)];
            const double c = std::min(diag[std::size_t(i)] * x[std::size_t(i)], w);
            gap = std::max(gap, std::abs(c));
        }
        gap /= bscale;
        if (gap <= tol) break;
    }
    if (stats) *stats = {sweep + 1, gap};
    if (gap > tol)
        throw numerical_failure("psor: no convergence after " + std::to_string(sweep) +
                                    " sweeps (gap " + std::to_string(gap) + ")",
                                gap, sweep);
    return x;
}

EigenPair tridiag_smallest_eigenpair(const Tridiag& T, double shift, int max_iter,
                                     double tol) {
    const int n = T.size();
    // Tridiagonal LU with partial pivoting of T - shift*I; the extra band
    // appears from row swaps.
    const std::size_t un = std::size_t(n);
    std::vector<double> a(un, 0.0), bu(un, 0.0), cu(un, 0.0);
    auto factor_and_solve = [&](std::vector<double>& rhs) {
        std::vector<double> dl(un, 0.0);
        for (int i = 0; i < n; ++i) {
            a[std::size_t(i)] = T.d[std::size_t(i)] - shift;
            bu[std::size_t(i)] = (i + 1 < n) ? T.e[std::size_t(i)] : 0.0;
            cu[std::size_t(i)] = 0.0;
            dl[std::size_t(i)] = (i + 1 < n) ? T.e[std::size_t(i)] : 0.0;
        }
        for (int i = 0; i + 1 < n; ++i) {
            double sub = dl[std::size_t(i)];
            if (std::abs(sub) > std::abs(a[std::size_t(i)])) {
                std::swap(a[std::size_t(i)], sub);
                std::swap(bu[std::size_t(i)], a[std::size_t(i) + 1]);
                std::swap(cu[std::size_t(i)], bu[std::size_t(i) + 1]);
                std::swap(rhs[std::size_t(i)], rhs[std::size_t(i) + 1]);
            }
            if (a[std::size_t(i)] == 0.0) a[std::size_t(i)] = 1e-300;
            const double l = sub / a[std::size_t(i)];
            a[std::size_t(i) + 1] -= l * bu[std::size_t(i)];
            bu[std::size_t(i) + 1] -= l * cu[std::size_t(i)];
            rhs[std::size_t(i) + 1] -= l * rhs[std::size_t(i)];
        }
        if (a[std::size_t(n) - 1] == 0.0) a[std::size_t(n) - 1] = 1e-300;
        for (int i = n - 1; i >= 0; --i) {
            double s = rhs[std::size_t(i)];
            if (i + 1 < n) s -= bu[std::size_t(i)] * rhs[std::size_t(i) + 1];
            if (i + 2 < n) s -= cu[std::size_t(i)] * rhs[std::size_t(i) + 2];
            rhs[std::size_t(i)] = s / a[std::size_t(i)];
        }
    };

    std::vector<double> v(std::size_t(n), 1.0);
    {
        double nv = norm2(v);
        for (double& x : v) x /= nv;
    }
    double mu = 0.0, mu_prev = 1e300;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> w = v;
        factor_and_solve(w);
        const double nw = norm2(w);
        for (double& x : w) x /= nw;
        // Rayleigh quotient of T at w.
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = T.d[std::size_t(i)] * w[std::size_t(i)];
            if (i > 0) s += T.e[std::size_t(i) - 1] * w[std::size_t(i) - 1];
            if (i + 1 < n) s += T.e[std::size_t(i)] * w[std::size_t(i) + 1];
            r += w[std::size_t(i)] * s;
        }
        v = std::move(w);
        mu = r;
        if (std::abs(mu - mu_prev) <= tol * (1.0 + std::abs(mu))) break;
        mu_prev = mu;
    }
    return {mu, v};
}

}  // namespace harnack::linalg
