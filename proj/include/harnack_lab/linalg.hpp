#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace harnack::linalg {

/// Thrown when an iterative method exhausts its iteration cap. Carries the
/// final relative residual for diagnostics.
struct numerical_failure : std::runtime_error {
    numerical_failure(const std::string& what, double residual_, int iterations_)
        : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
    double residual = 0.0;
    int iterations = 0;
};

struct CsrMatrix {
    int n = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<double> val;

    static CsrMatrix identity(int n);
    /// Build from (row, col, value) triplets; duplicates are summed.
    static CsrMatrix from_triplets(int n,
                                   std::vector<std::tuple<int, int, double>> triplets);

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> diagonal() const;
    bool is_symmetric(double rel_tol = 1e-12) const;
    double coeff(int i, int j) const;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Throws numerical_failure when
/// the cap is reached before ||b - Ax|| <= tol * ||b||.
std::vector<double> solve_cg(const CsrMatrix& A, const std::vector<double>& b, double tol,
                             int max_iter, SolveStats* stats = nullptr);

/// Jacobi-preconditioned BiCGStab with the same contract as solve_cg.
std::vector<double> solve_bicgstab(const CsrMatrix& A, const std::vector<double>& b,
                                   double tol, int max_iter, SolveStats* stats = nullptr);

struct LcpStats {
    int sweeps = 0;
    double complementarity_gap = 0.0;
};

/// Projected SOR for the linear complementarity problem
///   x >= 0,  A x - b >= 0,  x .* (A x - b) = 0,
/// with A an M-matrix. Deterministic lexicographic sweeps; the gap is
/// max_i |min(a_ii x_i, (A x - b)_i)| / (1 + ||b||_inf).
std::vector<double> psor_lcp(const CsrMatrix& A, const std::vector<double>& b,
                             double omega, double tol, int max_sweeps,
                             const std::vector<double>* warm_start = nullptr,
                             LcpStats* stats = nullptr);

/// Symmetric tridiagonal matrix (diag d, off-diagonal e of size n-1).
struct Tridiag {
    std::vector<double> d;
    std::vector<double> e;
    int size() const { return int(d.size()); }
};

/// Smallest-|eigenvalue| pair of a symmetric tridiagonal matrix by inverse
/// iteration with shift `shift`. The returned vector has unit 2-norm.
struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};
EigenPair tridiag_smallest_eigenpair(const Tridiag& T, double shift = 0.0,
                                     int max_iter = 200, double tol = 1e-14);

}  // namespace harnack::linalg
