#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/sparse.hpp"

namespace hamkrylov {

/// Relative threshold on |R_ii| / max_j |R_jj| below which a column counts as dependent.
inline constexpr double kRankTolerance = 1e-10;

/// Thin Householder QR with column pivoting: M[:, permutation[j]] = (Q R)[:, j].
///
/// Q is rows x p and R is p x cols with p = min(rows, cols). The diagonal of R is
/// nonnegative and nonincreasing in magnitude, so the first `rank` columns of Q
/// span the range of M.
struct QrResult {
    DenseMatrix q;
    DenseMatrix r;
    std::vector<std::size_t> permutation;
    std::size_t rank = 0;
};

QrResult qr_factor(const DenseMatrix& m, double rank_tolerance = kRankTolerance);

/// LU factorization with partial pivoting, reusable for many right-hand sides.
class LuFactorization {
public:
    /// Throws SingularMatrixError when a pivot is at or below n * eps * max|M|.
    explicit LuFactorization(DenseMatrix m);

    std::size_t dim() const noexcept { return lu_.rows(); }
    Vector solve(std::span<const double> b) const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> pivots_;
};

Vector dense_solve(const DenseMatrix& m, std::span<const double> b);

/// Attempts a Cholesky factorization; false as soon as a pivot is not positive.
bool is_positive_definite(const DenseMatrix& m);

/// Spectral norm by power iteration on A^T A, started from a seeded random vector
/// and stopped once successive estimates agree to `rel_tol`.
double spectral_norm(const AnyMatrix& a, unsigned long long seed, double rel_tol = 1e-6,
                     std::size_t max_iterations = 10000);

/// One-step Cayley map y -> (I - h/2 A)^{-1} (I + h/2 A) y with the left-hand
/// factorization computed once.
class CayleyPropagator {
public:
    CayleyPropagator(const DenseMatrix& a, double h);

    double step_size() const noexcept { return h_; }
    std::size_t dim() const noexcept { return plus_.rows(); }
    Vector step(std::span<const double> y) const;

private:
    double h_;
    DenseMatrix plus_;
    LuFactorization minus_;
};

/// Solves (I - h/2 A) y+ = (I + h/2 A) y.
Vector cayley_step(const DenseMatrix& a, double h, std::span<const double> y);

} // namespace hamkrylov
