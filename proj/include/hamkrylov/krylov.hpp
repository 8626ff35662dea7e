#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/sparse.hpp"
#include "hamkrylov/symplectic.hpp"

namespace hamkrylov {

enum class BasisFlavor { EuclideanArnoldi, WeightedArnoldi, SymplecticLanczos, BlockJ };

std::string_view to_string(BasisFlavor flavor);

/// A Krylov basis together with its projected matrix.
///
/// Arnoldi flavors satisfy A V = V H + residual e_d^T with H upper Hessenberg.
/// SymplecticLanczos stores S = [v_1..v_n, w_1..w_n] with S^T J S = J_{2n},
/// the recurrence coefficient matrix H_{2n} and residual r_{n+1} = zeta_{n+1} v_{n+1}.
/// BlockJ stores S = blkdiag(V, V) and the reduced matrix J_{2k} S^T J^{-1} A S;
/// it has no residual.
struct KrylovBasis {
    BasisFlavor flavor = BasisFlavor::EuclideanArnoldi;
    DenseMatrix basis;
    DenseMatrix small_matrix;
    /// Scaled next vector (h_{d+1,d} v_{d+1} or zeta_{n+1} v_{n+1}); empty for BlockJ.
    Vector residual;
    double residual_coefficient = 0.0;
    /// Step at which the recurrence stopped early.
    std::optional<std::size_t> breakdown_step;

    std::size_t dim() const noexcept { return basis.cols(); }
};

struct ArnoldiOptions {
    /// Early-stop threshold on h_{j+1,j}; defaults to 1e-12 * (running estimate of |A|).
    std::optional<double> breakdown_tolerance;
};

/// Arnoldi with a configurable inner product, two full Gram-Schmidt passes per
/// step. The weighted flavor produces V^T M V = I.
KrylovBasis arnoldi(const LinearOperator& a, std::span<const double> b, std::size_t n, const InnerProduct& ip,
                    const ArnoldiOptions& options = {});

struct LanczosOptions {
    /// Relative threshold on zeta_{j+1} for an invariant-subspace stop.
    double breakdown_tolerance = 1e-12;
    /// Relative threshold on |nu_j| = |omega(v_j, A v_j)| for a serious breakdown.
    double serious_breakdown_tolerance = 1e-12;
    /// Failure when |S^T J S - J_{2n}| exceeds this.
    double orthogonality_limit = 1e-6;
};

/// Symplectic Lanczos for a Hamiltonian operator, v-columns of unit 2-norm,
/// full J-reorthogonalization (two passes) at every step. Throws BreakdownError
/// on a serious breakdown or loss of J-orthogonality.
KrylovBasis symplectic_lanczos(const LinearOperator& a, std::span<const double> y0, std::size_t n,
                               const LanczosOptions& options = {});

/// J-orthogonal basis blkdiag(V, V) where V is an orthonormal basis of
/// span{K^q, K^p}, the top and bottom halves of the n-column Krylov matrix.
/// The stabilized mode replaces the Krylov matrix with its Euclidean Arnoldi basis.
KrylovBasis block_j_basis(const LinearOperator& a, std::span<const double> y0, std::size_t n,
                          bool stabilized = true);

/// max |S^T J S - J_{d}| for a 2m x d basis with d even.
double j_orthogonality_defect(const DenseMatrix& s);

/// max |A V - V H - residual e_d^T| for the Arnoldi and Lanczos flavors.
double relation_residual(const LinearOperator& a, const KrylovBasis& basis);

} // namespace hamkrylov
