#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/sparse.hpp"
#include "hamkrylov/symplectic.hpp"

namespace hamkrylov {

/// Relative symmetry tolerance enforced on H at construction.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Linear Hamiltonian system y' = A y with A = J H and H symmetric.
///
/// The canonical form uses J = [[0, I], [-I, 0]]. The Poisson form replaces J by
/// an arbitrary skew-symmetric sparse structure matrix S (A = S H); it covers
/// semi-discretizations such as U' = S D U whose structure is not canonical.
/// Methods needing the canonical pairing (symplectic Lanczos, block J bases)
/// reject Poisson-form systems. A is applied as two passes, H x then J (or S).
class HamiltonianSystem {
public:
    explicit HamiltonianSystem(AnyMatrix h, std::string description = {});
    static HamiltonianSystem with_structure(SparseMatrix structure, AnyMatrix h, std::string description = {});

    std::size_t dim() const noexcept { return dim_; }
    /// m, for the canonical form.
    std::size_t half_dim() const noexcept { return dim_ / 2; }
    bool is_canonical() const noexcept { return structure_ == nullptr; }
    const std::string& description() const noexcept { return description_; }

    const AnyMatrix& h() const noexcept { return *h_; }
    std::shared_ptr<const AnyMatrix> shared_h() const noexcept { return h_; }
    /// Null for the canonical form.
    const SparseMatrix* structure() const noexcept { return structure_.get(); }
    SymplecticOperator j() const { return SymplecticOperator(half_dim()); }

    Vector apply_h(std::span<const double> x) const;
    /// J x, or S x in the Poisson form.
    Vector apply_structure(std::span<const double> x) const;
    Vector apply_a(std::span<const double> x) const;
    LinearOperator a_operator() const;
    /// Dense A; intended for small systems and reference propagators.
    DenseMatrix materialize_a() const;
    /// Structure matrix as dense (J or S).
    DenseMatrix structure_dense() const;

    /// Cholesky attempt on a dense copy of H.
    bool h_positive_definite() const;

private:
    HamiltonianSystem(std::shared_ptr<const SparseMatrix> structure, AnyMatrix h, std::string description);

    std::size_t dim_ = 0;
    std::shared_ptr<const AnyMatrix> h_;
    std::shared_ptr<const SparseMatrix> structure_;
    std::string description_;
};

/// H(y) = 1/2 y^T H y
double energy(const HamiltonianSystem& sys, std::span<const double> y);

/// H_k(y) = 1/2 <y, A^{2k} y>_H; k = 0 is the energy. k is capped at 2m.
double first_integral(const HamiltonianSystem& sys, std::size_t k, std::span<const double> y);

/// The family H_0 .. H_{k_max} evaluated together.
class FirstIntegralFamily {
public:
    FirstIntegralFamily(const HamiltonianSystem& sys, std::size_t k_max);

    std::size_t k_max() const noexcept { return k_max_; }
    Vector evaluate(std::span<const double> y) const;

private:
    const HamiltonianSystem* sys_;
    std::size_t k_max_;
};

/// {H_k, H_p}(y) = (grad H_k)^T J grad H_p with grad H_k = H A^{2k} y.
double poisson_bracket(const HamiltonianSystem& sys, std::size_t k, std::size_t p, std::span<const double> y);

struct StructureFlags {
    bool hamiltonian = false;
    bool skew = false;
    bool commutes = false;
    double hamiltonian_violation = 0.0; ///< max |J^{-1}A - (J^{-1}A)^T|
    double skew_violation = 0.0;        ///< max |A + A^T|
    double commutation_violation = 0.0; ///< max |JA - AJ|
    double tolerance = 0.0;             ///< 1e-12 * max|A|
};

StructureFlags is_skew_hamiltonian(const HamiltonianSystem& sys);

struct EnergyBound {
    double value = 0.0;
    /// False when JA != AJ; the value is then not a valid bound.
    bool commutation_holds = false;
};

/// 1/2 |y0|^2 |H|_2, the bound on the energy along APM trajectories when JA = AJ.
EnergyBound energy_bound(const HamiltonianSystem& sys, std::span<const double> y0, unsigned long long seed = 0);

} // namespace hamkrylov
