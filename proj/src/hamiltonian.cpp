#include "hamkrylov/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"

namespace hamkrylov {

HamiltonianSystem::HamiltonianSystem(AnyMatrix h, std::string description)
    : HamiltonianSystem(nullptr, std::move(h), std::move(description)) {}

HamiltonianSystem HamiltonianSystem::with_structure(SparseMatrix structure, AnyMatrix h, std::string description) {
    return HamiltonianSystem(std::make_shared<const SparseMatrix>(std::move(structure)), std::move(h),
                             std::move(description));
}

HamiltonianSystem::HamiltonianSystem(std::shared_ptr<const SparseMatrix> structure, AnyMatrix h,
                                     std::string description)
    : h_(std::make_shared<const AnyMatrix>(std::move(h))),
      structure_(std::move(structure)),
      description_(std::move(description)) {
    const std::size_t n = rows(*h_);
    if (n != cols(*h_)) throw DimensionError("HamiltonianSystem: H is not square");
    if (n == 0) throw DimensionError("HamiltonianSystem: empty H");
    const double hmax = max_abs(*h_);
    const double asym = asymmetry(*h_);
    if (asym > kSymmetryTolerance * hmax) {
        throw InvalidArgument("HamiltonianSystem: H is not symmetric (max |H - H^T| = " + std::to_string(asym) + ")");
    }
    if (structure_) {
        if (structure_->rows() != n || structure_->cols() != n) {
            throw DimensionError("HamiltonianSystem: structure matrix does not match H");
        }
        const auto st = structure_->transpose();
        double skew = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = structure_->row_offsets()[i]; k < structure_->row_offsets()[i + 1]; ++k) {
                const std::size_t j = structure_->col_indices()[k];
                skew = std::max(skew, std::abs(structure_->values()[k] + st.at(i, j)));
            }
        }
        if (skew > kSymmetryTolerance * structure_->max_abs()) {
            throw InvalidArgument("HamiltonianSystem: structure matrix is not skew-symmetric");
        }
    } else if (n % 2 != 0) {
        throw DimensionError("HamiltonianSystem: canonical form needs an even dimension, got " + std::to_string(n));
    }
    dim_ = n;
}

Vector HamiltonianSystem::apply_h(std::span<const double> x) const { return matvec(*h_, x); }

Vector HamiltonianSystem::apply_structure(std::span<const double> x) const {
    if (structure_) return matvec(*structure_, x);
    return j().apply(x);
}

Vector HamiltonianSystem::apply_a(std::span<const double> x) const { return apply_structure(apply_h(x)); }

LinearOperator HamiltonianSystem::a_operator() const {
    auto h = h_;
    auto s = structure_;
    const std::size_t n = dim_;
    return {n, [h, s, n](std::span<const double> x) {
                Vector hx = matvec(*h, x);
                if (s) return matvec(*s, hx);
                return SymplecticOperator(n / 2).apply(hx);
            }};
}

DenseMatrix HamiltonianSystem::materialize_a() const {
    DenseMatrix a(dim_, dim_);
    Vector e(dim_, 0.0);
    for (std::size_t j = 0; j < dim_; ++j) {
        e[j] = 1.0;
        a.set_column(j, apply_a(e));
        e[j] = 0.0;
    }
    return a;
}

DenseMatrix HamiltonianSystem::structure_dense() const {
    if (structure_) return structure_->to_dense();
    return j().dense();
}

bool HamiltonianSystem::h_positive_definite() const { return is_positive_definite(to_dense(*h_)); }

double energy(const HamiltonianSystem& sys, std::span<const double> y) {
    if (y.size() != sys.dim()) throw DimensionError("energy: state length mismatch");
    return 0.5 * dot(y, sys.apply_h(y));
}

double first_integral(const HamiltonianSystem& sys, std::size_t k, std::span<const double> y) {
    if (y.size() != sys.dim()) throw DimensionError("first_integral: state length mismatch");
    if (k > sys.dim()) throw InvalidArgument("first_integral: k exceeds 2m");
    Vector w(y.begin(), y.end());
    for (std::size_t i = 0; i < 2 * k; ++i) w = sys.apply_a(w);
    return 0.5 * dot(y, sys.apply_h(w));
}

FirstIntegralFamily::FirstIntegralFamily(const HamiltonianSystem& sys, std::size_t k_max)
    : sys_(&sys), k_max_(k_max) {
    if (k_max > sys.dim()) throw InvalidArgument("FirstIntegralFamily: k_max exceeds 2m");
}

Vector FirstIntegralFamily::evaluate(std::span<const double> y) const {
    if (y.size() != sys_->dim()) throw DimensionError("FirstIntegralFamily: state length mismatch");
    Vector out(k_max_ + 1);
    const Vector hy = sys_->apply_h(y);
    Vector w(y.begin(), y.end());
    for (std::size_t k = 0; k <= k_max_; ++k) {
        if (k > 0) w = sys_->apply_a(sys_->apply_a(w));
        // <y, A^{2k} y>_H = (H y)^T A^{2k} y since H is symmetric
        out[k] = 0.5 * dot(hy, w);
    }
    return out;
}

namespace {

Vector integral_gradient(const HamiltonianSystem& sys, std::size_t k, std::span<const double> y) {
    Vector w(y.begin(), y.end());
    for (std::size_t i = 0; i < 2 * k; ++i) w = sys.apply_a(w);
    return sys.apply_h(w);
}

} // namespace

double poisson_bracket(const HamiltonianSystem& sys, std::size_t k, std::size_t p, std::span<const double> y) {
    if (y.size() != sys.dim()) throw DimensionError("poisson_bracket: state length mismatch");
    if (k > sys.dim() || p > sys.dim()) throw InvalidArgument("poisson_bracket: index exceeds 2m");
    const Vector gk = integral_gradient(sys, k, y);
    const Vector gp = integral_gradient(sys, p, y);
    return dot(gk, sys.apply_structure(gp));
}

StructureFlags is_skew_hamiltonian(const HamiltonianSystem& sys) {
    const DenseMatrix a = sys.materialize_a();
    const DenseMatrix j = sys.structure_dense();
    StructureFlags f;
    f.tolerance = 1e-12 * a.max_abs();
    if (sys.is_canonical()) {
        // J^{-1} A = -J A
        const DenseMatrix jinv_a = scale(multiply(j, a), -1.0);
        f.hamiltonian_violation = max_abs_diff(jinv_a, jinv_a.transpose());
    } else {
        f.hamiltonian_violation = asymmetry(sys.h());
    }
    f.skew_violation = max_abs_diff(a, scale(a.transpose(), -1.0));
    f.commutation_violation = max_abs_diff(multiply(j, a), multiply(a, j));
    f.hamiltonian = f.hamiltonian_violation <= f.tolerance;
    f.skew = f.skew_violation <= f.tolerance;
    f.commutes = f.commutation_violation <= f.tolerance;
    return f;
}

EnergyBound energy_bound(const HamiltonianSystem& sys, std::span<const double> y0, unsigned long long seed) {
    if (y0.size() != sys.dim()) throw DimensionError("energy_bound: state length mismatch");
    EnergyBound b;
    b.commutation_holds = is_skew_hamiltonian(sys).commutes;
    const double ny = norm2(y0);
    b.value = 0.5 * ny * ny * spectral_norm(sys.h(), seed);
    return b;
}

} // namespace hamkrylov
