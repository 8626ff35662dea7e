#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/sparse.hpp"

namespace hamkrylov {

/// The canonical structure matrix J = [[0, I_m], [-I_m, 0]], never stored.
class SymplecticOperator {
public:
    explicit SymplecticOperator(std::size_t half_dim) : m_(half_dim) {}

    std::size_t half_dim() const noexcept { return m_; }
    std::size_t dim() const noexcept { return 2 * m_; }

    /// J x = (x[m:2m], -x[0:m])
    Vector apply(std::span<const double> x) const;
    /// J^{-1} x = -J x
    Vector apply_inverse(std::span<const double> x) const;
    /// J as a dense 2m x 2m matrix.
    DenseMatrix dense() const;

private:
    std::size_t m_;
};

/// J x for an even-length x, with m = len(x)/2. Throws on odd length.
Vector j_apply(std::span<const double> x);

/// omega(x, y) = x^T J y
double symplectic_inner(const SymplecticOperator& j, std::span<const double> x, std::span<const double> y);

/// J_{2n} S for a 2n-row block (applies the small canonical J to each column).
DenseMatrix j_apply_rows(const DenseMatrix& s);

/// Euclidean or weighted bilinear form.
class InnerProduct {
public:
    static InnerProduct euclidean() { return InnerProduct(); }
    static InnerProduct weighted_by(std::shared_ptr<const AnyMatrix> weight);

    bool is_weighted() const noexcept { return weight_ != nullptr; }
    const AnyMatrix* weight() const noexcept { return weight_.get(); }

    double operator()(std::span<const double> x, std::span<const double> y) const;
    /// M x for the weighted flavor, x itself for the Euclidean one.
    Vector weight_apply(std::span<const double> x) const;

private:
    InnerProduct() = default;
    std::shared_ptr<const AnyMatrix> weight_;
};

} // namespace hamkrylov
