#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "hamkrylov/dense.hpp"

namespace hamkrylov {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row and the row offsets
/// are nondecreasing with the last offset equal to the number of stored values.
class SparseMatrix {
public:
    SparseMatrix() = default;
    /// Validates the CSR invariants; throws InvalidArgument on violation.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices, std::vector<double> values);

    /// Duplicate (row, col) entries are summed. Explicit zeros are kept.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
    /// Stores every entry with |a_ij| > drop_tol.
    static SparseMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);
    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Stored value at (i, j), zero when absent.
    double at(std::size_t i, std::size_t j) const;

    SparseMatrix transpose() const;
    DenseMatrix to_dense() const;
    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

Vector matvec(const SparseMatrix& a, std::span<const double> x);

/// Either storage format; both paths compute the same product.
using AnyMatrix = std::variant<DenseMatrix, SparseMatrix>;

std::size_t rows(const AnyMatrix& a);
std::size_t cols(const AnyMatrix& a);
Vector matvec(const AnyMatrix& a, std::span<const double> x);
DenseMatrix to_dense(const AnyMatrix& a);
double max_abs(const AnyMatrix& a);
/// max |a_ij - a_ji|
double asymmetry(const AnyMatrix& a);

/// Matrix-free square operator.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<Vector(std::span<const double>)> apply;

    Vector operator()(std::span<const double> x) const { return apply(x); }

    static LinearOperator from_matrix(AnyMatrix a);
};

} // namespace hamkrylov
