#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hamkrylov {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double max_abs(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> x, std::span<const double> y);

/// Row-major dense matrix. Entries are finite on construction.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);
    /// Matrix whose columns are the given vectors (all of equal length).
    static DenseMatrix from_columns(const std::vector<Vector>& columns);
    /// blkdiag(a, b)
    static DenseMatrix block_diagonal(const DenseMatrix& a, const DenseMatrix& b);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    std::span<const double> entries() const noexcept { return entries_; }

    DenseMatrix transpose() const;
    /// Columns [first, first + count).
    DenseMatrix column_block(std::size_t first, std::size_t count) const;
    /// Rows [first, first + count).
    DenseMatrix row_block(std::size_t first, std::size_t count) const;

    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T x
Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// a^T b
DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, double beta = 1.0);
DenseMatrix scale(const DenseMatrix& a, double alpha);
/// max |a_ij - b_ij|
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// ‖a‖_∞, the maximum absolute row sum.
double norm_inf(const DenseMatrix& a);

} // namespace hamkrylov
