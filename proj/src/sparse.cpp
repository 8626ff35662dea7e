#include "hamkrylov/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "hamkrylov/error.hpp"

namespace hamkrylov {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (row_offsets_.size() != rows_ + 1) throw InvalidArgument("SparseMatrix: row_offsets must have rows+1 entries");
    if (row_offsets_.front() != 0) throw InvalidArgument("SparseMatrix: first row offset must be 0");
    if (row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
        throw InvalidArgument("SparseMatrix: last row offset must equal the number of stored values");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) throw InvalidArgument("SparseMatrix: row offsets decrease");
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            if (col_indices_[k] >= cols_) throw InvalidArgument("SparseMatrix: column index out of range");
            if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1]) {
                throw InvalidArgument("SparseMatrix: column indices not strictly increasing in row " +
                                      std::to_string(i));
            }
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("SparseMatrix: non-finite value");
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) throw DimensionError("from_triplets: index out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    std::vector<std::size_t> offsets(rows + 1, 0);
    std::vector<std::size_t> cols_out;
    std::vector<double> vals;
    cols_out.reserve(triplets.size());
    vals.reserve(triplets.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        while (k < triplets.size() && triplets[k].row == i) {
            const std::size_t j = triplets[k].col;
            double v = 0.0;
            while (k < triplets.size() && triplets[k].row == i && triplets[k].col == j) v += triplets[k++].value;
            cols_out.push_back(j);
            vals.push_back(v);
        }
        offsets[i + 1] = vals.size();
    }
    return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a, double drop_tol) {
    std::vector<std::size_t> offsets(a.rows() + 1, 0);
    std::vector<std::size_t> cols_out;
    std::vector<double> vals;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j)) > drop_tol) {
                cols_out.push_back(j);
                vals.push_back(a(i, j));
            }
        }
        offsets[i + 1] = vals.size();
    }
    return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols_out), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1);
    std::vector<std::size_t> cols_out(n);
    for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols_out[i] = i;
    return SparseMatrix(n, n, std::move(offsets), std::move(cols_out), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) t.push_back({col_indices_[k], i, values_[k]});
    return from_triplets(cols_, rows_, std::move(t));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) out(i, col_indices_[k]) = values_[k];
    return out;
}

double SparseMatrix::max_abs() const { return hamkrylov::max_abs(values_); }

Vector matvec(const SparseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw DimensionError("matvec: matrix has " + std::to_string(a.cols()) + " columns, vector length " +
                             std::to_string(x.size()));
    }
    const auto offsets = a.row_offsets();
    const auto cols = a.col_indices();
    const auto vals = a.values();
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
        y[i] = s;
    }
    return y;
}

std::size_t rows(const AnyMatrix& a) {
    return std::visit([](const auto& m) { return m.rows(); }, a);
}

std::size_t cols(const AnyMatrix& a) {
    return std::visit([](const auto& m) { return m.cols(); }, a);
}

Vector matvec(const AnyMatrix& a, std::span<const double> x) {
    return std::visit([&](const auto& m) { return matvec(m, x); }, a);
}

DenseMatrix to_dense(const AnyMatrix& a) {
    if (const auto* d = std::get_if<DenseMatrix>(&a)) return *d;
    return std::get<SparseMatrix>(a).to_dense();
}

double max_abs(const AnyMatrix& a) {
    return std::visit([](const auto& m) { return m.max_abs(); }, a);
}

double asymmetry(const AnyMatrix& a) {
    if (rows(a) != cols(a)) throw DimensionError("asymmetry: matrix is not square");
    if (const auto* s = std::get_if<SparseMatrix>(&a)) {
        double m = 0.0;
        const auto offsets = s->row_offsets();
        const auto cidx = s->col_indices();
        const auto vals = s->values();
        for (std::size_t i = 0; i < s->rows(); ++i)
            for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
                m = std::max(m, std::abs(vals[k] - s->at(cidx[k], i)));
        return m;
    }
    const auto& d = std::get<DenseMatrix>(a);
    double m = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = i + 1; j < d.cols(); ++j) m = std::max(m, std::abs(d(i, j) - d(j, i)));
    return m;
}

LinearOperator LinearOperator::from_matrix(AnyMatrix a) {
    if (rows(a) != cols(a)) throw DimensionError("LinearOperator: matrix is not square");
    auto shared = std::make_shared<const AnyMatrix>(std::move(a));
    return {rows(*shared), [shared](std::span<const double> x) { return matvec(*shared, x); }};
}

} // namespace hamkrylov
