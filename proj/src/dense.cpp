#include "hamkrylov/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamkrylov/error.hpp"

namespace hamkrylov {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y, const char* what) {
    if (x.size() != y.size()) {
        throw DimensionError(std::string(what) + ": length " + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()));
    }
}

} // namespace

double dot(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    // scaled accumulation avoids overflow for large entries
    double scale = 0.0;
    double ssq = 1.0;
    for (double v : x) {
        if (v == 0.0) continue;
        const double a = std::abs(v);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_length(x, y, "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y, "subtract");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: " + std::to_string(entries_.size()) + " entries for a " +
                             std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
    }
    for (double v : entries_) {
        if (!std::isfinite(v)) throw InvalidArgument("DenseMatrix: non-finite entry");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
    DenseMatrix out(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
    return out;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& columns) {
    if (columns.empty()) return {};
    const std::size_t rows = columns.front().size();
    DenseMatrix out(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw DimensionError("from_columns: ragged columns");
        out.set_column(j, columns[j]);
    }
    return out;
}

DenseMatrix DenseMatrix::block_diagonal(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

Vector DenseMatrix::column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
    if (values.size() != rows_) throw DimensionError("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

DenseMatrix DenseMatrix::column_block(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw DimensionError("column_block: out of range");
    DenseMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

DenseMatrix DenseMatrix::row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_) throw DimensionError("row_block: out of range");
    DenseMatrix out(count, cols_);
    std::copy(entries_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              entries_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_),
              out.entries_.begin());
    return out;
}

double DenseMatrix::max_abs() const { return hamkrylov::max_abs(entries_); }

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw DimensionError("matvec: matrix has " + std::to_string(a.cols()) + " columns, vector length " +
                             std::to_string(x.size()));
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) throw DimensionError("matvec_transposed: dimension mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * x[i];
    }
    return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("multiply_transposed: row counts differ");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const auto ak = a.row(k);
        const auto bk = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            auto ci = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
        }
    }
    return c;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, double beta) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
    DenseMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + beta * b(i, j);
    return c;
}

DenseMatrix scale(const DenseMatrix& a, double alpha) {
    DenseMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = alpha * a(i, j);
    return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double norm_inf(const DenseMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double v : a.row(i)) s += std::abs(v);
        m = std::max(m, s);
    }
    return m;
}

} // namespace hamkrylov
