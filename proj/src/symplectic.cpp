#include "hamkrylov/symplectic.hpp"

#include <string>

#include "hamkrylov/error.hpp"

namespace hamkrylov {

Vector SymplecticOperator::apply(std::span<const double> x) const {
    if (x.size() != 2 * m_) {
        throw DimensionError("J apply: expected length " + std::to_string(2 * m_) + ", got " +
                             std::to_string(x.size()));
    }
    Vector y(2 * m_);
    for (std::size_t i = 0; i < m_; ++i) {
        y[i] = x[m_ + i];
        y[m_ + i] = -x[i];
    }
    return y;
}

Vector SymplecticOperator::apply_inverse(std::span<const double> x) const {
    Vector y = apply(x);
    for (double& v : y) v = -v;
    return y;
}

DenseMatrix SymplecticOperator::dense() const {
    DenseMatrix j(2 * m_, 2 * m_);
    for (std::size_t i = 0; i < m_; ++i) {
        j(i, m_ + i) = 1.0;
        j(m_ + i, i) = -1.0;
    }
    return j;
}

Vector j_apply(std::span<const double> x) {
    if (x.size() % 2 != 0) throw DimensionError("j_apply: odd-length input " + std::to_string(x.size()));
    return SymplecticOperator(x.size() / 2).apply(x);
}

double symplectic_inner(const SymplecticOperator& j, std::span<const double> x, std::span<const double> y) {
    if (x.size() != j.dim() || y.size() != j.dim()) throw DimensionError("symplectic_inner: dimension mismatch");
    // x^T J y = sum_i x_i y_{m+i} - x_{m+i} y_i
    const std::size_t m = j.half_dim();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += x[i] * y[m + i] - x[m + i] * y[i];
    return s;
}

DenseMatrix j_apply_rows(const DenseMatrix& s) {
    if (s.rows() % 2 != 0) throw DimensionError("j_apply_rows: odd row count");
    const std::size_t n = s.rows() / 2;
    DenseMatrix out(s.rows(), s.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < s.cols(); ++c) {
            out(i, c) = s(n + i, c);
            out(n + i, c) = -s(i, c);
        }
    }
    return out;
}

InnerProduct InnerProduct::weighted_by(std::shared_ptr<const AnyMatrix> weight) {
    if (!weight) throw InvalidArgument("InnerProduct: null weight");
    if (rows(*weight) != cols(*weight)) throw DimensionError("InnerProduct: weight is not square");
    InnerProduct ip;
    ip.weight_ = std::move(weight);
    return ip;
}

double InnerProduct::operator()(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != y.size()) throw DimensionError("inner: vectors of different length");
    if (!weight_) return dot(x, y);
    if (cols(*weight_) != y.size()) throw DimensionError("inner: weight does not match vector length");
    return dot(x, matvec(*weight_, y));
}

Vector InnerProduct::weight_apply(std::span<const double> x) const {
    if (!weight_) return Vector(x.begin(), x.end());
    return matvec(*weight_, x);
}

} // namespace hamkrylov
