#include "hamkrylov/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hamkrylov/error.hpp"

namespace hamkrylov {

QrResult qr_factor(const DenseMatrix& m, double rank_tolerance) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows == 0 || cols == 0) throw DimensionError("qr_factor: empty matrix");
    const std::size_t p = std::min(rows, cols);

    DenseMatrix a = m;
    std::vector<std::size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<Vector> reflectors;
    std::vector<double> betas;
    reflectors.reserve(p);
    betas.reserve(p);

    for (std::size_t k = 0; k < p; ++k) {
        // pivot: remaining column of largest norm, first one on ties
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < rows; ++i) s += a(i, j) * a(i, j);
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, k), a(i, best));
            std::swap(perm[k], perm[best]);
        }

        Vector v(rows - k);
        for (std::size_t i = k; i < rows; ++i) v[i - k] = a(i, k);
        const double alpha = norm2(v);
        double beta = 0.0;
        if (alpha > 0.0) {
            const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
            v[0] += sign * alpha;
            const double vv = dot(v, v);
            beta = 2.0 / vv;
            for (std::size_t j = k; j < cols; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < rows; ++i) s += v[i - k] * a(i, j);
                s *= beta;
                for (std::size_t i = k; i < rows; ++i) a(i, j) -= s * v[i - k];
            }
            for (std::size_t i = k + 1; i < rows; ++i) a(i, k) = 0.0;
        }
        reflectors.push_back(std::move(v));
        betas.push_back(beta);
    }

    // thin Q = H_0 H_1 ... H_{p-1} [I_p; 0]
    DenseMatrix q(rows, p);
    for (std::size_t j = 0; j < p; ++j) q(j, j) = 1.0;
    for (std::size_t kk = p; kk-- > 0;) {
        const Vector& v = reflectors[kk];
        const double beta = betas[kk];
        if (beta == 0.0) continue;
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = kk; i < rows; ++i) s += v[i - kk] * q(i, j);
            s *= beta;
            for (std::size_t i = kk; i < rows; ++i) q(i, j) -= s * v[i - kk];
        }
    }

    DenseMatrix r(p, cols);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < cols; ++j) r(i, j) = a(i, j);

    // nonnegative diagonal
    for (std::size_t i = 0; i < p; ++i) {
        if (r(i, i) < 0.0) {
            for (std::size_t j = i; j < cols; ++j) r(i, j) = -r(i, j);
            for (std::size_t row = 0; row < rows; ++row) q(row, i) = -q(row, i);
        }
    }

    double dmax = 0.0;
    for (std::size_t i = 0; i < p; ++i) dmax = std::max(dmax, std::abs(r(i, i)));
    std::size_t rank = 0;
    if (dmax > 0.0) {
        for (std::size_t i = 0; i < p; ++i) {
            if (std::abs(r(i, i)) > rank_tolerance * dmax) ++rank;
        }
    }
    return {std::move(q), std::move(r), std::move(perm), rank};
}

LuFactorization::LuFactorization(DenseMatrix m) : lu_(std::move(m)) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw DimensionError("LU: matrix is not square");
    pivots_.resize(n);
    const double tol = static_cast<double>(std::max<std::size_t>(n, 1)) * std::numeric_limits<double>::epsilon() *
                       lu_.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
        }
        if (std::abs(lu_(piv, k)) <= tol) {
            throw SingularMatrixError("LU: pivot " + std::to_string(k) + " is singular to tolerance");
        }
        pivots_[k] = piv;
        if (piv != k) {
            auto rk = lu_.row(k);
            auto rp = lu_.row(piv);
            std::swap_ranges(rk.begin(), rk.end(), rp.begin());
        }
        const double d = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) / d;
            lu_(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw DimensionError("LU solve: right-hand side length mismatch");
    Vector x(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = lu_.row(i);
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        const auto r = lu_.row(i);
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
        x[i] = s / r[i];
    }
    return x;
}

Vector dense_solve(const DenseMatrix& m, std::span<const double> b) { return LuFactorization(m).solve(b); }

bool is_positive_definite(const DenseMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw DimensionError("is_positive_definite: matrix is not square");
    DenseMatrix l(n, n);
    const double tol = static_cast<double>(std::max<std::size_t>(n, 1)) * std::numeric_limits<double>::epsilon() *
                       m.max_abs();
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > tol)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return true;
}

double spectral_norm(const AnyMatrix& a, unsigned long long seed, double rel_tol, std::size_t max_iterations) {
    const std::size_t n = cols(a);
    if (n == 0) return 0.0;
    AnyMatrix at = std::visit([](const auto& mat) -> AnyMatrix { return mat.transpose(); }, a);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector v(n);
    for (double& x : v) x = normal(rng);
    double nv = norm2(v);
    for (double& x : v) x /= nv;

    double estimate = 0.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        Vector w = matvec(at, matvec(a, v));
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        const double next = std::sqrt(nw);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
        estimate = next;
    }
    return estimate;
}

namespace {

DenseMatrix shifted(const DenseMatrix& a, double alpha) {
    DenseMatrix out = scale(a, alpha);
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += 1.0;
    return out;
}

} // namespace

CayleyPropagator::CayleyPropagator(const DenseMatrix& a, double h)
    : h_(h), plus_(shifted(a, 0.5 * h)), minus_(shifted(a, -0.5 * h)) {
    if (a.rows() != a.cols()) throw DimensionError("Cayley: matrix is not square");
    if (!(h > 0.0)) throw InvalidArgument("Cayley: step size must be positive");
}

Vector CayleyPropagator::step(std::span<const double> y) const { return minus_.solve(matvec(plus_, y)); }

Vector cayley_step(const DenseMatrix& a, double h, std::span<const double> y) {
    if (a.rows() != a.cols()) throw DimensionError("cayley_step: matrix is not square");
    if (a.cols() != y.size()) throw DimensionError("cayley_step: state length mismatch");
    DenseMatrix minus = shifted(a, -0.5 * h);
    return dense_solve(minus, matvec(shifted(a, 0.5 * h), y));
}

} // namespace hamkrylov
