#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/hamiltonian.hpp"

namespace hktest {

using hamkrylov::DenseMatrix;
using hamkrylov::Vector;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double normal() { return normal_(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    Vector vector(std::size_t n) {
        Vector v(n);
        for (double& x : v) x = normal();
        return v;
    }

    Vector unit_vector(std::size_t n) {
        Vector v = vector(n);
        const double nv = hamkrylov::norm2(v);
        for (double& x : v) x /= nv;
        return v;
    }

    DenseMatrix matrix(std::size_t r, std::size_t c) { return DenseMatrix(r, c, vector(r * c)); }

    DenseMatrix symmetric(std::size_t n) {
        DenseMatrix a = matrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
        return a;
    }

    DenseMatrix skew(std::size_t n) {
        DenseMatrix a = matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = 0.0;
            for (std::size_t j = 0; j < i; ++j) a(i, j) = -a(j, i);
        }
        return a;
    }

    /// Symmetric positive definite with spectrum in [lo, hi].
    DenseMatrix spd(std::size_t n, double lo = 0.5, double hi = 2.0) {
        const DenseMatrix q = hamkrylov::qr_factor(matrix(n, n)).q;
        DenseMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = uniform(lo, hi);
        DenseMatrix out = hamkrylov::multiply(hamkrylov::multiply(q, d), q.transpose());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
        return out;
    }

    hamkrylov::HamiltonianSystem spd_system(std::size_t m) { return hamkrylov::HamiltonianSystem(spd(2 * m)); }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    return out;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return hamkrylov::max_abs(hamkrylov::subtract(a, b)); }

} // namespace hktest
