#include "hamkrylov/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/projection.hpp"

namespace hamkrylov {

namespace {

constexpr std::pair<ProblemFamily, std::string_view> kFamilies[] = {
    {ProblemFamily::RandomBlockDiagSPD, "RandomBlockDiagSPD"},
    {ProblemFamily::RandomSkewHamiltonian, "RandomSkewHamiltonian"},
    {ProblemFamily::RandomFull, "RandomFull"},
    {ProblemFamily::SpecialH12ZeroH22I, "SpecialH12ZeroH22I"},
    {ProblemFamily::Wave2D, "Wave2D"},
    {ProblemFamily::Maxwell1D, "Maxwell1D"},
    {ProblemFamily::Maxwell3D, "Maxwell3D"},
};

constexpr std::pair<InitialMode, std::string_view> kModes[] = {
    {InitialMode::RandomUnit, "RandomUnit"},
    {InitialMode::Prescribed, "Prescribed"},
    {InitialMode::ZeroQRandomP, "ZeroQRandomP"},
};

using Rng = std::mt19937_64;

Vector gaussian_vector(Rng& rng, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

Vector random_unit(Rng& rng, std::size_t n) {
    Vector v = gaussian_vector(rng, n);
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    return v;
}

DenseMatrix gaussian_matrix(Rng& rng, std::size_t r, std::size_t c) {
    return DenseMatrix(r, c, gaussian_vector(rng, r * c));
}

// Q diag(lambda) Q^T, Q orthogonal from the QR of a Gaussian matrix, lambda ~ U(0.1, 2)
DenseMatrix random_spd(Rng& rng, std::size_t n) {
    const DenseMatrix q = qr_factor(gaussian_matrix(rng, n, n)).q;
    std::uniform_real_distribution<double> eig(0.1, 2.0);
    Vector lambda(n);
    for (double& l : lambda) l = eig(rng);
    DenseMatrix ql = q;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ql(i, j) *= lambda[j];
    DenseMatrix out = multiply(ql, q.transpose());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (out(i, j) + out(j, i));
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

DenseMatrix embed(const DenseMatrix& h11, const DenseMatrix& h22) { return DenseMatrix::block_diagonal(h11, h22); }

Vector zero_q_random_p(Rng& rng, std::size_t m) {
    Vector y(2 * m, 0.0);
    const Vector p = random_unit(rng, m);
    std::copy(p.begin(), p.end(), y.begin() + static_cast<std::ptrdiff_t>(m));
    return y;
}

std::size_t grid_index(std::size_t i, std::size_t j, std::size_t k, std::size_t n) { return (i * n + j) * n + k; }

} // namespace

std::string_view to_string(ProblemFamily family) {
    for (const auto& [f, name] : kFamilies)
        if (f == family) return name;
    return "unknown";
}

std::optional<ProblemFamily> parse_family(std::string_view name) {
    for (const auto& [f, n] : kFamilies)
        if (n == name) return f;
    return std::nullopt;
}

std::string_view to_string(InitialMode mode) {
    for (const auto& [m, name] : kModes)
        if (m == mode) return name;
    return "unknown";
}

std::optional<InitialMode> parse_initial_mode(std::string_view name) {
    for (const auto& [m, n] : kModes)
        if (n == name) return m;
    return std::nullopt;
}

Problem gen_random(ProblemFamily family, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw InvalidArgument("gen_random: m must be at least 1");
    Rng rng(seed);
    const std::string tag = std::string(to_string(family)) + " m=" + std::to_string(m) + " seed=" + std::to_string(seed);
    switch (family) {
    case ProblemFamily::RandomBlockDiagSPD: {
        DenseMatrix h11 = random_spd(rng, m);
        DenseMatrix h22 = random_spd(rng, m);
        HamiltonianSystem sys(embed(h11, h22), tag);
        return {std::move(sys), random_unit(rng, 2 * m)};
    }
    case ProblemFamily::RandomSkewHamiltonian: {
        // A = [[F, G], [-G, F]], F skew, G symmetric; H = J^{-1} A = [[G, -F], [F, G]]
        const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
        const DenseMatrix x = gaussian_matrix(rng, m, m);
        const DenseMatrix y = gaussian_matrix(rng, m, m);
        DenseMatrix h(2 * m, 2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double f = s * 0.5 * (x(i, j) - x(j, i));
                const double g = s * 0.5 * (y(i, j) + y(j, i));
                h(i, j) = g;
                h(m + i, m + j) = g;
                h(i, m + j) = -f;
                h(m + i, j) = f;
            }
        }
        HamiltonianSystem sys(std::move(h), tag);
        return {std::move(sys), random_unit(rng, 2 * m)};
    }
    case ProblemFamily::RandomFull: {
        HamiltonianSystem sys(random_spd(rng, 2 * m), tag);
        return {std::move(sys), random_unit(rng, 2 * m)};
    }
    case ProblemFamily::SpecialH12ZeroH22I: {
        const DenseMatrix h11 = random_spd(rng, m);
        HamiltonianSystem sys = special_form_system(h11, tag);
        return {std::move(sys), zero_q_random_p(rng, m)};
    }
    default:
        throw InvalidArgument("gen_random: " + std::string(to_string(family)) + " is not a random family");
    }
}

SparseMatrix wave2d_laplacian(std::size_t n) {
    if (n < 2) throw InvalidArgument("wave2d: N must be at least 2");
    const std::size_t k = n - 1;
    const double inv = static_cast<double>(n) * static_cast<double>(n);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t r = i * k + j;
            t.push_back({r, r, -4.0 * inv});
            if (i > 0) t.push_back({r, r - k, inv});
            if (i + 1 < k) t.push_back({r, r + k, inv});
            if (j > 0) t.push_back({r, r - 1, inv});
            if (j + 1 < k) t.push_back({r, r + 1, inv});
        }
    }
    return SparseMatrix::from_triplets(k * k, k * k, std::move(t));
}

Problem wave2d(std::size_t n, std::uint64_t seed) {
    const SparseMatrix g = wave2d_laplacian(n);
    const std::size_t d = g.rows();
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t p = g.row_offsets()[i]; p < g.row_offsets()[i + 1]; ++p)
            t.push_back({i, g.col_indices()[p], -g.values()[p]});
        t.push_back({d + i, d + i, 1.0});
    }
    HamiltonianSystem sys(SparseMatrix::from_triplets(2 * d, 2 * d, std::move(t)),
                          "Wave2D N=" + std::to_string(n) + " seed=" + std::to_string(seed));
    Rng rng(seed);
    return {std::move(sys), random_unit(rng, 2 * d)};
}

DenseMatrix maxwell1d_coupling(std::size_t n) {
    if (n < 3) throw InvalidArgument("maxwell1d: N must be at least 3");
    DenseMatrix g(n - 1, n + 1);
    g(0, 0) = -2.0;
    g(0, 2) = 1.0;
    for (std::size_t i = 1; i + 1 < n - 1; ++i) {
        g(i, i) = -1.0;
        g(i, i + 2) = 1.0;
    }
    g(n - 2, n - 2) = -1.0;
    g(n - 2, n) = 2.0;
    return g;
}

Problem maxwell1d(std::size_t n) {
    const DenseMatrix g = maxwell1d_coupling(n);
    const double h = 1.0 / static_cast<double>(n);
    const double c = 1.0 / (2.0 * h);
    const std::size_t e = n - 1;
    std::vector<Triplet> s;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (g(i, j) == 0.0) continue;
            s.push_back({i, e + j, c * g(i, j)});
            s.push_back({e + j, i, -c * g(i, j)});
        }
    }
    Vector d(2 * n, 1.0);
    d[n - 1] = 0.5;
    d[2 * n - 1] = 0.5;
    std::vector<Triplet> dt;
    for (std::size_t i = 0; i < 2 * n; ++i) dt.push_back({i, i, d[i]});

    HamiltonianSystem sys = HamiltonianSystem::with_structure(
        SparseMatrix::from_triplets(2 * n, 2 * n, std::move(s)), SparseMatrix::from_triplets(2 * n, 2 * n, std::move(dt)),
        "Maxwell1D N=" + std::to_string(n));

    Vector u0(2 * n);
    for (std::size_t i = 1; i <= e; ++i) u0[i - 1] = std::sin(std::numbers::pi * static_cast<double>(i) * h);
    for (std::size_t i = 0; i <= n; ++i) u0[e + i] = std::cos(std::numbers::pi * static_cast<double>(i) * h);
    return {std::move(sys), std::move(u0)};
}

SparseMatrix maxwell3d_curl_surrogate(std::size_t n) {
    if (n < 2) throw InvalidArgument("maxwell3d: N must be at least 2");
    const std::size_t k = n - 1;
    const double c = static_cast<double>(n) / 2.0; // 1 / (2 dx)
    std::vector<Triplet> t;
    // (R_a D_a u)(x) = (D_a u)(reflect_a x); D_a u at i is c (u_{i+1} - u_{i-1})
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = 0; l < k; ++l) {
                const std::size_t r = grid_index(i, j, l, k);
                const std::size_t idx[3] = {i, j, l};
                for (int axis = 0; axis < 3; ++axis) {
                    std::size_t src[3] = {idx[0], idx[1], idx[2]};
                    src[axis] = k - 1 - idx[axis];
                    const std::size_t s = src[axis];
                    if (s + 1 < k) {
                        std::size_t nb[3] = {src[0], src[1], src[2]};
                        nb[axis] = s + 1;
                        t.push_back({r, grid_index(nb[0], nb[1], nb[2], k), c});
                    }
                    if (s > 0) {
                        std::size_t nb[3] = {src[0], src[1], src[2]};
                        nb[axis] = s - 1;
                        t.push_back({r, grid_index(nb[0], nb[1], nb[2], k), -c});
                    }
                }
            }
        }
    }
    return SparseMatrix::from_triplets(k * k * k, k * k * k, std::move(t));
}

Problem maxwell3d(std::size_t n, std::uint64_t seed) {
    const SparseMatrix g1 = maxwell3d_curl_surrogate(n);
    const std::size_t d = g1.rows();
    // H = J^{-1} A = blkdiag(-G1, -G1)
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t p = g1.row_offsets()[i]; p < g1.row_offsets()[i + 1]; ++p) {
            const std::size_t j = g1.col_indices()[p];
            t.push_back({i, j, -g1.values()[p]});
            t.push_back({d + i, d + j, -g1.values()[p]});
        }
    }
    HamiltonianSystem sys(SparseMatrix::from_triplets(2 * d, 2 * d, std::move(t)),
                          "Maxwell3D N=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                              " (symmetric central-difference surrogate for the curl)");
    Rng rng(seed);
    return {std::move(sys), random_unit(rng, 2 * d)};
}

Problem make_problem(const ProblemSpec& spec) {
    Problem p = [&] {
        switch (spec.family) {
        case ProblemFamily::Wave2D: return wave2d(spec.size, spec.seed);
        case ProblemFamily::Maxwell1D: return maxwell1d(spec.size);
        case ProblemFamily::Maxwell3D: return maxwell3d(spec.size, spec.seed);
        default: return gen_random(spec.family, spec.size, spec.seed);
        }
    }();
    if (!spec.initial || *spec.initial == InitialMode::Prescribed) return p;

    // separate stream so the system matrix does not depend on the initial mode
    Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t dim = p.system.dim();
    if (*spec.initial == InitialMode::RandomUnit) {
        p.y0 = random_unit(rng, dim);
    } else {
        p.y0 = zero_q_random_p(rng, dim / 2);
    }
    return p;
}

} // namespace hamkrylov
