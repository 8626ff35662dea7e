#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/hamiltonian.hpp"

namespace hamkrylov {

enum class ProblemFamily {
    RandomBlockDiagSPD,
    RandomSkewHamiltonian,
    RandomFull,
    SpecialH12ZeroH22I,
    Wave2D,
    Maxwell1D,
    Maxwell3D,
};

enum class InitialMode { RandomUnit, Prescribed, ZeroQRandomP };

std::string_view to_string(ProblemFamily family);
std::optional<ProblemFamily> parse_family(std::string_view name);
std::string_view to_string(InitialMode mode);
std::optional<InitialMode> parse_initial_mode(std::string_view name);

/// `size` is m for the random families and the grid parameter N for the PDEs.
struct ProblemSpec {
    ProblemFamily family = ProblemFamily::RandomFull;
    std::size_t size = 10;
    std::uint64_t seed = 0;
    /// Family default when unset: prescribed fields for Maxwell1D, (0, p0) for the
    /// special form, a random unit vector otherwise.
    std::optional<InitialMode> initial;
};

struct Problem {
    HamiltonianSystem system;
    Vector y0;
};

/// Random families; eigenvalues of the SPD blocks are uniform in [0.1, 2].
Problem gen_random(ProblemFamily family, std::size_t m, std::uint64_t seed);

/// H = blkdiag(-G, I), G the 5-point Dirichlet Laplacian / dx^2 on the (N-1)^2
/// interior grid, dx = 1/N.
Problem wave2d(std::size_t n, std::uint64_t seed);

/// Poisson form U' = S D U with S = 1/(2h) [[0, G], [-G^T, 0]], h = 1/N,
/// state (E_1..E_{N-1}, B_0..B_N).
Problem maxwell1d(std::size_t n);

/// A = [[0, -G1], [G1, 0]], G1 = sum over axes of R_a D_a where D_a is the
/// Dirichlet central difference and R_a the index reflection along axis a.
Problem maxwell3d(std::size_t n, std::uint64_t seed);

Problem make_problem(const ProblemSpec& spec);

/// The Maxwell1D coupling matrix G, (N-1) x (N+1), unscaled.
DenseMatrix maxwell1d_coupling(std::size_t n);

/// The Wave2D matrix G (negative definite).
SparseMatrix wave2d_laplacian(std::size_t n);

/// The Maxwell3D matrix G1 (symmetric, indefinite).
SparseMatrix maxwell3d_curl_surrogate(std::size_t n);

} // namespace hamkrylov
