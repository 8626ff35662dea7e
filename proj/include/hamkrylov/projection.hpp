#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/hamiltonian.hpp"
#include "hamkrylov/krylov.hpp"

namespace hamkrylov {

/// APM: Euclidean Arnoldi. APMH: H-weighted Arnoldi. SLPM: symplectic Lanczos.
/// BJPM: block J-orthogonal basis. SpecialMR: structure-preserving model
/// reduction for A = [[0, I], [-H11, 0]] with y0 = (0, p0).
enum class Method { APM, APMH, SLPM, BJPM, SpecialMR };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct ProjectionOptions {
    bool block_j_stabilized = true;
    std::optional<double> breakdown_tolerance;
};

/// Small system z' = reduced_matrix z, z(0) = z0, lifted by y = lift z.
struct ProjectedSystem {
    Method method = Method::APM;
    KrylovBasis basis;
    DenseMatrix reduced_matrix;
    Vector z0;
    DenseMatrix lift;
    /// |lift z0 - y0|_2
    double projection_defect = 0.0;

    std::size_t dim() const noexcept { return z0.size(); }
    Vector lift_state(std::span<const double> z) const { return matvec(lift, z); }
};

/// `krylov_dim` is the Krylov subspace dimension 2n: the Arnoldi methods take
/// 2n steps, symplectic Lanczos n steps, the block J basis n Krylov vectors.
ProjectedSystem build_projection(const HamiltonianSystem& sys, std::span<const double> y0, Method method,
                                 std::size_t krylov_dim, const ProjectionOptions& options = {});

/// The canonical system with H = blkdiag(H11, I), i.e. A = [[0, I], [-H11, 0]].
HamiltonianSystem special_form_system(const AnyMatrix& h11, std::string description = {});

/// Model reduction onto span{V} x span{V}, V the Arnoldi basis of K_n(-H11, p0).
ProjectedSystem special_model_reduction(const AnyMatrix& h11, std::span<const double> p0, std::size_t n);

/// Uniform time grid with optional restart interval.
struct Schedule {
    double h = 0.004;
    double horizon = 1.0;
    std::optional<double> restart_interval;

    /// Validates that T and the restart interval are integer multiples of h.
    std::size_t total_steps() const;
    std::size_t steps_per_interval() const;
};

/// Advances z' = reduced_matrix z by the Cayley map, one factorization for all
/// steps. `on_step(i, z)` is called for i = 0 (initial state) .. steps.
void integrate_projected(const ProjectedSystem& ps, double h, std::size_t steps,
                         const std::function<void(std::size_t, std::span<const double>)>& on_step);

/// Reduced states at every step, z_0 .. z_steps.
std::vector<Vector> integrate_projected(const ProjectedSystem& ps, double h, double horizon);

/// Which first integrals a trajectory reports in its H_k columns.
enum class IntegralKind {
    Full,           ///< 1/2 <y, A^{2k} y>_H
    WeightedArnoldi, ///< 1/2 y^T H V (H_n)^{2k} V^T H y
    Modified,        ///< 1/2 y^T V (H_n)^{2k} V^T y
};

struct DiagnosticsOptions {
    std::vector<std::size_t> integral_orders;
    bool global_error = false;
    std::size_t max_state_samples = 2000;
    /// Shared full-space propagator for global errors; built on demand when null.
    std::shared_ptr<const CayleyPropagator> reference;
};

struct TrajectoryRecord {
    std::string label;
    Vector times;
    Vector energy;
    Vector energy_error;
    std::vector<std::size_t> integral_orders;
    /// integrals[i][s] = H_{integral_orders[i]} at sample s
    std::vector<Vector> integrals;
    /// Empty when no reference was requested.
    Vector global_error;
    Vector state_times;
    std::vector<Vector> states;

    IntegralKind integral_kind = IntegralKind::Full;
    /// False under restart, where the basis changes between subintervals.
    bool integral_preservation_claimed = false;
    std::size_t projections = 0;
    std::size_t krylov_early_stops = 0;
    double max_projection_defect = 0.0;
    std::size_t reduced_dim = 0;

    double max_abs_energy_error() const;
};

TrajectoryRecord run_method(const HamiltonianSystem& sys, std::span<const double> y0, Method method,
                            std::size_t krylov_dim, const Schedule& schedule, const DiagnosticsOptions& diagnostics = {},
                            const ProjectionOptions& options = {});

/// Full-space Cayley trajectory; ignores the restart interval.
TrajectoryRecord reference_solution(const HamiltonianSystem& sys, std::span<const double> y0, const Schedule& schedule,
                                    const DiagnosticsOptions& diagnostics = {});

/// Perfect shuffle: column j of U Pi is column 2j+1 of U for j < n and column
/// 2(j-n) for j >= n.
DenseMatrix shuffle_columns(const DenseMatrix& u);

struct EquivalenceReport {
    std::size_t n = 0;
    /// max |U Pi - blkdiag(V, V)| after per-column sign alignment
    double basis_discrepancy = 0.0;
    /// max over samples and components of |y_APM - y_MR|
    double trajectory_discrepancy = 0.0;
    bool dimensions_match = false;
};

/// Runs APM with Krylov dimension 2n on A = [[0, I], [-H11, 0]], y0 = (0, p0) and
/// the special model reduction with n, and compares bases and trajectories.
EquivalenceReport reduction_equivalence(const AnyMatrix& h11, std::span<const double> p0, std::size_t n, double h,
                              double horizon);

} // namespace hamkrylov
