#include "hamkrylov/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamkrylov/error.hpp"

namespace hamkrylov {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::APM: return "APM";
    case Method::APMH: return "APMH";
    case Method::SLPM: return "SLPM";
    case Method::BJPM: return "BJPM";
    case Method::SpecialMR: return "SpecialMR";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::APM, Method::APMH, Method::SLPM, Method::BJPM, Method::SpecialMR}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

// J_{2n} sym(S^T H S)
DenseMatrix hamiltonian_reduction(const HamiltonianSystem& sys, const DenseMatrix& s) {
    DenseMatrix hs(s.rows(), s.cols());
    for (std::size_t c = 0; c < s.cols(); ++c) hs.set_column(c, sys.apply_h(s.column(c)));
    DenseMatrix shs = multiply_transposed(s, hs);
    for (std::size_t i = 0; i < shs.rows(); ++i) {
        for (std::size_t j = i + 1; j < shs.cols(); ++j) {
            const double avg = 0.5 * (shs(i, j) + shs(j, i));
            shs(i, j) = avg;
            shs(j, i) = avg;
        }
    }
    return j_apply_rows(shs);
}

// J_{d}^{-1} S^T J y0 = -J_{d} S^T J y0
Vector j_orthogonal_coordinates(const HamiltonianSystem& sys, const DenseMatrix& s, std::span<const double> y0) {
    const Vector sjy = matvec_transposed(s, sys.j().apply(y0));
    return SymplecticOperator(s.cols() / 2).apply_inverse(sjy);
}

void require_canonical(const HamiltonianSystem& sys, Method method) {
    if (!sys.is_canonical()) {
        throw InvalidArgument(std::string(to_string(method)) + " needs the canonical structure matrix J");
    }
}

void require_even(std::size_t krylov_dim, Method method) {
    if (krylov_dim < 2 || krylov_dim % 2 != 0) {
        throw InvalidArgument(std::string(to_string(method)) + " needs an even Krylov dimension >= 2");
    }
}

DenseMatrix extract_h11(const HamiltonianSystem& sys, std::span<const double> y0) {
    if (!sys.is_canonical()) throw InvalidArgument("SpecialMR: needs the canonical form");
    const std::size_t m = sys.half_dim();
    const DenseMatrix h = to_dense(sys.h());
    const double tol = 1e-12 * std::max(1.0, h.max_abs());
    DenseMatrix h11(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            h11(i, j) = h(i, j);
            if (std::abs(h(i, m + j)) > tol || std::abs(h(m + i, m + j) - (i == j ? 1.0 : 0.0)) > tol) {
                throw InvalidArgument("SpecialMR: H must be blkdiag(H11, I)");
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (y0[i] != 0.0) throw InvalidArgument("SpecialMR: initial value must have zero q-part");
    }
    return h11;
}

double defect(const ProjectedSystem& ps, std::span<const double> y0) {
    return norm2(subtract(ps.lift_state(ps.z0), y0));
}

} // namespace

HamiltonianSystem special_form_system(const AnyMatrix& h11, std::string description) {
    const std::size_t m = rows(h11);
    if (cols(h11) != m) throw DimensionError("special_form_system: H11 is not square");
    std::vector<Triplet> t;
    if (const auto* s = std::get_if<SparseMatrix>(&h11)) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = s->row_offsets()[i]; k < s->row_offsets()[i + 1]; ++k)
                t.push_back({i, s->col_indices()[k], s->values()[k]});
    } else {
        const auto& d = std::get<DenseMatrix>(h11);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (d(i, j) != 0.0) t.push_back({i, j, d(i, j)});
    }
    for (std::size_t i = 0; i < m; ++i) t.push_back({m + i, m + i, 1.0});
    return HamiltonianSystem(SparseMatrix::from_triplets(2 * m, 2 * m, std::move(t)), std::move(description));
}

ProjectedSystem special_model_reduction(const AnyMatrix& h11, std::span<const double> p0, std::size_t n) {
    const std::size_t m = rows(h11);
    if (cols(h11) != m || p0.size() != m) throw DimensionError("special_model_reduction: dimension mismatch");
    if (norm2(p0) == 0.0) throw InvalidArgument("special_model_reduction: zero p0");
    auto shared = std::make_shared<const AnyMatrix>(h11);
    const LinearOperator neg_h11{m, [shared](std::span<const double> x) {
                                     Vector y = matvec(*shared, x);
                                     for (double& v : y) v = -v;
                                     return y;
                                 }};

    ProjectedSystem ps;
    ps.method = Method::SpecialMR;
    ps.basis = arnoldi(neg_h11, p0, n, InnerProduct::euclidean());
    const DenseMatrix& v = ps.basis.basis;
    const std::size_t k = v.cols();

    DenseMatrix hv(m, k);
    for (std::size_t c = 0; c < k; ++c) hv.set_column(c, matvec(h11, v.column(c)));
    DenseMatrix vhv = multiply_transposed(v, hv);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double avg = 0.5 * (vhv(i, j) + vhv(j, i));
            vhv(i, j) = avg;
            vhv(j, i) = avg;
        }
    }
    // [[0, I], [-V^T H11 V, 0]]
    ps.reduced_matrix = DenseMatrix(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        ps.reduced_matrix(i, k + i) = 1.0;
        for (std::size_t j = 0; j < k; ++j) ps.reduced_matrix(k + i, j) = -vhv(i, j);
    }
    ps.z0.assign(2 * k, 0.0);
    const Vector vp = matvec_transposed(v, p0);
    std::copy(vp.begin(), vp.end(), ps.z0.begin() + static_cast<std::ptrdiff_t>(k));
    ps.lift = DenseMatrix::block_diagonal(v, v);

    Vector y0(2 * m, 0.0);
    std::copy(p0.begin(), p0.end(), y0.begin() + static_cast<std::ptrdiff_t>(m));
    ps.projection_defect = defect(ps, y0);
    return ps;
}

ProjectedSystem build_projection(const HamiltonianSystem& sys, std::span<const double> y0, Method method,
                                 std::size_t krylov_dim, const ProjectionOptions& options) {
    if (y0.size() != sys.dim()) throw DimensionError("build_projection: initial value length mismatch");
    if (norm2(y0) == 0.0) throw InvalidArgument("build_projection: zero initial value");
    if (krylov_dim == 0) throw InvalidArgument("build_projection: Krylov dimension must be positive");
    const LinearOperator a = sys.a_operator();

    ProjectedSystem ps;
    ps.method = method;
    ArnoldiOptions arnoldi_options;
    arnoldi_options.breakdown_tolerance = options.breakdown_tolerance;

    switch (method) {
    case Method::APM: {
        ps.basis = arnoldi(a, y0, krylov_dim, InnerProduct::euclidean(), arnoldi_options);
        ps.reduced_matrix = ps.basis.small_matrix;
        ps.z0 = matvec_transposed(ps.basis.basis, y0);
        ps.lift = ps.basis.basis;
        break;
    }
    case Method::APMH: {
        if (!sys.h_positive_definite()) {
            throw IndefiniteWeightError("APMH: H is not positive definite, the H inner product is degenerate");
        }
        ps.basis = arnoldi(a, y0, krylov_dim, InnerProduct::weighted_by(sys.shared_h()), arnoldi_options);
        ps.reduced_matrix = ps.basis.small_matrix;
        ps.z0 = matvec_transposed(ps.basis.basis, sys.apply_h(y0));
        ps.lift = ps.basis.basis;
        break;
    }
    case Method::SLPM: {
        require_canonical(sys, method);
        require_even(krylov_dim, method);
        LanczosOptions lanczos_options;
        if (options.breakdown_tolerance) lanczos_options.breakdown_tolerance = *options.breakdown_tolerance;
        ps.basis = symplectic_lanczos(a, y0, krylov_dim / 2, lanczos_options);
        ps.reduced_matrix = hamiltonian_reduction(sys, ps.basis.basis);
        ps.z0 = j_orthogonal_coordinates(sys, ps.basis.basis, y0);
        ps.lift = ps.basis.basis;
        break;
    }
    case Method::BJPM: {
        require_canonical(sys, method);
        require_even(krylov_dim, method);
        ps.basis = block_j_basis(a, y0, krylov_dim / 2, options.block_j_stabilized);
        ps.reduced_matrix = ps.basis.small_matrix;
        ps.z0 = j_orthogonal_coordinates(sys, ps.basis.basis, y0);
        ps.lift = ps.basis.basis;
        break;
    }
    case Method::SpecialMR: {
        require_even(krylov_dim, method);
        const DenseMatrix h11 = extract_h11(sys, y0);
        const std::size_t m = sys.half_dim();
        return special_model_reduction(AnyMatrix(h11), y0.subspan(m), krylov_dim / 2);
    }
    }
    ps.projection_defect = defect(ps, y0);
    return ps;
}

std::size_t Schedule::total_steps() const {
    if (!(h > 0.0)) throw InvalidArgument("schedule: step size must be positive");
    if (!(horizon >= h)) throw InvalidArgument("schedule: horizon must be at least one step");
    const double ratio = horizon / h;
    const double steps = std::round(ratio);
    if (std::abs(steps - ratio) > 1e-9 * std::max(1.0, ratio)) {
        throw InvalidArgument("schedule: horizon is not an integer multiple of the step size");
    }
    return static_cast<std::size_t>(steps);
}

std::size_t Schedule::steps_per_interval() const {
    const std::size_t total = total_steps();
    if (!restart_interval) return total;
    const double ratio = *restart_interval / h;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps - ratio) > 1e-9 * std::max(1.0, ratio)) {
        throw InvalidArgument("schedule: restart interval is not a positive integer multiple of the step size");
    }
    const auto per = static_cast<std::size_t>(steps);
    if (total % per != 0) throw InvalidArgument("schedule: horizon is not an integer multiple of the restart interval");
    return per;
}

void integrate_projected(const ProjectedSystem& ps, double h, std::size_t steps,
                         const std::function<void(std::size_t, std::span<const double>)>& on_step) {
    const CayleyPropagator prop(ps.reduced_matrix, h);
    Vector z = ps.z0;
    on_step(0, z);
    for (std::size_t i = 1; i <= steps; ++i) {
        z = prop.step(z);
        on_step(i, z);
    }
}

std::vector<Vector> integrate_projected(const ProjectedSystem& ps, double h, double horizon) {
    const Schedule schedule{h, horizon, std::nullopt};
    std::vector<Vector> out;
    out.reserve(schedule.total_steps() + 1);
    integrate_projected(ps, h, schedule.total_steps(),
                        [&](std::size_t, std::span<const double> z) { out.emplace_back(z.begin(), z.end()); });
    return out;
}

double TrajectoryRecord::max_abs_energy_error() const { return max_abs(energy_error); }

namespace {

// 1/2 u^T M^{2k} u for each requested k
Vector reduced_integrals(const DenseMatrix& m, std::span<const double> u, const std::vector<std::size_t>& orders) {
    Vector out;
    out.reserve(orders.size());
    for (std::size_t k : orders) {
        Vector w(u.begin(), u.end());
        for (std::size_t i = 0; i < 2 * k; ++i) w = matvec(m, w);
        out.push_back(0.5 * dot(u, w));
    }
    return out;
}

class Recorder {
public:
    Recorder(const HamiltonianSystem& sys, std::span<const double> y0, const DiagnosticsOptions& diagnostics,
             std::size_t total_steps, double h, IntegralKind kind)
        : sys_(sys),
          diagnostics_(diagnostics),
          h_(h),
          total_steps_(total_steps),
          kind_(kind),
          energy0_(energy(sys, y0)) {
        for (std::size_t k : diagnostics.integral_orders) {
            if (k > sys.dim()) throw InvalidArgument("diagnostics: integral order exceeds 2m");
        }
        const std::size_t samples = std::max<std::size_t>(diagnostics.max_state_samples, 2);
        stride_ = std::max<std::size_t>(1, (total_steps + samples - 2) / (samples - 1));
        record_.integral_orders = diagnostics.integral_orders;
        record_.integrals.assign(diagnostics.integral_orders.size(), {});
        record_.integral_kind = kind;
        if (diagnostics.global_error) {
            reference_ = diagnostics.reference;
            if (!reference_) reference_ = std::make_shared<const CayleyPropagator>(sys.materialize_a(), h);
            if (reference_->dim() != sys.dim() || reference_->step_size() != h) {
                throw InvalidArgument("diagnostics: reference propagator does not match the system and step size");
            }
            reference_state_.assign(y0.begin(), y0.end());
        }
        record_.times.reserve(total_steps + 1);
        record_.energy.reserve(total_steps + 1);
        record_.energy_error.reserve(total_steps + 1);
    }

    /// Basis used by the projected integral kinds for the current interval.
    void set_projection(const ProjectedSystem* ps) { projection_ = ps; }

    void record(std::size_t step, std::span<const double> y) {
        const double e = energy(sys_, y);
        record_.times.push_back(static_cast<double>(step) * h_);
        record_.energy.push_back(e);
        record_.energy_error.push_back(e - energy0_);

        if (!diagnostics_.integral_orders.empty()) {
            Vector values;
            switch (kind_) {
            case IntegralKind::Full:
                for (std::size_t k : diagnostics_.integral_orders) values.push_back(first_integral(sys_, k, y));
                break;
            case IntegralKind::WeightedArnoldi:
                values = reduced_integrals(projection_->reduced_matrix,
                                           matvec_transposed(projection_->lift, sys_.apply_h(y)),
                                           diagnostics_.integral_orders);
                break;
            case IntegralKind::Modified:
                values = reduced_integrals(projection_->reduced_matrix, matvec_transposed(projection_->lift, y),
                                           diagnostics_.integral_orders);
                break;
            }
            for (std::size_t i = 0; i < values.size(); ++i) record_.integrals[i].push_back(values[i]);
        }

        if (reference_) {
            if (step > 0) reference_state_ = reference_->step(reference_state_);
            record_.global_error.push_back(norm2(subtract(y, reference_state_)));
        }

        if (step % stride_ == 0 || step == total_steps_) {
            record_.state_times.push_back(static_cast<double>(step) * h_);
            record_.states.emplace_back(y.begin(), y.end());
        }
    }

    TrajectoryRecord take() { return std::move(record_); }
    TrajectoryRecord& record() { return record_; }

private:
    const HamiltonianSystem& sys_;
    const DiagnosticsOptions& diagnostics_;
    double h_;
    std::size_t total_steps_;
    IntegralKind kind_;
    double energy0_;
    std::size_t stride_ = 1;
    const ProjectedSystem* projection_ = nullptr;
    std::shared_ptr<const CayleyPropagator> reference_;
    Vector reference_state_;
    TrajectoryRecord record_;
};

IntegralKind integral_kind_for(Method method) {
    switch (method) {
    case Method::APMH: return IntegralKind::WeightedArnoldi;
    case Method::APM: return IntegralKind::Modified;
    default: return IntegralKind::Full;
    }
}

} // namespace

TrajectoryRecord run_method(const HamiltonianSystem& sys, std::span<const double> y0, Method method,
                            std::size_t krylov_dim, const Schedule& schedule, const DiagnosticsOptions& diagnostics,
                            const ProjectionOptions& options) {
    if (y0.size() != sys.dim()) throw DimensionError("run_method: initial value length mismatch");
    const std::size_t total = schedule.total_steps();
    const std::size_t per = schedule.steps_per_interval();
    const bool restarted = per < total;
    if (method == Method::SpecialMR && schedule.restart_interval && restarted) {
        throw InvalidArgument("SpecialMR: restart is not applicable, the special initial value is not maintained");
    }

    Recorder recorder(sys, y0, diagnostics, total, schedule.h, integral_kind_for(method));
    TrajectoryRecord& rec = recorder.record();
    rec.label = std::string(to_string(method));
    // the Full kind is a claim only for the exactly energy-preserving methods and k = 0
    rec.integral_preservation_claimed = !restarted && method != Method::SLPM && method != Method::BJPM &&
                                        method != Method::SpecialMR;

    Vector y(y0.begin(), y0.end());
    std::size_t step = 0;
    while (step < total) {
        const ProjectedSystem ps = build_projection(sys, y, method, krylov_dim, options);
        recorder.set_projection(&ps);
        ++rec.projections;
        if (ps.basis.breakdown_step) ++rec.krylov_early_stops;
        rec.max_projection_defect = std::max(rec.max_projection_defect, ps.projection_defect);
        rec.reduced_dim = std::max(rec.reduced_dim, ps.dim());

        const std::size_t first = step;
        integrate_projected(ps, schedule.h, per, [&](std::size_t i, std::span<const double> z) {
            if (i == 0 && first > 0) return;
            Vector lifted = ps.lift_state(z);
            recorder.record(first + i, lifted);
            if (i == per) y = std::move(lifted);
        });
        step += per;
        recorder.set_projection(nullptr);
    }
    return recorder.take();
}

TrajectoryRecord reference_solution(const HamiltonianSystem& sys, std::span<const double> y0, const Schedule& schedule,
                                    const DiagnosticsOptions& diagnostics) {
    if (y0.size() != sys.dim()) throw DimensionError("reference_solution: initial value length mismatch");
    const std::size_t total = schedule.total_steps();
    DiagnosticsOptions diag = diagnostics;
    diag.global_error = false;
    Recorder recorder(sys, y0, diag, total, schedule.h, IntegralKind::Full);
    recorder.record().label = "Reference";
    recorder.record().integral_preservation_claimed = true;

    std::shared_ptr<const CayleyPropagator> prop = diagnostics.reference;
    if (!prop) prop = std::make_shared<const CayleyPropagator>(sys.materialize_a(), schedule.h);
    Vector y(y0.begin(), y0.end());
    recorder.record(0, y);
    for (std::size_t i = 1; i <= total; ++i) {
        y = prop->step(y);
        recorder.record(i, y);
    }
    return recorder.take();
}

DenseMatrix shuffle_columns(const DenseMatrix& u) {
    if (u.cols() % 2 != 0) throw DimensionError("shuffle_columns: odd column count");
    const std::size_t n = u.cols() / 2;
    DenseMatrix out(u.rows(), u.cols());
    for (std::size_t j = 0; j < n; ++j) {
        out.set_column(j, u.column(2 * j + 1));
        out.set_column(n + j, u.column(2 * j));
    }
    return out;
}

EquivalenceReport reduction_equivalence(const AnyMatrix& h11, std::span<const double> p0, std::size_t n, double h,
                              double horizon) {
    const std::size_t m = rows(h11);
    if (cols(h11) != m || p0.size() != m) throw DimensionError("reduction_equivalence: dimension mismatch");
    const HamiltonianSystem sys = special_form_system(h11);
    Vector y0(2 * m, 0.0);
    std::copy(p0.begin(), p0.end(), y0.begin() + static_cast<std::ptrdiff_t>(m));

    const ProjectedSystem apm = build_projection(sys, y0, Method::APM, 2 * n);
    const ProjectedSystem mr = special_model_reduction(h11, p0, n);

    EquivalenceReport report;
    report.n = n;
    report.dimensions_match = apm.dim() == mr.dim() && apm.dim() % 2 == 0;
    if (!report.dimensions_match) {
        report.basis_discrepancy = std::numeric_limits<double>::infinity();
        report.trajectory_discrepancy = std::numeric_limits<double>::infinity();
        return report;
    }

    DenseMatrix shuffled = shuffle_columns(apm.basis.basis);
    const DenseMatrix& target = mr.lift;
    for (std::size_t c = 0; c < target.cols(); ++c) {
        std::size_t dominant = 0;
        for (std::size_t i = 1; i < target.rows(); ++i) {
            if (std::abs(target(i, c)) > std::abs(target(dominant, c))) dominant = i;
        }
        if ((shuffled(dominant, c) < 0.0) != (target(dominant, c) < 0.0)) {
            for (std::size_t i = 0; i < shuffled.rows(); ++i) shuffled(i, c) = -shuffled(i, c);
        }
    }
    report.basis_discrepancy = max_abs_diff(shuffled, target);

    const std::vector<Vector> za = integrate_projected(apm, h, horizon);
    const std::vector<Vector> zm = integrate_projected(mr, h, horizon);
    double worst = 0.0;
    for (std::size_t s = 0; s < za.size(); ++s) {
        worst = std::max(worst, max_abs(subtract(apm.lift_state(za[s]), mr.lift_state(zm[s]))));
    }
    report.trajectory_discrepancy = worst;
    return report;
}

} // namespace hamkrylov
