#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include <json.hpp>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/runner.hpp"

namespace hamkrylov {

using nlohmann::json;

namespace {

struct Measurement {
    Measurement(double m, double t, std::optional<bool> p = std::nullopt) : measured(m), threshold(t), pass(p) {}
    double measured;
    double threshold;
    /// Passing means measured <= threshold unless overridden.
    std::optional<bool> pass;
};

class Suite {
public:
    void check(const std::string& name, const std::function<Measurement()>& body) {
        json entry;
        try {
            const Measurement m = body();
            const bool pass = m.pass.value_or(m.measured <= m.threshold);
            entry = {{"pass", pass}, {"measured", m.measured}, {"threshold", m.threshold}};
            all_pass_ = all_pass_ && pass;
        } catch (const std::exception& e) {
            entry = {{"pass", false}, {"error", e.what()}};
            all_pass_ = false;
        }
        properties_[name] = std::move(entry);
    }

    bool all_pass() const { return all_pass_; }
    json properties() const { return properties_; }

private:
    json properties_ = json::object();
    bool all_pass_ = true;
};

Vector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = d(rng);
    return v;
}

DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    return DenseMatrix(r, c, random_vector(rng, r * c));
}

double vector_range(const Vector& v) {
    double lo = v.front();
    double hi = v.front();
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi - lo;
}

double max_deviation(const Vector& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
    return worst;
}

DenseMatrix gram_minus_identity(const DenseMatrix& v, const AnyMatrix* weight) {
    DenseMatrix mv = v;
    if (weight) {
        for (std::size_t c = 0; c < v.cols(); ++c) mv.set_column(c, matvec(*weight, v.column(c)));
    }
    return add(multiply_transposed(v, mv), DenseMatrix::identity(v.cols()), -1.0);
}

double skewness(const DenseMatrix& m) { return add(m, m.transpose()).max_abs(); }

double asymmetry_of(const DenseMatrix& m) { return max_abs_diff(m, m.transpose()); }

} // namespace

InvariantReport invariant_suite(std::uint64_t seed, bool negative_control) {
    Suite suite;
    auto seeded = [seed](std::uint64_t salt) { return seed * 1000003ULL + salt; };

    // core-linalg

    suite.check("core.j_involution", [&] {
        std::mt19937_64 rng(seeded(1));
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Vector x = random_vector(rng, 10);
            const Vector jjx = j_apply(j_apply(x));
            for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(jjx[i] + x[i]));
        }
        return Measurement{worst, 0.0};
    });

    suite.check("core.symplectic_inner_self", [&] {
        std::mt19937_64 rng(seeded(2));
        const SymplecticOperator j(5);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Vector x = random_vector(rng, 10);
            worst = std::max(worst, std::abs(symplectic_inner(j, x, x)) / dot(x, x));
        }
        return Measurement{worst, 1e-14};
    });

    suite.check("core.qr_orthonormality", [&] {
        std::mt19937_64 rng(seeded(3));
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            // condition number about 1e8 through geometric column scaling
            DenseMatrix m = random_matrix(rng, 12, 6);
            for (std::size_t j = 0; j < 6; ++j)
                for (std::size_t i = 0; i < 12; ++i) m(i, j) *= std::pow(10.0, -8.0 * static_cast<double>(j) / 5.0);
            const QrResult qr = qr_factor(m);
            worst = std::max(worst, gram_minus_identity(qr.q, nullptr).max_abs());
            const DenseMatrix qrm = multiply(qr.q, qr.r);
            for (std::size_t j = 0; j < 6; ++j)
                for (std::size_t i = 0; i < 12; ++i)
                    worst = std::max(worst, std::abs(qrm(i, j) - m(i, qr.permutation[j])) / m.max_abs());
        }
        return Measurement{worst, 1e-12};
    });

    suite.check("core.cayley_energy_per_step", [&] {
        double worst = 0.0;
        for (std::size_t m = 1; m <= 4; ++m) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(10 + m));
            const DenseMatrix a = p.system.materialize_a();
            const CayleyPropagator prop(a, 0.004);
            Vector y = p.y0;
            for (int s = 0; s < 200; ++s) {
                const double e0 = energy(p.system, y);
                y = prop.step(y);
                worst = std::max(worst, std::abs(energy(p.system, y) - e0) / (1.0 + std::abs(e0)));
            }
        }
        return Measurement{worst, 1e-11};
    });

    suite.check("core.cayley_matches_midpoint", [&] {
        const Problem p = gen_random(ProblemFamily::RandomFull, 2, seeded(20));
        const DenseMatrix a = p.system.materialize_a();
        const double h = 0.004;
        const Vector yc = cayley_step(a, h, p.y0);
        // fixed point y+ = y + h A (y + y+) / 2
        Vector ym = p.y0;
        for (int it = 0; it < 200; ++it) {
            Vector mid = p.y0;
            axpy(1.0, ym, mid);
            Vector next = p.y0;
            axpy(0.5 * h, matvec(a, mid), next);
            ym = std::move(next);
        }
        return Measurement{max_abs(subtract(yc, ym)), 1e-12};
    });

    // hamiltonian-model

    suite.check("hamiltonian.construction_invariant", [&] {
        const Problem p = gen_random(ProblemFamily::RandomFull, 3, seeded(30));
        DenseMatrix h = to_dense(p.system.h());
        if (negative_control) h(0, 1) += 1e-3;
        const double asym = asymmetry_of(h);
        bool constructed = true;
        try {
            HamiltonianSystem sys(h);
        } catch (const InvalidArgument&) {
            constructed = false;
        }
        return Measurement{asym, kSymmetryTolerance * h.max_abs(), constructed && asym <= kSymmetryTolerance * h.max_abs()};
    });

    suite.check("hamiltonian.involution", [&] {
        std::mt19937_64 rng(seeded(40));
        double worst = 0.0;
        for (std::size_t m = 1; m <= 4; ++m) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(40 + m));
            const double na = spectral_norm(AnyMatrix(p.system.materialize_a()), seeded(44));
            for (int trial = 0; trial < 100; ++trial) {
                const Vector y = random_vector(rng, 2 * m);
                const double yy = dot(y, y);
                for (std::size_t k = 0; k < m; ++k) {
                    for (std::size_t q = 0; q < m; ++q) {
                        const double scale = yy * std::pow(na, 2.0 * static_cast<double>(k + q) + 1.0);
                        worst = std::max(worst, std::abs(poisson_bracket(p.system, k, q, y)) / scale);
                    }
                }
            }
        }
        return Measurement{worst, 1e-11};
    });

    suite.check("hamiltonian.functional_independence", [&] {
        std::mt19937_64 rng(seeded(50));
        double deficit = 0.0;
        for (std::size_t m = 1; m <= 4; ++m) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(50 + m));
            const Vector y = random_vector(rng, 2 * m);
            std::vector<Vector> grads;
            Vector w = y;
            for (std::size_t k = 0; k < m; ++k) {
                if (k > 0) w = p.system.apply_a(p.system.apply_a(w));
                grads.push_back(p.system.apply_h(w));
            }
            const QrResult qr = qr_factor(DenseMatrix::from_columns(grads));
            deficit += static_cast<double>(m - qr.rank);
        }
        return Measurement{deficit, 0.0};
    });

    suite.check("hamiltonian.integrals_conserved", [&] {
        double worst = 0.0;
        for (std::size_t m = 1; m <= 4; ++m) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(60 + m));
            const FirstIntegralFamily fam(p.system, m - 1);
            const Vector h0 = fam.evaluate(p.y0);
            const CayleyPropagator prop(p.system.materialize_a(), 0.004);
            Vector y = p.y0;
            for (int s = 0; s < 500; ++s) {
                y = prop.step(y);
                const Vector hk = fam.evaluate(y);
                for (std::size_t k = 0; k < hk.size(); ++k)
                    worst = std::max(worst, std::abs(hk[k] - h0[k]) / (1.0 + std::abs(h0[k])));
            }
        }
        return Measurement{worst, 1e-11};
    });

    suite.check("hamiltonian.skew_commute_biconditional", [&] {
        double worst = 0.0;
        bool ok = true;
        for (std::size_t m = 1; m <= 4; ++m) {
            const Problem skew = gen_random(ProblemFamily::RandomSkewHamiltonian, m, seeded(70 + m));
            const StructureFlags fs = is_skew_hamiltonian(skew.system);
            ok = ok && fs.hamiltonian && fs.skew && fs.commutes;
            worst = std::max(worst, fs.commutation_violation);
            const Problem full = gen_random(ProblemFamily::RandomFull, m, seeded(80 + m));
            const StructureFlags ff = is_skew_hamiltonian(full.system);
            ok = ok && ff.hamiltonian && !ff.skew && !ff.commutes;
        }
        return Measurement{worst, 1e-12, ok && worst <= 1e-12};
    });

    // krylov-bases

    suite.check("krylov.arnoldi_relation", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(90 + m));
            const LinearOperator a = p.system.a_operator();
            const double na = spectral_norm(AnyMatrix(p.system.materialize_a()), seeded(91));
            for (const InnerProduct& ip : {InnerProduct::euclidean(), InnerProduct::weighted_by(p.system.shared_h())}) {
                const KrylovBasis b = arnoldi(a, p.y0, std::min<std::size_t>(8, 2 * m), ip);
                worst = std::max(worst, relation_residual(a, b) / (na * std::max(1.0, b.basis.max_abs())));
            }
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("krylov.arnoldi_orthonormality", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomBlockDiagSPD, m, seeded(100 + m));
            const KrylovBasis b = arnoldi(p.system.a_operator(), p.y0, std::min<std::size_t>(8, 2 * m),
                                          InnerProduct::euclidean());
            worst = std::max(worst, gram_minus_identity(b.basis, nullptr).max_abs());
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("krylov.weighted_orthonormality", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(110 + m));
            const KrylovBasis b = arnoldi(p.system.a_operator(), p.y0, std::min<std::size_t>(8, 2 * m),
                                          InnerProduct::weighted_by(p.system.shared_h()));
            worst = std::max(worst, gram_minus_identity(b.basis, &p.system.h()).max_abs());
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("krylov.weighted_hn_skew", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(120 + m));
            const KrylovBasis b = arnoldi(p.system.a_operator(), p.y0, std::min<std::size_t>(8, 2 * m),
                                          InnerProduct::weighted_by(p.system.shared_h()));
            worst = std::max(worst, skewness(b.small_matrix) / b.small_matrix.max_abs());
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("krylov.arnoldi_span", [&] {
        double worst = 0.0;
        for (std::size_t m = 2; m <= 6; ++m) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(130 + m));
            const std::size_t n = m;
            const KrylovBasis b = arnoldi(p.system.a_operator(), p.y0, n, InnerProduct::euclidean());
            Vector w = p.y0;
            for (std::size_t i = 0; i < b.dim(); ++i) {
                if (i > 0) w = p.system.apply_a(w);
                const Vector coeff = matvec_transposed(b.basis, w);
                const Vector proj = matvec(b.basis, coeff);
                worst = std::max(worst, norm2(subtract(w, proj)) / norm2(w));
            }
        }
        return Measurement{worst, 1e-9};
    });

    suite.check("krylov.lanczos_j_orthogonality", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(140 + m));
            for (std::size_t n : {1, 2, 4}) {
                if (n > m) continue;
                const KrylovBasis b = symplectic_lanczos(p.system.a_operator(), p.y0, n);
                worst = std::max(worst, j_orthogonality_defect(b.basis));
            }
        }
        return Measurement{worst, 1e-8};
    });

    suite.check("krylov.lanczos_reduced_hamiltonian", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 25}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(150 + m));
            const std::size_t n = std::min<std::size_t>(m, 5);
            const KrylovBasis b = symplectic_lanczos(p.system.a_operator(), p.y0, n);
            // J^{-1} H_{2n} = -J H_{2n} must be symmetric
            const DenseMatrix jh = scale(j_apply_rows(b.small_matrix), -1.0);
            worst = std::max(worst, asymmetry_of(jh));
            // recurrence matrix equals J_{2n} S^T H S
            DenseMatrix hs(b.basis.rows(), b.basis.cols());
            for (std::size_t c = 0; c < b.basis.cols(); ++c) hs.set_column(c, p.system.apply_h(b.basis.column(c)));
            const DenseMatrix direct = j_apply_rows(multiply_transposed(b.basis, hs));
            worst = std::max(worst, max_abs_diff(direct, b.small_matrix));
        }
        return Measurement{worst, 1e-8};
    });

    suite.check("krylov.blockj_j_orthogonality", [&] {
        double worst = 0.0;
        for (std::size_t m : {3, 10, 40}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(160 + m));
            for (std::size_t n : {1, 3, 6}) {
                const KrylovBasis b = block_j_basis(p.system.a_operator(), p.y0, std::min(n, 2 * m));
                worst = std::max(worst, j_orthogonality_defect(b.basis));
            }
        }
        return Measurement{worst, 1e-12};
    });

    // projection-integrators

    const Schedule short_run{0.004, 2.0, std::nullopt};
    const Schedule short_restart{0.004, 2.0, 0.4};

    suite.check("projection.slpm_energy", [&] {
        double worst = 0.0;
        for (std::size_t m : {50, 100}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(170 + m));
            const double e0 = energy(p.system, p.y0);
            for (std::size_t d : {4, 8}) {
                for (const Schedule& s : {short_run, short_restart}) {
                    const TrajectoryRecord r = run_method(p.system, p.y0, Method::SLPM, d, s);
                    worst = std::max(worst, r.max_abs_energy_error() / (1.0 + std::abs(e0)));
                }
            }
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("projection.bjpm_energy", [&] {
        double worst = 0.0;
        bool defect_ok = true;
        for (std::size_t m : {50, 100}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, seeded(180 + m));
            const double e0 = energy(p.system, p.y0);
            for (const Schedule& s : {short_run, short_restart}) {
                const TrajectoryRecord r = run_method(p.system, p.y0, Method::BJPM, 4, s);
                defect_ok = defect_ok && r.max_projection_defect <= 1e-10;
                worst = std::max(worst, r.max_abs_energy_error() / (1.0 + std::abs(e0)));
            }
        }
        return Measurement{worst, 1e-10, defect_ok && worst <= 1e-10};
    });

    suite.check("projection.apmh_integrals", [&] {
        double worst = 0.0;
        const Problem p = gen_random(ProblemFamily::RandomFull, 50, seeded(190));
        DiagnosticsOptions diag;
        diag.integral_orders = {0, 1};
        const TrajectoryRecord r = run_method(p.system, p.y0, Method::APMH, 4, short_run, diag);
        for (const Vector& v : r.integrals) worst = std::max(worst, max_deviation(v) / (1.0 + std::abs(v.front())));
        return Measurement{worst, 1e-11};
    });

    suite.check("projection.apm_modified_integrals", [&] {
        double worst = 0.0;
        const Problem p = gen_random(ProblemFamily::RandomSkewHamiltonian, 50, seeded(200));
        DiagnosticsOptions diag;
        diag.integral_orders = {0, 1};
        const TrajectoryRecord r = run_method(p.system, p.y0, Method::APM, 4, short_run, diag);
        for (const Vector& v : r.integrals) worst = std::max(worst, max_deviation(v) / (1.0 + std::abs(v.front())));
        return Measurement{worst, 1e-11};
    });

    suite.check("projection.apm_energy_bound", [&] {
        const Problem p = gen_random(ProblemFamily::RandomSkewHamiltonian, 50, seeded(210));
        const EnergyBound bound = energy_bound(p.system, p.y0, seeded(211));
        const TrajectoryRecord r = run_method(p.system, p.y0, Method::APM, 4, short_run);
        double excess = -std::numeric_limits<double>::infinity();
        for (double e : r.energy) excess = std::max(excess, e - bound.value);
        return Measurement{excess, 1e-10, bound.commutation_holds && excess <= 1e-10};
    });

    suite.check("projection.restart_consistency", [&] {
        const Problem p = gen_random(ProblemFamily::RandomFull, 20, seeded(220));
        double diff = 0.0;
        for (Method method : {Method::APM, Method::APMH, Method::SLPM, Method::BJPM}) {
            const TrajectoryRecord a = run_method(p.system, p.y0, method, 4, Schedule{0.004, 0.4, std::nullopt});
            const TrajectoryRecord b = run_method(p.system, p.y0, method, 4, Schedule{0.004, 0.4, 0.4});
            if (a.energy != b.energy || a.states != b.states) diff += 1.0;
        }
        return Measurement{diff, 0.0};
    });

    suite.check("projection.full_space_exactness", [&] {
        double worst = 0.0;
        const Problem p = gen_random(ProblemFamily::RandomFull, 4, seeded(230));
        DiagnosticsOptions diag;
        diag.global_error = true;
        for (Method method : {Method::APM, Method::APMH, Method::SLPM, Method::BJPM}) {
            const TrajectoryRecord r = run_method(p.system, p.y0, method, 8, short_run, diag);
            worst = std::max(worst, max_abs(r.global_error));
        }
        return Measurement{worst, 1e-12};
    });

    suite.check("projection.reduction_equivalence", [&] {
        double worst = 0.0;
        bool dims = true;
        for (std::size_t m : {5, 10}) {
            const Problem p = gen_random(ProblemFamily::SpecialH12ZeroH22I, m, seeded(240 + m));
            const DenseMatrix h = to_dense(p.system.h());
            DenseMatrix h11(m, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) h11(i, j) = h(i, j);
            const std::span<const double> p0(p.y0.data() + m, m);
            const EquivalenceReport rep = reduction_equivalence(AnyMatrix(h11), p0, 2, 0.004, 0.4);
            dims = dims && rep.dimensions_match;
            worst = std::max({worst, rep.basis_discrepancy, rep.trajectory_discrepancy});
        }
        return Measurement{worst, 1e-10, dims && worst <= 1e-10};
    });

    // problem-suite

    suite.check("problems.skew_family_structure", [&] {
        double worst = 0.0;
        for (std::size_t m : {1, 4, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomSkewHamiltonian, m, seeded(250 + m));
            const StructureFlags f = is_skew_hamiltonian(p.system);
            worst = std::max({worst, f.skew_violation, f.commutation_violation});
        }
        return Measurement{worst, 1e-13};
    });

    suite.check("problems.blockdiag_spd_spectrum", [&] {
        double lowest = std::numeric_limits<double>::infinity();
        bool pd = true;
        for (std::size_t m : {4, 50}) {
            const Problem p = gen_random(ProblemFamily::RandomBlockDiagSPD, m, seeded(260 + m));
            const DenseMatrix h = to_dense(p.system.h());
            const double sigma = spectral_norm(AnyMatrix(h), seeded(261));
            const DenseMatrix shifted = add(scale(DenseMatrix::identity(h.rows()), sigma), h, -1.0);
            lowest = std::min(lowest, sigma - spectral_norm(AnyMatrix(shifted), seeded(262), 1e-12, 100000));
            pd = pd && is_positive_definite(add(h, DenseMatrix::identity(h.rows()), -(0.1 - 1e-10)));
        }
        return Measurement{lowest, 0.1 - 1e-10, pd};
    });

    suite.check("problems.generator_determinism", [&] {
        double diff = 0.0;
        for (ProblemFamily f : {ProblemFamily::RandomBlockDiagSPD, ProblemFamily::RandomSkewHamiltonian,
                                ProblemFamily::RandomFull, ProblemFamily::SpecialH12ZeroH22I, ProblemFamily::Wave2D,
                                ProblemFamily::Maxwell1D, ProblemFamily::Maxwell3D}) {
            const ProblemSpec spec{f, 4, seeded(270), std::nullopt};
            const Problem a = make_problem(spec);
            const Problem b = make_problem(spec);
            if (a.y0 != b.y0 || !std::ranges::equal(to_dense(a.system.h()).entries(), to_dense(b.system.h()).entries())) diff += 1.0;
        }
        return Measurement{diff, 0.0};
    });

    suite.check("problems.wave2d_negative_definite", [&] {
        double failures = 0.0;
        for (std::size_t n : {4, 8}) {
            const SparseMatrix g = wave2d_laplacian(n);
            if (!is_positive_definite(scale(g.to_dense(), -1.0))) failures += 1.0;
        }
        return Measurement{failures, 0.0};
    });

    suite.check("problems.wave2d_energy_reference", [&] {
        const Problem p = wave2d(4, seeded(280));
        const TrajectoryRecord r = reference_solution(p.system, p.y0, short_run);
        const double e0 = r.energy.front();
        return Measurement{vector_range(r.energy) / (1.0 + std::abs(e0)), 1e-11};
    });

    suite.check("problems.maxwell1d_coupling", [&] {
        const DenseMatrix g = maxwell1d_coupling(4);
        const DenseMatrix expected(3, 5, {-2, 0, 1, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 0, 2});
        return Measurement{max_abs_diff(g, expected), 0.0};
    });

    suite.check("problems.maxwell1d_weighted_skew", [&] {
        double worst = 0.0;
        for (std::size_t n : {4, 8}) {
            const Problem p = maxwell1d(n);
            const KrylovBasis b =
                arnoldi(p.system.a_operator(), p.y0, 4, InnerProduct::weighted_by(p.system.shared_h()));
            worst = std::max(worst, skewness(b.small_matrix) / b.small_matrix.max_abs());
            const SparseMatrix* s = p.system.structure();
            worst = std::max(worst, max_abs_diff(s->to_dense(), scale(s->to_dense().transpose(), -1.0)));
        }
        return Measurement{worst, 1e-10};
    });

    suite.check("problems.maxwell3d_structure", [&] {
        double worst = 0.0;
        bool rejected = true;
        for (std::size_t n : {4, 8}) {
            const SparseMatrix g1 = maxwell3d_curl_surrogate(n);
            const DenseMatrix gd = g1.to_dense();
            worst = std::max(worst, asymmetry_of(gd));
            const Problem p = maxwell3d(n, seeded(290 + n));
            worst = std::max(worst, is_skew_hamiltonian(p.system).skew_violation);
            try {
                (void)build_projection(p.system, p.y0, Method::APMH, 4);
                rejected = false;
            } catch (const IndefiniteWeightError&) {
            }
        }
        return Measurement{worst, 0.0, rejected && worst == 0.0};
    });

    json doc{{"seed", seed},
             {"negative_control", negative_control},
             {"properties", suite.properties()},
             {"all_pass", suite.all_pass()}};
    return {doc.dump(2) + "\n", suite.all_pass()};
}

} // namespace hamkrylov
