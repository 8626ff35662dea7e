// Acceptance criteria, one PASS/FAIL line each; nonzero exit if any fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/format.hpp"
#include "hamkrylov/problems.hpp"
#include "hamkrylov/projection.hpp"
#include "hamkrylov/runner.hpp"

using namespace hamkrylov;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) { return format_double(x); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    return out;
}

double max_deviation(const Vector& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
    return worst;
}

DenseMatrix leading_block(const DenseMatrix& h, std::size_t m) {
    DenseMatrix out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j) = h(i, j);
    return out;
}

// 1. Cayley reference against expm, second order
Verdict oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_error = 0.0;
    double worst_ratio_gap = 0.0;
    std::ostringstream detail;
    bool ok = true;
    for (std::size_t m = 1; m <= 4; ++m) {
        const Problem p = gen_random(ProblemFamily::RandomFull, m, 100 + m);
        const DenseMatrix a = p.system.materialize_a();
        const double horizon = 2.0;
        Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(p.y0.data(), static_cast<Eigen::Index>(p.y0.size()));
        const Eigen::VectorXd exact = (to_eigen(a) * horizon).exp() * y0;

        std::array<double, 2> err{};
        for (int level = 0; level < 2; ++level) {
            const double h = 0.004 / (level == 0 ? 1.0 : 2.0);
            const TrajectoryRecord r = reference_solution(p.system, p.y0, Schedule{h, horizon, std::nullopt});
            const Vector& yT = r.states.back();
            double e2 = 0.0;
            for (std::size_t i = 0; i < yT.size(); ++i) e2 += std::pow(yT[i] - exact(static_cast<Eigen::Index>(i)), 2);
            err[level] = std::sqrt(e2);
        }
        const double ratio = err[0] / err[1];
        worst_error = std::max(worst_error, err[0]);
        worst_ratio_gap = std::max(worst_ratio_gap, std::abs(ratio - 4.0) / 4.0);
        ok = ok && err[0] <= 1e-5 && std::abs(ratio - 4.0) <= 0.8;
        detail << " m=" << m << ": err=" << fmt(err[0]) << " ratio=" << fmt(ratio) << ";";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 5.0;
    detail << " runtime=" << fmt(secs) << "s";
    return {ok, detail.str()};
}

Schedule paper_restart() { return Schedule{0.004, 200.0, 0.4}; }

// 2. SLPM energy with restart
Verdict slpm_energy() {
    const auto t0 = std::chrono::steady_clock::now();
    const Problem p = gen_random(ProblemFamily::RandomFull, 100, 2);
    DiagnosticsOptions diag;
    diag.max_state_samples = 2;
    const TrajectoryRecord r = run_method(p.system, p.y0, Method::SLPM, 4, paper_restart(), diag);
    const double e = r.max_abs_energy_error();
    const double secs = seconds_since(t0);
    return {e <= 1e-9 && secs < 60.0,
            "max|energy error|=" + fmt(e) + " restarts=" + std::to_string(r.projections) + " runtime=" + fmt(secs) +
                "s"};
}

// 3. BJPM energy with restart, stabilized basis
Verdict bjpm_energy() {
    const auto t0 = std::chrono::steady_clock::now();
    const Problem p = gen_random(ProblemFamily::RandomFull, 100, 2);
    DiagnosticsOptions diag;
    diag.max_state_samples = 2;
    const TrajectoryRecord r = run_method(p.system, p.y0, Method::BJPM, 4, paper_restart(), diag);
    const double e = r.max_abs_energy_error();
    const double secs = seconds_since(t0);
    const bool hyp = r.max_projection_defect <= 1e-10;
    return {hyp && e <= 1e-9 && secs < 60.0, "projection defect=" + fmt(r.max_projection_defect) +
                                                 " max|energy error|=" + fmt(e) + " runtime=" + fmt(secs) + "s"};
}

// 4. APMH first integrals, no restart
Verdict apmh_integrals() {
    const Problem p = gen_random(ProblemFamily::RandomBlockDiagSPD, 100, 4);
    DiagnosticsOptions diag;
    diag.integral_orders = {0, 1};
    diag.max_state_samples = 2;
    const TrajectoryRecord r = run_method(p.system, p.y0, Method::APMH, 4, Schedule{0.004, 20.0, std::nullopt}, diag);
    bool ok = r.integral_kind == IntegralKind::WeightedArnoldi;
    std::ostringstream d;
    for (std::size_t i = 0; i < r.integrals.size(); ++i) {
        const double dev = max_deviation(r.integrals[i]);
        const double bound = 1e-11 * (1.0 + std::abs(r.integrals[i].front()));
        ok = ok && dev <= bound;
        d << "H_" << r.integral_orders[i] << ": dev=" << fmt(dev) << " (bound " << fmt(bound) << "); ";
    }
    return {ok, d.str()};
}

// 5. APM on skew Hamiltonian A: energy bound and modified integrals
Verdict apm_skew() {
    const Problem p = gen_random(ProblemFamily::RandomSkewHamiltonian, 100, 5);
    const EnergyBound bound = energy_bound(p.system, p.y0, 5);
    DiagnosticsOptions diag;
    diag.integral_orders = {0, 1};
    diag.max_state_samples = 2;
    const TrajectoryRecord r =
        run_method(p.system, p.y0, Method::APM, 4, Schedule{0.004, 200.0, std::nullopt}, diag);
    double emax = -1e300;
    for (double e : r.energy) emax = std::max(emax, e);
    bool ok = bound.commutation_holds && emax <= bound.value + 1e-10 && r.integral_kind == IntegralKind::Modified;
    std::ostringstream d;
    d << "max energy=" << fmt(emax) << " bound=" << fmt(bound.value) << "; ";
    for (std::size_t i = 0; i < r.integrals.size(); ++i) {
        const double dev = max_deviation(r.integrals[i]);
        const double lim = 1e-11 * (1.0 + std::abs(r.integrals[i].front()));
        ok = ok && dev <= lim;
        d << "modified H_" << r.integral_orders[i] << ": dev=" << fmt(dev) << " (bound " << fmt(lim) << "); ";
    }
    return {ok, d.str()};
}

// 6. APM does not preserve energy on block-diagonal SPD H
Verdict apm_drift() {
    const Problem p = gen_random(ProblemFamily::RandomBlockDiagSPD, 100, 6);
    DiagnosticsOptions diag;
    diag.max_state_samples = 2;
    const Schedule s{0.004, 200.0, std::nullopt};
    const TrajectoryRecord apm = run_method(p.system, p.y0, Method::APM, 4, s, diag);
    const TrajectoryRecord slpm = run_method(p.system, p.y0, Method::SLPM, 4, s, diag);
    const double ea = apm.max_abs_energy_error();
    const double es = slpm.max_abs_energy_error();
    return {ea > 100.0 * es, "APM max|energy error|=" + fmt(ea) + " SLPM=" + fmt(es)};
}

// 7. model reduction coincides with APM
Verdict prop8() {
    double worst = 0.0;
    bool ok = true;
    for (std::size_t m : {5, 10, 20}) {
        for (std::size_t n : {2, 3}) {
            const Problem p = gen_random(ProblemFamily::SpecialH12ZeroH22I, m, 70 + m);
            const DenseMatrix h11 = leading_block(to_dense(p.system.h()), m);
            const std::span<const double> p0(p.y0.data() + m, m);
            const EquivalenceReport rep = reduction_equivalence(AnyMatrix(h11), p0, n, 0.004, 2.0);
            ok = ok && rep.dimensions_match && rep.basis_discrepancy <= 1e-10 && rep.trajectory_discrepancy <= 1e-10;
            worst = std::max({worst, rep.basis_discrepancy, rep.trajectory_discrepancy});
        }
    }
    return {ok, "worst discrepancy=" + fmt(worst)};
}

// 8. global error against Krylov dimension
Verdict convergence() {
    ExperimentConfig c;
    c.problem = ProblemSpec{ProblemFamily::RandomFull, 10, 8, std::nullopt};
    c.methods = {"APMH", "SLPM", "BJPM"};
    c.horizon = 2.0;
    c.h = 0.004;
    c.sweep = std::vector<std::size_t>{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    c.output_dir = std::filesystem::temp_directory_path() / "hamkrylov_acceptance_convergence";
    const ConvergenceResult res = convergence_study(c);
    bool ok = !res.any_failure();
    for (const auto& [method, mono] : res.monotone) ok = ok && mono;
    std::ostringstream d;
    for (const ConvergenceRow& row : res.rows) {
        if (row.krylov_dim == 20) {
            const double e = row.final_global_error.value_or(1.0);
            ok = ok && e <= 1e-12;
            d << row.method << "@20=" << fmt(e) << " ";
        }
    }
    for (const auto& [method, mono] : res.monotone) d << method << (mono ? " monotone " : " NOT monotone ");
    return {ok, d.str()};
}

// 9. PDE problems
Verdict pde_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream d;
    bool ok = true;
    DiagnosticsOptions plain;
    plain.max_state_samples = 2;

    const Problem wave = wave2d(8, 9);
    for (Method m : {Method::SLPM, Method::BJPM, Method::APMH}) {
        const TrajectoryRecord r = run_method(wave.system, wave.y0, m, 4, Schedule{0.004, 20.0, 0.4}, plain);
        const double e = r.max_abs_energy_error();
        ok = ok && e <= 1e-9;
        d << "Wave2D " << to_string(m) << " energy err=" << fmt(e) << "; ";
    }

    const Problem mx1 = maxwell1d(32);
    DiagnosticsOptions ints;
    ints.integral_orders = {0, 1};
    ints.max_state_samples = 2;
    {
        const TrajectoryRecord r =
            run_method(mx1.system, mx1.y0, Method::APMH, 4, Schedule{0.004, 2.0, std::nullopt}, ints);
        for (std::size_t i = 0; i < r.integrals.size(); ++i) {
            const double dev = max_deviation(r.integrals[i]);
            ok = ok && dev <= 1e-10;
            d << "Maxwell1D APMH H_" << i << " dev=" << fmt(dev) << "; ";
        }
    }

    const Problem mx3 = maxwell3d(4, 9);
    {
        const TrajectoryRecord r =
            run_method(mx3.system, mx3.y0, Method::APM, 4, Schedule{0.004, 2.0, std::nullopt}, ints);
        for (std::size_t i = 0; i < r.integrals.size(); ++i) {
            const double dev = max_deviation(r.integrals[i]);
            ok = ok && dev <= 1e-10;
            d << "Maxwell3D APM H_" << i << " dev=" << fmt(dev) << "; ";
        }
        bool rejected = false;
        try {
            (void)run_method(mx3.system, mx3.y0, Method::APMH, 4, Schedule{0.004, 2.0, std::nullopt}, plain);
        } catch (const IndefiniteWeightError&) {
            rejected = true;
        }
        ok = ok && rejected;
        d << "Maxwell3D APMH " << (rejected ? "rejected" : "NOT rejected") << "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 120.0;
    d << "runtime=" << fmt(secs) << "s";
    return {ok, d.str()};
}

// 10. structural invariants across seeds
Verdict structural() {
    double arnoldi_rel = 0.0;
    double weighted_gram = 0.0;
    double lanczos_j = 0.0;
    double block_j = 0.0;
    double hn_skew = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (std::size_t m : {4, 10, 50, 100}) {
            const Problem p = gen_random(ProblemFamily::RandomFull, m, 1000 + seed);
            const LinearOperator a = p.system.a_operator();
            const double na = spectral_norm(p.system.h(), seed); // |A|_2 = |H|_2 since J is orthogonal
            for (std::size_t d : {4, 8}) {
                if (d > 2 * m) continue;
                const KrylovBasis e = arnoldi(a, p.y0, d, InnerProduct::euclidean());
                arnoldi_rel = std::max(arnoldi_rel, relation_residual(a, e) / na);
                const KrylovBasis w = arnoldi(a, p.y0, d, InnerProduct::weighted_by(p.system.shared_h()));
                arnoldi_rel = std::max(arnoldi_rel, relation_residual(a, w) / (na * std::max(1.0, w.basis.max_abs())));
                DenseMatrix hv(w.basis.rows(), w.basis.cols());
                for (std::size_t c = 0; c < w.basis.cols(); ++c) hv.set_column(c, p.system.apply_h(w.basis.column(c)));
                weighted_gram = std::max(
                    weighted_gram, max_abs_diff(multiply_transposed(w.basis, hv), DenseMatrix::identity(w.dim())));
                hn_skew = std::max(hn_skew, add(w.small_matrix, w.small_matrix.transpose()).max_abs() /
                                                w.small_matrix.max_abs());
                const KrylovBasis s = symplectic_lanczos(a, p.y0, d / 2);
                lanczos_j = std::max(lanczos_j, j_orthogonality_defect(s.basis));
                const KrylovBasis b = block_j_basis(a, p.y0, d / 2);
                block_j = std::max(block_j, j_orthogonality_defect(b.basis));
            }
        }
    }
    const bool ok = arnoldi_rel <= 1e-10 && weighted_gram <= 1e-10 && lanczos_j <= 1e-8 && block_j <= 1e-12 &&
                    hn_skew <= 1e-10;
    return {ok, "arnoldi relation=" + fmt(arnoldi_rel) + " V^T H V - I=" + fmt(weighted_gram) +
                    " lanczos S^T J S - J=" + fmt(lanczos_j) + " blockJ=" + fmt(block_j) + " H_n skew=" + fmt(hn_skew)};
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    if (status != 0) out += "\n<exit " + std::to_string(status) + ">";
    return out;
}

// 11. byte-identical invariant reports
Verdict determinism() {
    const std::string cmd = std::string(HAMKRYLOV_CLI_PATH) + " invariants --seed 7";
    const std::string a = capture(cmd);
    const std::string b = capture(cmd);
    const bool ok = !a.empty() && a == b && a.find("<exit") == std::string::npos;
    return {ok, "report bytes=" + std::to_string(a.size()) + (a == b ? " identical" : " DIFFER")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"1 oracle equivalence (Cayley vs expm, order 2)", oracle_equivalence},
        {"2 SLPM energy preservation with restart", slpm_energy},
        {"3 BJPM energy preservation with restart", bjpm_energy},
        {"4 APMH first integrals k=0,1", apmh_integrals},
        {"5 APM bounded energy and modified integrals for skew A", apm_skew},
        {"6 APM energy drift on block-diagonal SPD H", apm_drift},
        {"7 model reduction equals APM", prop8},
        {"8 convergence in the Krylov dimension", convergence},
        {"9 PDE suite", pde_suite},
        {"10 structural invariants over 20 seeds", structural},
        {"11 deterministic invariant reports", determinism},
    };
    int failures = 0;
    for (const auto& [name, body] : criteria) {
        Verdict v;
        try {
            v = body();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << "  [" << v.detail << "]" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " acceptance criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
